#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "chordbasis/diagram.hpp"

namespace chordbasis {

/// Wall-clock limit shared by the long-running stages.  The default never
/// expires.
struct Deadline {
  using Clock = std::chrono::steady_clock;
  Clock::time_point at = Clock::time_point::max();

  /// No limit when `seconds` is not positive.
  static Deadline after(double seconds) {
    Deadline d;
    if (seconds > 0) {
      d.at = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
    }
    return d;
  }

  bool unlimited() const { return at == Clock::time_point::max(); }
  bool expired() const { return !unlimited() && Clock::now() >= at; }

  void check(std::string_view stage) const {
    if (expired()) throw BudgetExceeded("time budget exhausted during " + std::string(stage));
  }
};

}  // namespace chordbasis
