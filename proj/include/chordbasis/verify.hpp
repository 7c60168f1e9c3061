#pragma once

// Verification profiles.  A run recomputes the connected bases in range,
// checks them against the reference tables and the structural properties,
// and optionally writes every intermediate result to an artifact directory.
// Artifacts depend only on the profile, never on thread count or timing.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "chordbasis/basis.hpp"
#include "chordbasis/cache.hpp"

namespace chordbasis {

enum class Profile { Fast, Full };

Profile profile_from_string(const std::string& s);
std::string to_string(Profile p);

struct VerifyOptions {
  Profile profile = Profile::Fast;
  BasisOptions basis;
  /// Nothing is written when empty.
  std::filesystem::path artifacts;
  /// Optional; connected bases are recomputed when null or disabled.
  Cache* cache = nullptr;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  Profile profile = Profile::Fast;
  std::vector<Check> checks;

  bool passed() const;
  /// One "PASS name: detail" or "FAIL name: detail" line per check.
  std::string text() const;
};

/// Largest chord count computed live by the profile.
std::size_t profile_n_max(Profile p);

VerifyReport run_verify(const VerifyOptions& opts);

/// Columns of `diagrams` in `ds`, each with coefficient 1.  Throws
/// ValidationError when a diagram is absent.
std::vector<Combination> as_combinations(const std::vector<ChordDiagram>& diagrams, const DiagramSet& ds);

}  // namespace chordbasis
