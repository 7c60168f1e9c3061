#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chordbasis/budget.hpp"
#include "chordbasis/diagram.hpp"

namespace chordbasis {

/// Sorted, duplicate-free list of canonical diagrams with fixed (m, n).
struct DiagramSet {
  std::size_t m = 1;
  std::size_t n = 0;
  bool connected_only = false;
  std::vector<ChordDiagram> diagrams;

  std::size_t size() const { return diagrams.size(); }
  const ChordDiagram& operator[](std::size_t i) const { return diagrams[i]; }

  /// Position of `d`, or nullopt when absent.
  std::optional<std::size_t> index_of(const ChordDiagram& d) const;

  /// Checks ordering, (m, n) and the connectivity flag.
  void validate() const;

  friend bool operator==(const DiagramSet&, const DiagramSet&) = default;
};

enum class EnumerationMethod {
  /// One candidate per first-occurrence sequence; keep it iff it is its own
  /// canonical form.
  Orderly,
  /// Every sequence with each label twice, canonicalized and merged into an
  /// ordered set.  Slow; kept as a cross-check.
  Naive,
};

struct EnumerationOptions {
  EnumerationMethod method = EnumerationMethod::Orderly;
  std::uint64_t max_candidates = 1'000'000'000ull;
  unsigned threads = 1;
  Deadline deadline;
};

/// Candidate count the chosen method would visit, saturating at UINT64_MAX.
std::uint64_t candidate_count(std::size_t m, std::size_t n, bool connected, EnumerationMethod method);

DiagramSet enumerate_all(std::size_t m, std::size_t n, const EnumerationOptions& opts = {});
DiagramSet enumerate_connected(std::size_t m, std::size_t n, const EnumerationOptions& opts = {});

/// Every nondecreasing boundary vector 0 = j_1 <= ... <= j_m <= j_{m+1} = len.
std::vector<std::vector<Offset>> boundary_vectors(std::size_t m, std::size_t len, bool skip_empty);

// --- interchange file ----------------------------------------------------------

/// Body lines (one diagram per line) hashed with SHA-256, hex encoded.
std::string digest(const DiagramSet& ds);

void write_diagram_set(std::ostream& out, const DiagramSet& ds);
DiagramSet read_diagram_set(std::istream& in);

}  // namespace chordbasis
