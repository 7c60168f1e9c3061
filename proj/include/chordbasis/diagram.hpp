#pragma once

// Chord diagrams on distinguishable, clockwise-oriented circles.
//
// A diagram with m circles and n chords is stored as a Gauss code: the
// sequence of chord labels met while walking each circle clockwise, plus
// m+1 block boundaries.  Circle i owns feet[starts[i] .. starts[i+1]).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chordbasis {

using Label = std::uint8_t;
using Offset = std::uint16_t;

inline constexpr std::size_t kMaxChords = 200;
inline constexpr std::size_t kMaxCircles = 1000;

class ChordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ChordError {
 public:
  using ChordError::ChordError;
};

class ValidationError : public ChordError {
 public:
  using ChordError::ChordError;
};

/// Thrown when an instance exceeds a configured resource cap.
class BudgetExceeded : public ChordError {
 public:
  using ChordError::ChordError;
};

struct StringRep {
  std::vector<Label> feet;
  std::vector<Offset> starts{0};

  StringRep() = default;
  StringRep(std::vector<Label> f, std::vector<Offset> s) : feet(std::move(f)), starts(std::move(s)) {}

  /// Builds a rep from per-circle label lists.
  static StringRep from_blocks(const std::vector<std::vector<Label>>& blocks);

  std::size_t circles() const { return starts.size() - 1; }
  std::size_t chords() const { return feet.size() / 2; }
  std::size_t circle_size(std::size_t i) const { return starts[i + 1] - starts[i]; }
  std::span<const Label> circle(std::size_t i) const {
    return {feet.data() + starts[i], circle_size(i)};
  }
  std::vector<std::vector<Label>> blocks() const;

  /// Throws ValidationError unless every invariant holds.
  void validate() const;
  bool valid() const noexcept;

  friend bool operator==(const StringRep&, const StringRep&) = default;
  friend std::strong_ordering operator<=>(const StringRep& a, const StringRep& b);
};

/// A string representation in canonical form.  Only canonicalize() and the
/// enumerator produce these, so equality is diagram equality.
class ChordDiagram {
 public:
  ChordDiagram() : rep_() {}

  const StringRep& rep() const { return rep_; }
  std::size_t circles() const { return rep_.circles(); }
  std::size_t chords() const { return rep_.chords(); }

  friend bool operator==(const ChordDiagram&, const ChordDiagram&) = default;
  friend std::strong_ordering operator<=>(const ChordDiagram& a, const ChordDiagram& b) {
    return a.rep_ <=> b.rep_;
  }

  /// Wraps a rep already known to be canonical.  No check is made.
  static ChordDiagram trusted(StringRep rep) { return ChordDiagram(std::move(rep)); }

 private:
  explicit ChordDiagram(StringRep rep) : rep_(std::move(rep)) {}
  StringRep rep_;
};

/// circle -> component id; ids are numbered by lowest member circle.
struct CirclePartition {
  std::vector<std::size_t> component_of;
  std::size_t count = 0;

  std::vector<std::vector<std::size_t>> classes() const;
  friend bool operator==(const CirclePartition&, const CirclePartition&) = default;
};

// --- text format -----------------------------------------------------------

StringRep parse(std::string_view text);
std::string format(const StringRep& rep);
inline std::string format(const ChordDiagram& d) { return format(d.rep()); }
ChordDiagram parse_diagram(std::string_view text);

// --- canonical form ---------------------------------------------------------

/// Lexicographically least representation over all per-circle rotations,
/// chords renumbered by first occurrence.  Greedy circle-by-circle search
/// that branches on ties.
ChordDiagram canonicalize(const StringRep& rep);

/// Same result by trying every combination of rotations.  Exponential in m;
/// used as the reference the fast path is checked against.
ChordDiagram canonicalize_exhaustive(const StringRep& rep);

/// True iff `rep` equals its own canonical form.  `rep` must already be
/// numbered by first occurrence.  Exits on the first smaller rotation found.
bool is_canonical(const StringRep& rep);

/// Renumbers chords in order of first occurrence, keeping rotations.
StringRep relabel_first_occurrence(const StringRep& rep);

// --- structure ---------------------------------------------------------------

/// Block j of `d` moves to position sigma[j].
ChordDiagram permute_circles(const ChordDiagram& d, std::span<const std::size_t> sigma);

CirclePartition components(const StringRep& rep);
inline CirclePartition components(const ChordDiagram& d) { return components(d.rep()); }
bool is_connected(const StringRep& rep);
inline bool is_connected(const ChordDiagram& d) { return is_connected(d.rep()); }

/// Number of chords with both feet inside each component, by component id.
std::vector<std::size_t> component_chord_counts(const StringRep& rep, const CirclePartition& p);

struct PlacedPart {
  ChordDiagram diagram;
  std::vector<std::size_t> targets;  // part circle k lands on targets[k]
};

ChordDiagram disjoint_union(std::span<const PlacedPart> parts);

/// Full subdiagram on the listed circles (in that order); chords with a
/// foot outside the list are dropped.
ChordDiagram restrict_to(const ChordDiagram& d, std::span<const std::size_t> circles);

}  // namespace chordbasis

template <>
struct std::hash<chordbasis::ChordDiagram> {
  std::size_t operator()(const chordbasis::ChordDiagram& d) const noexcept;
};
