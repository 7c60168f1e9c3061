#pragma once

// The symmetric group S_m acts on diagrams by permuting circle labels.
//
// Vectors here are combinations over the columns of a BasisResult's diagram
// set.  Two vectors are compared in the 4T quotient, by their coordinates in
// a Frame, so a translate counts as a basis member when it is equal to one
// modulo relations, not only when it is the same combination.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chordbasis/basis.hpp"

namespace chordbasis {

using Permutation = std::vector<std::size_t>;  // circle j moves to sigma[j]
using GeneralizedBasisVector = Combination;

/// All m! permutations in lexicographic order, identity first.
std::vector<Permutation> all_permutations(std::size_t m);
/// Transpositions (i, i+1), which generate S_m.
std::vector<Permutation> adjacent_transpositions(std::size_t m);

Combination act(const Permutation& sigma, const Combination& v, const DiagramSet& ds);

Combination add(const Combination& a, const Combination& b);

/// A list of vectors forming a basis of the quotient, with exact
/// coordinates for any vector in the span.
class Frame {
 public:
  /// Throws ValidationError unless `vectors` is a basis of the quotient.
  Frame(const BasisResult& b, std::vector<Combination> vectors);
  /// The non-pivot diagrams themselves.
  explicit Frame(const BasisResult& b);

  std::size_t size() const { return vectors_.size(); }
  const std::vector<Combination>& vectors() const { return vectors_; }
  const BasisResult& basis() const { return *b_; }

  /// Coordinates over frame positions; columns of the result are positions.
  SparseRow coordinates(const Combination& v) const;

 private:
  SparseRow raw_coordinates(const Combination& v) const;

  const BasisResult* b_;
  std::vector<Combination> vectors_;
  std::vector<std::size_t> position_;  // diagram column -> basis position, or npos
  bool identity_ = false;
  std::vector<std::vector<Rational>> inverse_columns_;  // column j of the inverse change of basis
};

/// Rank of the vectors in the quotient.
std::size_t quotient_rank(const BasisResult& b, const std::vector<Combination>& vectors);

/// Frame position k when `coords` is exactly the k-th unit vector.
std::optional<std::size_t> unit_position(const SparseRow& coords);

struct Orbit {
  std::vector<Combination> members;          // one per distinct quotient class, first translate found
  std::vector<SparseRow> member_coordinates;
  std::vector<std::size_t> in_basis;         // frame positions, ascending
  bool complete = false;
  bool type_one = false;
  bool type_two = false;
  // First witness of each type: a basis position and the position it leans on.
  std::optional<std::pair<std::size_t, std::size_t>> type_one_witness;
  std::optional<std::pair<std::size_t, std::size_t>> type_two_witness;

  std::size_t size() const { return members.size(); }
};

struct OrbitReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<Orbit> orbits;
  std::vector<std::size_t> orbit_of;  // frame position -> orbit index

  std::size_t incomplete() const;
  /// Every incomplete orbit is of type I or type II.
  bool dichotomy_holds() const;
  std::vector<std::size_t> sizes() const;
};

OrbitReport orbit_report(const Frame& f);
inline OrbitReport orbit_report(const BasisResult& b) { return orbit_report(Frame(b)); }

struct EquivariantResult {
  std::vector<GeneralizedBasisVector> vectors;
  /// Incomplete orbit count before each repair and after the last one.
  std::vector<std::size_t> incomplete_history;
  std::vector<std::string> log;
};

/// Repairs an m = 2 basis until every orbit is complete.  Prefers the sum
/// repair, falls back to the swap repair when the sum would be dependent,
/// and throws ChordError if neither applies or a round fails to reduce the
/// number of incomplete orbits.
EquivariantResult equivariantize_m2(const BasisResult& b);

/// True iff the vectors form a basis of the quotient that is closed under
/// S_m up to the relations.  `why` receives the reason on failure.
bool verify_equivariant(const std::vector<GeneralizedBasisVector>& vectors, const BasisResult& b,
                        std::string* why = nullptr);

// --- underlying graphs -------------------------------------------------------------

/// Loop-and-multi-edge graph on the circles; edges (i, j) with i <= j, sorted.
using Multigraph = std::vector<std::pair<std::size_t, std::size_t>>;

Multigraph underlying_graph(const ChordDiagram& d);
Multigraph permute_graph(const Multigraph& g, const Permutation& sigma);

/// One diagram per underlying labeled graph, chosen so that S_m permutes
/// the chosen diagrams: per graph orbit a representative diagram fixed (in
/// the quotient) by the graph's stabilizer, and all its translates.
/// nullopt when no such choice is a basis of the quotient.
std::optional<std::vector<GeneralizedBasisVector>> graph_normal_basis(const BasisResult& b);

// --- trees ---------------------------------------------------------------------------

struct LabeledTree {
  std::size_t vertices = 1;
  Multigraph edges;  // sorted, i < j

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
  friend auto operator<=>(const LabeledTree&, const LabeledTree&) = default;
};

/// Trees on `vertices` labeled vertices in Prufer-sequence order.
std::vector<LabeledTree> all_labeled_trees(std::size_t vertices);
LabeledTree tree_from_prufer(const std::vector<std::size_t>& seq, std::size_t vertices);
std::vector<std::size_t> prufer_of(const LabeledTree& t);

/// Diagram realizing `t`: one chord per edge, feet on each circle ordered by
/// the neighbouring circle label, ascending.
ChordDiagram tree_diagram(const LabeledTree& t);

/// One normal-form diagram per labeled tree on n + 1 vertices, sorted.
std::vector<ChordDiagram> tree_basis(std::size_t n);

/// Underlying tree of a connected diagram with m = n + 1.  Throws
/// ValidationError for other diagrams.
LabeledTree tree_reduce(const ChordDiagram& d);

// --- files ---------------------------------------------------------------------------

void write_orbit_report(std::ostream& out, const OrbitReport& r, const DiagramSet& ds);
std::string orbit_report_json(const OrbitReport& r, const DiagramSet& ds);

/// Header "equivariant m= n= count= digest=" then one vector per line.
void write_equivariant(std::ostream& out, const std::vector<GeneralizedBasisVector>& vectors, const DiagramSet& ds);
std::vector<GeneralizedBasisVector> read_equivariant(std::istream& in, const DiagramSet& ds);

}  // namespace chordbasis
