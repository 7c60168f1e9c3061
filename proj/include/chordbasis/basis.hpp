#pragma once

// Bases of the 4T quotients.
//
// connected_basis() runs the full pipeline for connected diagrams:
// enumerate, generate 4T rows, exact RREF.  Diagrams on non-pivot columns
// form the basis and every pivot diagram is expressed over them.  Bases of
// the full (possibly disconnected) space are assembled from connected ones
// by taking disjoint unions over circle partitions and chord compositions.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chordbasis/enumerate.hpp"
#include "chordbasis/exactla.hpp"
#include "chordbasis/fourt.hpp"

namespace chordbasis {

struct BasisOptions {
  EnumerationOptions enumeration;
  RelationOptions relations;
  RrefOptions rref;
  /// Compare the exact rank with the rank modulo a random 62-bit prime.
  bool modular_check = true;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;

  void set_threads(unsigned t) {
    enumeration.threads = t;
    relations.threads = t;
  }
  void set_deadline(const Deadline& d) {
    enumeration.deadline = d;
    rref.deadline = d;
  }
};

/// Combination of diagrams; columns index BasisResult::diagrams.
using Combination = SparseRow;

struct BasisResult {
  DiagramSet diagrams;
  std::vector<Column> pivots;  // ascending
  std::vector<Column> basis;   // ascending; complement of pivots
  Expressions expressions;     // pivot -> combination of basis columns

  std::size_t dimension() const { return basis.size(); }
  std::vector<ChordDiagram> basis_diagrams() const;
  bool is_basis_column(Column c) const;

  /// Throws ValidationError if the pivot/basis split or the expressions
  /// are inconsistent with the diagram set.
  void validate() const;

  friend bool operator==(const BasisResult&, const BasisResult&) = default;
};

/// Basis from an already generated diagram set and relation list.
BasisResult basis_from_relations(DiagramSet ds, const std::vector<Relation>& rows, const BasisOptions& opts = {});

BasisResult connected_basis(std::size_t m, std::size_t n, const BasisOptions& opts = {});

/// Class of `d` in the quotient as a combination of basis columns.  Throws
/// ValidationError when `d` is not in the enumerated set.
Combination express(const ChordDiagram& d, const BasisResult& b);
/// Linear extension of express() to combinations of diagram columns.
Combination express(const Combination& v, const BasisResult& b);

// --- dimensions ------------------------------------------------------------------

enum class Source : std::uint8_t {
  Live,        // computed by connected_basis
  Bundled,     // copied from the reference table shipped with the library
  Convention,  // C(r, s) = 0 for s < r - 1, C(1, 0) = 1
  Formula,     // evaluated from connected dimensions
};

std::string to_string(Source s);

struct DimensionTable {
  struct Cell {
    std::uint64_t value = 0;
    Source source = Source::Live;
    friend bool operator==(const Cell&, const Cell&) = default;
  };
  std::map<std::pair<std::size_t, std::size_t>, Cell> cells;  // keyed (m, n)

  void set(std::size_t m, std::size_t n, std::uint64_t v, Source s) { cells[{m, n}] = Cell{v, s}; }
  std::optional<Cell> find(std::size_t m, std::size_t n) const;
};

/// Conventional value of C(m, n) when it needs no computation.
std::optional<std::uint64_t> conventional_C(std::size_t m, std::size_t n);

/// Reference connected dimensions for n <= 5, m <= n + 1.
std::optional<std::uint64_t> bundled_C(std::size_t m, std::size_t n);
/// Reference full dimensions for 1 <= n <= 5, 1 <= m <= 6 as published.
std::optional<std::uint64_t> bundled_A(std::size_t m, std::size_t n);

std::uint64_t dim_C(std::size_t m, std::size_t n, const BasisOptions& opts = {});

struct TableOptions {
  BasisOptions basis;
  /// Rows n >= this come from the bundled table instead of live runs.
  std::size_t bundled_from_n = static_cast<std::size_t>(-1);
};

/// C(m, n) for 1 <= m <= m_max, 0 <= n <= n_max.
DimensionTable dim_table_C(std::size_t n_max, std::size_t m_max, const TableOptions& opts = {});

/// Full dimension from connected ones: sum over the number c of components
/// of (1/c!) * sum over ordered circle counts (m_1..m_c) of the multinomial
/// m!/(m_1!..m_c!) times sum over weak compositions (n_1..n_c) of n of
/// prod C(m_i, n_i).  Each c-term is checked to be divisible by c!.
/// Throws ValidationError when a needed C value is absent.
std::uint64_t dim_A(std::size_t m, std::size_t n, const DimensionTable& c_table);

DimensionTable dim_table_A(std::size_t n_max, std::size_t m_max, const DimensionTable& c_table);

/// Rows n = 1..n_max, columns m = 1..m_max.  Connected tables leave the
/// conventional zeros m > n + 1 blank and add a row total.
std::string format_dimension_table(const DimensionTable& t, bool connected, std::size_t n_max, std::size_t m_max);
std::string dimension_table_csv(const DimensionTable& t, bool connected, std::size_t n_max, std::size_t m_max);

/// Closed-form polynomial in m for the full dimension with n chords,
/// 1 <= n <= 5, transcribed from the reference.  Throws ValidationError for
/// other n.
Rational eval_A_polynomial(std::size_t n, std::size_t m);

// --- full basis ------------------------------------------------------------------

using ConnectedBases = std::map<std::pair<std::size_t, std::size_t>, BasisResult>;

/// Connected bases for every (r, s) a full basis of (m, n) can use.
ConnectedBases connected_bases_for(std::size_t m, std::size_t n, const BasisOptions& opts = {});

/// Set partition of the circles with parts ordered by lowest member, and
/// the chord count assigned to each part.
struct PartitionComposition {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> chords;
};

/// Every pair with all connected factors nonzero-dimensional in principle
/// (chords[i] >= |parts[i]| - 1).
std::vector<PartitionComposition> partition_compositions(std::size_t m, std::size_t n);

/// Disjoint unions of one connected basis element per component, sorted.
std::vector<ChordDiagram> full_basis(std::size_t m, std::size_t n, const ConnectedBases& connected);

// --- basis file ------------------------------------------------------------------

void write_basis(std::ostream& out, const BasisResult& b);
/// Reads a basis file written by write_basis and checks it against itself:
/// digests, pivot/basis split and expressions.
BasisResult read_basis(std::istream& in);

/// "coef*<diagram> + coef*<diagram> ..." or "0".
std::string format_combination(const Combination& v, const DiagramSet& ds);
/// Inverse of format_combination; diagrams are canonicalized and looked up.
Combination parse_combination(std::string_view text, const DiagramSet& ds);

}  // namespace chordbasis
