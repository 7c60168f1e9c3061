#pragma once

// Exact linear algebra over Q for 4T relation matrices.
//
// Rows are sparse and sorted by column.  The reduced row echelon form of a
// row space is unique for a fixed column order, so every elimination route
// here (rational, fraction-free, any row order) must agree bit for bit.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "chordbasis/budget.hpp"
#include "chordbasis/fourt.hpp"

namespace chordbasis {

using Rational = mpq_class;
using Column = std::uint32_t;

struct Entry {
  Column col = 0;
  Rational value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

using SparseRow = std::vector<Entry>;

struct ExactMatrix {
  std::size_t ncols = 0;
  std::vector<SparseRow> rows;

  std::size_t nrows() const { return rows.size(); }
  std::size_t nonzeros() const;
  /// Throws ValidationError on unsorted columns, stored zeros or bad indices.
  void validate() const;

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;
};

struct RrefResult {
  ExactMatrix rref;
  std::vector<Column> pivots;
  std::size_t rank = 0;

  friend bool operator==(const RrefResult&, const RrefResult&) = default;
};

enum class RrefMethod {
  Rational,      // rows kept monic over Q
  FractionFree,  // primitive integer rows, divided out only at the end
};

struct RrefOptions {
  RrefMethod method = RrefMethod::Rational;
  /// Cap on nonzeros held by the echelon rows at any time.
  std::size_t max_cells = 200'000'000;
  /// Switch to dense elimination once the echelon rows fill more than this
  /// fraction of (rank x ncols).
  double dense_fill = 0.5;
  std::size_t dense_min_rows = 32;
  Deadline deadline;
};

/// Embeds integer relation rows as rationals; rows that fully cancelled are
/// dropped.  Throws ValidationError on an out-of-range column.
ExactMatrix assemble(std::span<const Relation> rows, std::size_t ncols);

RrefResult rref(const ExactMatrix& mat, const RrefOptions& opts = {});

/// Plain dense Gauss-Jordan over Q.  Used as the dense fallback and for
/// small matrices.
RrefResult rref_dense(const ExactMatrix& mat);

/// pivot column -> x_pivot as a combination of non-pivot columns.
using Expressions = std::map<Column, SparseRow>;
Expressions express_pivots(const RrefResult& r);

/// Substitutes the pivot expressions into `row`; zero means the row lies in
/// the span of the relations.
SparseRow substitute(const SparseRow& row, const Expressions& expr);

// --- modular cross-check ------------------------------------------------------

bool is_prime_u64(std::uint64_t n);
/// Uniform random prime in [2^61, 2^62).
std::uint64_t random_prime_62(std::mt19937_64& rng);

/// Rank modulo p of the integer matrix (rational entries must have
/// denominators prime to p).  Sparse rows promote to dense ones once they
/// fill up; dense row arithmetic runs through the SIMD kernels.
std::size_t modular_rank(const ExactMatrix& mat, std::uint64_t p);

}  // namespace chordbasis
