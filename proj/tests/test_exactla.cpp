#include <doctest.h>

#include <algorithm>
#include <random>

#include "chordbasis/exactla.hpp"
#include "oracle.hpp"

using namespace chordbasis;

TEST_CASE("sparse elimination equals the dense oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const ExactMatrix mat = oracle::random_matrix(rng, 10);
    const RrefResult r = rref(mat);
    CHECK(oracle::to_dense(r, mat.ncols) == oracle::rref(oracle::to_dense(mat)));
    CHECK(r.rank == r.pivots.size());
  }
}

TEST_CASE("every elimination route gives the same form") {
  std::mt19937_64 rng(23);
  RrefOptions ff;
  ff.method = RrefMethod::FractionFree;
  for (int trial = 0; trial < 200; ++trial) {
    ExactMatrix mat = oracle::random_matrix(rng, 9);
    const RrefResult r = rref(mat);
    CHECK(rref(mat, ff) == r);
    CHECK(rref_dense(mat) == r);
    std::shuffle(mat.rows.begin(), mat.rows.end(), rng);
    CHECK(rref(mat) == r);
  }
}

TEST_CASE("dense fallback engages on filled matrices") {
  std::mt19937_64 rng(29);
  ExactMatrix mat;
  mat.ncols = 40;
  for (int r = 0; r < 40; ++r) {
    SparseRow row;
    for (Column c = 0; c < 40; ++c) row.push_back(Entry{c, Rational(static_cast<long>(rng() % 7) + 1)});
    mat.rows.push_back(row);
  }
  RrefOptions eager;
  eager.dense_fill = 0.01;
  eager.dense_min_rows = 2;
  CHECK(rref(mat, eager) == rref_dense(mat));
}

TEST_CASE("cell budget raises a budget error") {
  const DiagramSet ds = enumerate_connected(3, 3);
  const ExactMatrix mat = assemble(generate_relations(ds), ds.size());
  RrefOptions tiny;
  tiny.max_cells = 4;
  CHECK_THROWS_AS(rref(mat, tiny), BudgetExceeded);
}

TEST_CASE("pivot expressions reduce every row to zero") {
  const DiagramSet ds = enumerate_connected(2, 3);
  const ExactMatrix mat = assemble(generate_relations(ds), ds.size());
  const RrefResult r = rref(mat);
  const Expressions e = express_pivots(r);
  for (const SparseRow& row : mat.rows) CHECK(substitute(row, e).empty());
}

TEST_CASE("modular rank matches exact rank") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const ExactMatrix mat = oracle::random_matrix(rng, 12);
    const std::uint64_t p = random_prime_62(rng);
    CHECK(is_prime_u64(p));
    CHECK((p >> 61) == 1u);
    CHECK(modular_rank(mat, p) == rref(mat).rank);
  }
}
