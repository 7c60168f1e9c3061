#include <doctest.h>

#include <sstream>

#include "chordbasis/basis.hpp"
#include "oracle.hpp"

using namespace chordbasis;

TEST_CASE("connected dimensions for small cases") {
  CHECK(connected_basis(1, 1).dimension() == 1);
  CHECK(connected_basis(2, 1).dimension() == 1);
  CHECK(connected_basis(3, 3).dimension() == 16);
  CHECK(connected_basis(1, 5).dimension() == 10);
  CHECK(dim_C(1, 0) == 1);
  CHECK(dim_C(4, 2) == 0);
}

TEST_CASE("counting formula equals the direct rank of all diagrams") {
  DimensionTable c;
  for (std::size_t n = 0; n <= 3; ++n) {
    for (std::size_t m = 1; m <= n + 1; ++m) c.set(m, n, dim_C(m, n), Source::Live);
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      DiagramSet ds = enumerate_all(m, n);
      const auto rows = generate_relations(ds);
      const std::size_t direct = basis_from_relations(std::move(ds), rows).dimension();
      CHECK(dim_A(m, n, c) == direct);
      const auto conn = [&](std::size_t r, std::size_t s) -> oracle::BigInt {
        if (s + 1 < r) return 0;
        return oracle::BigInt(c.find(r, s)->value);
      };
      CHECK(oracle::full_dimension(m, n, conn) == direct);
    }
  }
}

TEST_CASE("assembled full bases have the formula size and are independent") {
  const ConnectedBases conn = connected_bases_for(4, 3);
  DimensionTable c;
  for (const auto& [key, b] : conn) c.set(key.first, key.second, b.dimension(), Source::Live);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      const auto diagrams = full_basis(m, n, conn);
      CHECK(diagrams.size() == dim_A(m, n, c));
    }
  }
  DiagramSet all = enumerate_all(3, 2);
  const auto rows = generate_relations(all);
  const BasisResult b = basis_from_relations(all, rows);
  ExactMatrix m;
  m.ncols = all.size();
  for (const ChordDiagram& d : full_basis(3, 2, conn)) m.rows.push_back(express(d, b));
  CHECK(rref(m).rank == b.dimension());
}

TEST_CASE("express is linear") {
  const BasisResult b = connected_basis(2, 3);
  const Combination x = express(b.diagrams[0], b);
  const Combination y = express(b.diagrams[5], b);
  const Combination v{Entry{0, Rational(3)}, Entry{5, Rational(-2)}};
  std::map<Column, Rational> want;
  for (const Entry& e : x) want[e.col] += 3 * e.value;
  for (const Entry& e : y) want[e.col] -= 2 * e.value;
  Combination w;
  for (auto& [c, q] : want) {
    if (q != 0) w.push_back(Entry{c, q});
  }
  CHECK(express(v, b) == w);
  CHECK_THROWS_AS(express(parse_diagram("0|0"), b), ValidationError);
}

TEST_CASE("one-circle three-chord expressions") {
  const BasisResult b = connected_basis(1, 3);
  const DiagramSet& ds = b.diagrams;
  CHECK(format_combination(express(parse_diagram("001122"), b), ds) == "1*001221");
  CHECK(format_combination(express(parse_diagram("001212"), b), ds) == "2*010212 + -1*012012");
}

TEST_CASE("basis files round-trip") {
  const BasisResult b = connected_basis(2, 3);
  std::ostringstream out;
  write_basis(out, b);
  std::istringstream in(out.str());
  CHECK(read_basis(in) == b);
  std::istringstream in2(out.str());
  std::ostringstream again;
  write_basis(again, read_basis(in2));
  CHECK(again.str() == out.str());
}

TEST_CASE("polynomials of one and two chords agree with the formula") {
  DimensionTable c;
  for (std::size_t n = 0; n <= 2; ++n) {
    for (std::size_t m = 1; m <= n + 1; ++m) c.set(m, n, dim_C(m, n), Source::Live);
  }
  for (std::size_t m = 1; m <= 6; ++m) {
    CHECK(eval_A_polynomial(1, m) == Rational(static_cast<long>(dim_A(m, 1, c))));
    CHECK(eval_A_polynomial(2, m) == Rational(static_cast<long>(dim_A(m, 2, c))));
  }
  CHECK(eval_A_polynomial(1, 6) == 21);
  CHECK(eval_A_polynomial(2, 4) == 59);
  CHECK(eval_A_polynomial(3, 1) == 3);
  CHECK_THROWS(eval_A_polynomial(6, 1));
}

TEST_CASE("table formatting") {
  DimensionTable t;
  t.set(1, 1, 1, Source::Live);
  t.set(2, 1, 1, Source::Live);
  t.set(1, 2, 2, Source::Live);
  t.set(2, 2, 3, Source::Live);
  t.set(3, 1, 0, Source::Convention);
  t.set(3, 2, 3, Source::Live);
  CHECK(dimension_table_csv(t, true, 2, 3) == "n,1,2,3,Total\n1,1,1,,2\n2,2,3,3,8\n");
  CHECK(format_dimension_table(t, true, 2, 3) == "n\\m  1  2  3  Total\n  1  1  1         2\n  2  2  3  3      8\n");
}
