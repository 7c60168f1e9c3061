#include <doctest.h>

#include <sstream>

#include "chordbasis/fourt.hpp"

using namespace chordbasis;

TEST_CASE("every relation preserves components") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      const DiagramSet ds = enumerate_all(m, n);
      for (const Relation& r : generate_relations(ds)) CHECK(check_component_preservation(r, ds));
    }
  }
}

TEST_CASE("relation coefficients sum to zero") {
  const DiagramSet ds = enumerate_connected(2, 3);
  for (const Relation& r : generate_relations(ds)) {
    long sum = 0;
    for (const Term& t : r.terms) sum += t.coef;
    CHECK(sum == 0);
  }
}

TEST_CASE("relations are independent of thread count") {
  const DiagramSet ds = enumerate_connected(3, 3);
  RelationOptions four;
  four.threads = 4;
  CHECK(generate_relations(ds) == generate_relations(ds, four));
}

TEST_CASE("relation files round-trip") {
  const DiagramSet ds = enumerate_connected(2, 2);
  const auto rows = generate_relations(ds);
  std::ostringstream out;
  write_relations(out, ds, rows);
  std::istringstream in(out.str());
  CHECK(read_relations(in, ds) == rows);
}
