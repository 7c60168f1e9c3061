#include <doctest.h>

#include <sstream>

#include "chordbasis/enumerate.hpp"
#include "oracle.hpp"

using namespace chordbasis;

TEST_CASE("enumeration matches the brute-force oracle") {
  for (std::size_t n = 0; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      for (bool conn : {false, true}) {
        const DiagramSet ds = conn ? enumerate_connected(m, n) : enumerate_all(m, n);
        const auto want = oracle::all_diagrams(m, n, conn);
        std::set<oracle::Blocks> got;
        for (const ChordDiagram& d : ds.diagrams) got.insert(oracle::to_blocks(d.rep()));
        CHECK(ds.size() == got.size());
        CHECK(got == want);
      }
    }
  }
}

TEST_CASE("orderly and naive methods agree") {
  EnumerationOptions naive;
  naive.method = EnumerationMethod::Naive;
  for (std::size_t n = 0; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      CHECK(enumerate_all(m, n) == enumerate_all(m, n, naive));
      CHECK(enumerate_connected(m, n) == enumerate_connected(m, n, naive));
    }
  }
}

TEST_CASE("thread count does not change the result") {
  EnumerationOptions four;
  four.threads = 4;
  CHECK(enumerate_all(3, 4) == enumerate_all(3, 4, four));
  CHECK(enumerate_connected(4, 4) == enumerate_connected(4, 4, four));
}

TEST_CASE("small counts") {
  CHECK(enumerate_all(1, 0).size() == 1);
  CHECK(enumerate_all(1, 3).size() == 5);
  CHECK(enumerate_connected(2, 1).size() == 1);
  CHECK(enumerate_connected(3, 1).size() == 0);
}

TEST_CASE("candidate cap raises a budget error") {
  EnumerationOptions tiny;
  tiny.max_candidates = 5;
  CHECK_THROWS_AS(enumerate_all(3, 3, tiny), BudgetExceeded);
}

TEST_CASE("diagram set files round-trip and detect tampering") {
  const DiagramSet ds = enumerate_connected(2, 2);
  std::ostringstream out;
  write_diagram_set(out, ds);
  std::istringstream in(out.str());
  CHECK(read_diagram_set(in) == ds);
  std::string text = out.str();
  text.back() = '\n';
  text.insert(text.size() - 1, "0");
  std::istringstream bad(text);
  CHECK_THROWS(read_diagram_set(bad));
}
