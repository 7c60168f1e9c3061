#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "chordbasis/symmetry.hpp"
#include "chordbasis/verify.hpp"

using namespace chordbasis;

namespace {

std::size_t factorial(std::size_t m) { return m <= 1 ? 1 : m * factorial(m - 1); }

std::vector<std::size_t> sorted_sizes(const OrbitReport& r) {
  auto s = r.sizes();
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("labeled trees") {
  CHECK(all_labeled_trees(2).size() == 1);
  CHECK(all_labeled_trees(4).size() == 16);
  CHECK(all_labeled_trees(5).size() == 125);
  for (std::size_t v = 2; v <= 6; ++v) {
    for (const LabeledTree& t : all_labeled_trees(v)) {
      CHECK(tree_from_prufer(prufer_of(t), v) == t);
      CHECK(tree_reduce(tree_diagram(t)) == t);
    }
  }
}

TEST_CASE("tree reduction of small diagrams") {
  CHECK(tree_reduce(parse_diagram("0|0")).edges == Multigraph{{0, 1}});
  CHECK(tree_reduce(parse_diagram("01|0|1")).edges == Multigraph{{0, 1}, {0, 2}});
  CHECK_THROWS_AS(tree_reduce(parse_diagram("01|01")), ValidationError);
}

TEST_CASE("tree bases have Cayley size") {
  CHECK(tree_basis(1).size() == 1);
  CHECK(tree_basis(2).size() == 3);
  CHECK(tree_basis(3).size() == 16);
  CHECK(tree_basis(4).size() == 125);
}

TEST_CASE("permuting feet on a circle does not change the class") {
  std::mt19937_64 rng(41);
  for (std::size_t n = 2; n <= 4; ++n) {
    const BasisResult b = connected_basis(n + 1, n);
    const auto trees = tree_basis(n);
    for (int trial = 0; trial < 40; ++trial) {
      const ChordDiagram& d = trees[rng() % trees.size()];
      auto blocks = d.rep().blocks();
      auto& blk = blocks[rng() % blocks.size()];
      std::shuffle(blk.begin(), blk.end(), rng);
      const ChordDiagram e = canonicalize(StringRep::from_blocks(blocks));
      CHECK(tree_reduce(e) == tree_reduce(d));
      CHECK(express(e, b) == express(d, b));
    }
  }
}

TEST_CASE("tree bases are equivariant") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const BasisResult b = connected_basis(n + 1, n);
    CHECK(verify_equivariant(as_combinations(tree_basis(n), b.diagrams), b));
  }
}

TEST_CASE("one circle: every orbit is complete") {
  const OrbitReport r = orbit_report(connected_basis(1, 4));
  CHECK(r.incomplete() == 0);
  CHECK(r.orbits.size() == 6);
}

TEST_CASE("orbit sizes divide the group order and the dichotomy holds") {
  for (auto [m, n] : {std::pair{2, 3}, {2, 4}, {3, 3}, {3, 4}, {4, 4}}) {
    const OrbitReport r = orbit_report(connected_basis(m, n));
    for (std::size_t s : r.sizes()) CHECK(factorial(m) % s == 0);
    CHECK(r.dichotomy_holds());
  }
}

TEST_CASE("raw two-circle basis has an incomplete orbit") {
  const BasisResult b = connected_basis(2, 3);
  const Frame f(b);
  CHECK(orbit_report(f).incomplete() >= 1);
  CHECK_FALSE(verify_equivariant(f.vectors(), b));
}

TEST_CASE("two-circle equivariantization") {
  const std::size_t want[] = {0, 1, 3, 9, 22};
  for (std::size_t n = 1; n <= 4; ++n) {
    const BasisResult b = connected_basis(2, n);
    const EquivariantResult e = equivariantize_m2(b);
    CHECK(e.vectors.size() == want[n]);
    CHECK(verify_equivariant(e.vectors, b));
    REQUIRE_FALSE(e.incomplete_history.empty());
    CHECK(e.incomplete_history.back() == 0);
    for (std::size_t i = 1; i < e.incomplete_history.size(); ++i) {
      CHECK(e.incomplete_history[i] < e.incomplete_history[i - 1]);
    }
  }
  const BasisResult b1 = connected_basis(2, 1);
  CHECK(equivariantize_m2(b1).vectors == Frame(b1).vectors());
  CHECK_THROWS(equivariantize_m2(connected_basis(3, 2)));
}

TEST_CASE("three circles, three chords: graph normal form") {
  const BasisResult b = connected_basis(3, 3);
  const auto v = graph_normal_basis(b);
  REQUIRE(v.has_value());
  CHECK(verify_equivariant(*v, b));
  CHECK(sorted_sizes(orbit_report(Frame(b, *v))) == std::vector<std::size_t>{1, 3, 6, 6});
}

TEST_CASE("connected sets are closed under circle permutations") {
  const DiagramSet ds = enumerate_connected(3, 3);
  for (const Permutation& s : all_permutations(3)) {
    for (const ChordDiagram& d : ds.diagrams) CHECK(ds.index_of(permute_circles(d, s)).has_value());
  }
}

TEST_CASE("equivariant files round-trip") {
  const BasisResult b = connected_basis(2, 3);
  const auto v = equivariantize_m2(b).vectors;
  std::ostringstream out;
  write_equivariant(out, v, b.diagrams);
  std::istringstream in(out.str());
  CHECK(read_equivariant(in, b.diagrams) == v);
}
