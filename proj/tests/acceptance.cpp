// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance --only N   run criterion N

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chordbasis/basis.hpp"
#include "chordbasis/cache.hpp"
#include "chordbasis/symmetry.hpp"
#include "chordbasis/verify.hpp"
#include "oracle.hpp"

using namespace chordbasis;
namespace fs = std::filesystem;

namespace {

// Connected dimensions, rows n = 1..5, columns m = 1..n+1.
const std::vector<std::vector<std::uint64_t>> kConnected = {
    {1, 1},
    {2, 3, 3},
    {3, 9, 16, 16},
    {6, 22, 67, 127, 125},
    {10, 55, 229, 699, 1347, 1296},
};

// Full dimensions, rows n = 1..5, columns m = 1..6.
const std::vector<std::vector<std::uint64_t>> kFull = {
    {1, 3, 6, 10, 15, 21},
    {2, 8, 24, 59, 125, 237},
    {3, 19, 80, 276, 815, 2088},
    {6, 44, 241, 1105, 4340, 14486},
    {10, 99, 682, 3921, 19468, 81149},
};

constexpr double kRowFiveBudgetSeconds = 3600;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cell(std::size_t m, std::size_t n) {
  return "(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out;
}

Outcome verdict(const std::vector<std::string>& problems, const std::string& ok) {
  return problems.empty() ? Outcome{true, ok} : Outcome{false, join(problems)};
}

// Live connected dimensions shared by the table criteria.
class Connected {
 public:
  std::uint64_t get(std::size_t m, std::size_t n) {
    if (auto c = conventional_C(m, n)) return *c;
    auto it = dims_.find({m, n});
    if (it != dims_.end()) return it->second;
    BasisOptions o;
    o.set_deadline(Deadline::after(kRowFiveBudgetSeconds));
    const std::uint64_t d = connected_basis(m, n, o).dimension();
    dims_[{m, n}] = d;
    return d;
  }

  DimensionTable table(std::size_t n_max) {
    DimensionTable t;
    for (std::size_t n = 0; n <= n_max; ++n) {
      for (std::size_t m = 1; m <= 6; ++m) t.set(m, n, get(m, n), Source::Live);
    }
    return t;
  }

 private:
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> dims_;
};

Connected& connected() {
  static Connected c;
  return c;
}

Outcome table_one_live() {
  std::vector<std::string> problems;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 1; m <= n + 1; ++m) {
      const std::uint64_t got = connected().get(m, n);
      const std::uint64_t want = kConnected[n - 1][m - 1];
      if (got != want) {
        problems.push_back(cell(m, n) + " computed=" + std::to_string(got) + " expected=" + std::to_string(want));
      }
    }
  }
  return verdict(problems, "14 connected dimensions for n<=4 match");
}

Outcome table_one_row_five() {
  std::vector<std::string> problems;
  try {
    for (std::size_t m = 1; m <= 6; ++m) {
      const std::uint64_t got = connected().get(m, 5);
      if (got != kConnected[4][m - 1]) {
        problems.push_back(cell(m, 5) + " computed=" + std::to_string(got) +
                           " expected=" + std::to_string(kConnected[4][m - 1]));
      }
    }
  } catch (const BudgetExceeded& e) {
    return {false, std::string("resource budget exceeded: ") + e.what()};
  }
  const std::size_t trees = tree_basis(5).size();
  if (trees != 1296 || connected().get(6, 5) != trees) {
    problems.push_back("tree count " + std::to_string(trees) + " disagrees with the m=6 dimension");
  }
  return verdict(problems, "row n=5 matches, m=6 cross-checked by 1296 trees");
}

Outcome table_two() {
  const DimensionTable c = connected().table(5);
  std::vector<std::string> problems;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t m = 1; m <= 6; ++m) {
      const std::uint64_t got = dim_A(m, n, c);
      const auto conn = [&](std::size_t r, std::size_t s) { return oracle::BigInt(connected().get(r, s)); };
      if (oracle::full_dimension(m, n, conn) != got) {
        problems.push_back(cell(m, n) + " formula and exponential oracle disagree");
      }
      const std::uint64_t want = kFull[n - 1][m - 1];
      if (got != want) {
        problems.push_back(cell(m, n) + " formula=" + std::to_string(got) + " expected=" + std::to_string(want));
      }
    }
  }
  return verdict(problems, "30 full dimensions match");
}

Outcome polynomials() {
  const DimensionTable c = connected().table(5);
  std::vector<std::string> problems;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t m = 1; m <= 6; ++m) {
      const Rational poly = eval_A_polynomial(n, m);
      const std::uint64_t formula = dim_A(m, n, c);
      if (poly != Rational(mpz_class(std::to_string(formula)))) {
        problems.push_back("discrepancy " + cell(m, n) + " polynomial=" + poly.get_str() +
                           " formula=" + std::to_string(formula));
      }
    }
  }
  return verdict(problems, "30 polynomial values equal the counting formula");
}

Outcome cayley() {
  std::vector<std::string> problems;
  for (std::size_t n = 1; n <= 5; ++n) {
    std::uint64_t want = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) want *= n + 1;
    const auto trees = tree_basis(n);
    if (trees.size() != want) {
      problems.push_back("n=" + std::to_string(n) + " trees=" + std::to_string(trees.size()) +
                         " expected=" + std::to_string(want));
    }
    if (n <= 4) {
      const BasisResult b = connected_basis(n + 1, n);
      std::string why;
      if (!verify_equivariant(as_combinations(trees, b.diagrams), b, &why)) {
        problems.push_back("n=" + std::to_string(n) + " not equivariant: " + why);
      }
    }
  }
  return verdict(problems, "sizes 1,3,16,125,1296; equivariant for n<=4");
}

Outcome canonical_form() {
  std::vector<std::string> problems;
  for (const char* s : {"0121|20", "1020|21", "1012|20", "0102|12"}) {
    if (format(parse_diagram(s)) != "0102|12") problems.push_back(std::string(s) + " -> " + format(parse_diagram(s)));
  }
  std::mt19937_64 rng(20240611);
  std::size_t failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::size_t n = rng() % 7;
    std::vector<int> word;
    for (std::size_t x = 0; x < n; ++x) word.insert(word.end(), 2, static_cast<int>(x));
    std::shuffle(word.begin(), word.end(), rng);
    std::vector<std::size_t> cuts{0, word.size()};
    for (std::size_t i = 1; i < m; ++i) cuts.push_back(rng() % (word.size() + 1));
    std::sort(cuts.begin(), cuts.end());
    oracle::Blocks blocks(m);
    for (std::size_t i = 0; i < m; ++i) blocks[i].assign(word.begin() + cuts[i], word.begin() + cuts[i + 1]);

    oracle::Blocks moved = blocks;
    std::vector<int> names(n);
    std::iota(names.begin(), names.end(), 0);
    std::shuffle(names.begin(), names.end(), rng);
    for (auto& b : moved) {
      if (!b.empty()) std::rotate(b.begin(), b.begin() + rng() % b.size(), b.end());
      for (int& x : b) x = names[x];
    }
    const ChordDiagram a = canonicalize(oracle::to_rep(blocks));
    const ChordDiagram b = canonicalize(oracle::to_rep(moved));
    const bool ok = a == b && canonicalize(a.rep()) == a && parse_diagram(format(a)) == a &&
                    (trial % 10 != 0 || oracle::to_blocks(a.rep()) == oracle::canonical(blocks));
    if (!ok && failures++ < 3) problems.push_back("mismatch for " + format(oracle::to_rep(blocks)));
  }
  if (failures) problems.push_back(std::to_string(failures) + " of 10000 trials failed");
  return verdict(problems, "10000 round trips invariant and idempotent; four strings agree");
}

Outcome component_preservation() {
  std::vector<std::string> problems;
  std::size_t rows = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 1; m <= 5; ++m) {
      const DiagramSet ds = enumerate_all(m, n);
      for (const Relation& r : generate_relations(ds)) {
        ++rows;
        if (!check_component_preservation(r, ds) && problems.size() < 5) {
          problems.push_back(cell(m, n) + " row from " + format(ds[r.provenance.source]));
        }
      }
    }
  }
  return verdict(problems, std::to_string(rows) + " rows for n<=4, m<=5 preserve components");
}

Outcome rref_oracle() {
  std::mt19937_64 rng(8128);
  std::vector<std::string> problems;
  for (int trial = 0; trial < 500; ++trial) {
    const ExactMatrix mat = oracle::random_matrix(rng, 12);
    const RrefResult r = rref(mat);
    if (oracle::to_dense(r, mat.ncols) != oracle::rref(oracle::to_dense(mat))) {
      problems.push_back("matrix " + std::to_string(trial) + " differs from the dense oracle");
    }
    const std::uint64_t p = random_prime_62(rng);
    if (modular_rank(mat, p) != r.rank) {
      problems.push_back("matrix " + std::to_string(trial) + " modular rank differs at p=" + std::to_string(p));
    }
  }
  return verdict(problems, "500 matrices equal the dense oracle; modular ranks agree");
}

Outcome two_circles() {
  const std::size_t want[] = {0, 1, 3, 9, 22};
  std::vector<std::string> problems;
  for (std::size_t n = 1; n <= 4; ++n) {
    const BasisResult b = connected_basis(2, n);
    const EquivariantResult e = equivariantize_m2(b);
    std::string why;
    if (e.vectors.size() != want[n]) problems.push_back("n=" + std::to_string(n) + " size " + std::to_string(e.vectors.size()));
    if (!verify_equivariant(e.vectors, b, &why)) problems.push_back("n=" + std::to_string(n) + " " + why);
    if (e.incomplete_history.empty() || e.incomplete_history.back() != 0) {
      problems.push_back("n=" + std::to_string(n) + " incomplete orbits remain");
    }
    for (std::size_t i = 1; i < e.incomplete_history.size(); ++i) {
      if (e.incomplete_history[i] >= e.incomplete_history[i - 1]) {
        problems.push_back("n=" + std::to_string(n) + " count not strictly decreasing");
      }
    }
  }
  return verdict(problems, "sizes 1,3,9,22 verified, incomplete orbits strictly decreasing");
}

Outcome three_circles() {
  const BasisResult b = connected_basis(3, 3);
  const auto v = graph_normal_basis(b);
  if (!v) return {false, "no normal-form basis"};
  auto sizes = orbit_report(Frame(b, *v)).sizes();
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::string s;
  std::size_t total = 0;
  for (std::size_t x : sizes) {
    s += (s.empty() ? "" : ",") + std::to_string(x);
    total += x;
  }
  const bool ok = sizes == std::vector<std::size_t>{6, 6, 3, 1} && total == 16;
  return {ok, "orbit sizes {" + s + "} total " + std::to_string(total)};
}

std::map<std::string, std::string> files_under(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / ("chordbasis-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::map<std::string, std::string> runs[2];
  const unsigned threads[2] = {1, 4};
  for (int i = 0; i < 2; ++i) {
    VerifyOptions o;
    o.profile = Profile::Fast;
    o.basis.set_threads(threads[i]);
    o.artifacts = base / ("threads" + std::to_string(threads[i]));
    run_verify(o);
    runs[i] = files_under(o.artifacts);
  }
  fs::remove_all(base);
  if (runs[0].empty()) return {false, "no artifacts written"};
  std::vector<std::string> problems;
  for (const auto& [name, text] : runs[0]) {
    auto it = runs[1].find(name);
    if (it == runs[1].end()) {
      problems.push_back(name + " missing with 4 threads");
    } else if (it->second != text) {
      problems.push_back(name + " differs");
    }
  }
  if (runs[1].size() != runs[0].size()) problems.push_back("file sets differ");
  return verdict(problems, std::to_string(runs[0].size()) + " artifact files byte-identical for 1 and 4 threads");
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "connected dimensions n<=4 (live)", table_one_live},
      {2, "connected dimensions n=5 (budgeted)", table_one_row_five},
      {3, "full dimensions m<=6, n<=5", table_two},
      {4, "closed-form polynomials", polynomials},
      {5, "labeled tree bases", cayley},
      {6, "canonical form properties", canonical_form},
      {7, "relations preserve components", component_preservation},
      {8, "exact elimination against dense oracle", rref_oracle},
      {9, "two-circle equivariant bases", two_circles},
      {10, "three-circle orbit structure", three_circles},
      {11, "determinism across thread counts", determinism},
  };

  int failed = 0;
  bool ran = false;
  for (const Criterion& c : criteria) {
    if (only && *only != c.id) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s [%.2fs] %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only.value_or(0));
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
