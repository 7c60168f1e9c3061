#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include "chordbasis/basis.hpp"
#include "chordbasis/cache.hpp"
#include "chordbasis/render.hpp"
#include "chordbasis/symmetry.hpp"
#include "chordbasis/verify.hpp"

namespace fs = std::filesystem;
using namespace chordbasis;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

struct Global {
  unsigned threads = 0;
  std::uint64_t max_candidates = 1'000'000'000ull;
  std::size_t max_matrix_cells = 200'000'000;
  double time_budget = 3600;
  std::string cache_dir;
  bool no_cache = false;

  BasisOptions basis() const {
    BasisOptions o;
    o.set_threads(threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads);
    o.set_deadline(Deadline::after(time_budget));
    o.enumeration.max_candidates = max_candidates;
    o.rref.max_cells = max_matrix_cells;
    return o;
  }

  Cache cache() const {
    if (no_cache) return Cache();
    return Cache(cache_dir.empty() ? Cache::default_dir() : fs::path(cache_dir));
  }
};

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_file_atomic(out, content);
  }
}

template <class Fn>
std::string capture(Fn&& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

ChordDiagram diagram_arg(const std::string& text) { return parse_diagram(text); }

// --- verbs ----------------------------------------------------------------------

struct EnumerateArgs {
  std::size_t m = 1, n = 0;
  bool connected = false;
  std::string method = "orderly";
  std::string out;
};

int cmd_enumerate(const Global& g, const EnumerateArgs& a) {
  BasisOptions o = g.basis();
  if (a.method == "naive") {
    o.enumeration.method = EnumerationMethod::Naive;
  } else if (a.method != "orderly") {
    throw ParseError("unknown method '" + a.method + "'");
  }
  DiagramSet ds;
  if (a.method == "orderly") {
    Cache cache = g.cache();
    ds = cache.diagrams(a.m, a.n, a.connected, o.enumeration);
  } else {
    ds = a.connected ? enumerate_connected(a.m, a.n, o.enumeration) : enumerate_all(a.m, a.n, o.enumeration);
  }
  emit(a.out, capture([&](std::ostream& os) { write_diagram_set(os, ds); }));
  return kOk;
}

struct BasisArgs {
  std::size_t m = 1, n = 0;
  std::string out;
};

int cmd_basis(const Global& g, const BasisArgs& a) {
  Cache cache = g.cache();
  const BasisResult b = cache.basis(a.m, a.n, g.basis());
  if (!a.out.empty()) write_file_atomic(a.out, capture([&](std::ostream& os) { write_basis(os, b); }));
  std::cout << b.dimension() << "\n";
  return kOk;
}

struct TableArgs {
  std::string family = "C";
  std::size_t n_max = 4;
  std::size_t m_max = 0;
  std::size_t bundled_from = std::numeric_limits<std::size_t>::max();
  bool csv = false;
  bool provenance = false;
};

DimensionTable connected_table(const Global& g, std::size_t n_max, std::size_t m_max, std::size_t bundled_from) {
  Cache cache = g.cache();
  const BasisOptions o = g.basis();
  DimensionTable t;
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = 1; m <= m_max; ++m) {
      if (auto c = conventional_C(m, n)) {
        t.set(m, n, *c, Source::Convention);
      } else if (n >= bundled_from && bundled_C(m, n)) {
        t.set(m, n, *bundled_C(m, n), Source::Bundled);
      } else {
        t.set(m, n, cache.basis(m, n, o).dimension(), Source::Live);
      }
    }
  }
  return t;
}

int cmd_table(const Global& g, const TableArgs& a) {
  const bool connected = a.family == "C";
  if (!connected && a.family != "A") throw ParseError("unknown family '" + a.family + "' (expected C or A)");
  if (a.n_max < 1) throw ParseError("--nmax must be at least 1");
  const std::size_t m_max = a.m_max ? a.m_max : (connected ? a.n_max + 1 : 6);
  const DimensionTable c = connected_table(g, a.n_max, m_max, a.bundled_from);
  const DimensionTable t = connected ? c : dim_table_A(a.n_max, m_max, c);
  std::cout << (a.csv ? dimension_table_csv(t, connected, a.n_max, m_max)
                      : format_dimension_table(t, connected, a.n_max, m_max));
  if (a.provenance) {
    for (const auto& [key, cell] : c.cells) {
      if (key.second >= 1) {
        std::cout << "C m=" << key.first << " n=" << key.second << " value=" << cell.value
                  << " source=" << to_string(cell.source) << "\n";
      }
    }
  }
  return kOk;
}

struct VerifyArgs {
  std::string profile = "fast";
  std::string artifacts;
};

int cmd_verify(const Global& g, const VerifyArgs& a) {
  Cache cache = g.cache();
  VerifyOptions o;
  o.profile = profile_from_string(a.profile);
  o.basis = g.basis();
  o.artifacts = a.artifacts;
  o.cache = &cache;
  const VerifyReport r = run_verify(o);
  std::cout << r.text() << (r.passed() ? "verify " + a.profile + ": passed\n" : "verify " + a.profile + ": FAILED\n");
  return r.passed() ? kOk : kVerifyFailed;
}

struct OrbitArgs {
  std::size_t m = 1, n = 0;
  bool json = false;
  std::string out;
};

int cmd_orbits(const Global& g, const OrbitArgs& a) {
  Cache cache = g.cache();
  const BasisResult b = cache.basis(a.m, a.n, g.basis());
  const OrbitReport r = orbit_report(b);
  emit(a.out, a.json ? orbit_report_json(r, b.diagrams)
                     : capture([&](std::ostream& os) { write_orbit_report(os, r, b.diagrams); }));
  return kOk;
}

struct EquivariantArgs {
  std::size_t m = 1, n = 0;
  std::string out;
};

int cmd_equivariant(const Global& g, const EquivariantArgs& a) {
  Cache cache = g.cache();
  const BasisResult b = cache.basis(a.m, a.n, g.basis());
  std::vector<GeneralizedBasisVector> vectors;
  std::string strategy;
  if (a.m == 1) {
    strategy = "trivial-group";
    vectors = Frame(b).vectors();
  } else if (a.m == 2) {
    strategy = "two-circle-repair";
    const EquivariantResult e = equivariantize_m2(b);
    vectors = e.vectors;
    std::string hist;
    for (std::size_t h : e.incomplete_history) hist += (hist.empty() ? "" : ",") + std::to_string(h);
    std::cerr << "incomplete orbits per round: " << hist << "\n";
  } else if (a.m == a.n + 1) {
    strategy = "tree-normal-form";
    vectors = as_combinations(tree_basis(a.n), b.diagrams);
  } else if (auto v = graph_normal_basis(b)) {
    strategy = "graph-normal-form";
    vectors = std::move(*v);
  } else {
    std::cout << "unresolved m=" << a.m << " n=" << a.n << ": no equivariant basis found by the available constructions\n";
    return kOk;
  }
  std::string why;
  if (!verify_equivariant(vectors, b, &why)) {
    std::cerr << "equivariant basis failed verification: " << why << "\n";
    return kVerifyFailed;
  }
  std::cerr << "strategy=" << strategy << " vectors=" << vectors.size() << " verified\n";
  emit(a.out, capture([&](std::ostream& os) { write_equivariant(os, vectors, b.diagrams); }));
  return kOk;
}

struct TreeArgs {
  std::size_t n = 1;
  std::string out;
};

int cmd_tree_basis(const TreeArgs& a) {
  DiagramSet ds{a.n + 1, a.n, true, tree_basis(a.n)};
  emit(a.out, capture([&](std::ostream& os) { write_diagram_set(os, ds); }));
  return kOk;
}

struct ExpressArgs {
  std::size_t m = 1, n = 0;
  std::string input;
};

int cmd_express(const Global& g, const ExpressArgs& a) {
  Cache cache = g.cache();
  const BasisResult b = cache.basis(a.m, a.n, g.basis());
  Combination v;
  if (a.input.find('*') != std::string::npos || a.input == "0") {
    v = express(parse_combination(a.input, b.diagrams), b);
  } else {
    const ChordDiagram d = diagram_arg(a.input);
    if (d.circles() != a.m || d.chords() != a.n) {
      throw ValidationError("diagram " + format(d) + " does not have m=" + std::to_string(a.m) +
                            " n=" + std::to_string(a.n));
    }
    v = express(d, b);
  }
  std::cout << format_combination(v, b.diagrams) << "\n";
  return kOk;
}

struct RenderArgs {
  std::string input;
  std::string svg_dir;
};

std::vector<ChordDiagram> render_inputs(const std::string& input) {
  if (!fs::is_regular_file(input)) return {diagram_arg(input)};
  const std::string text = read_file(input);
  std::istringstream in(text);
  if (text.find("\npivot-expressions ") != std::string::npos) return read_basis(in).basis_diagrams();
  return read_diagram_set(in).diagrams;
}

int cmd_render(const RenderArgs& a) {
  const auto diagrams = render_inputs(a.input);
  if (a.svg_dir.empty()) {
    for (const ChordDiagram& d : diagrams) std::cout << render_text(d) << "\n";
    return kOk;
  }
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "diagram-%04zu.svg", i);
    const fs::path path = fs::path(a.svg_dir) / name;
    write_file_atomic(path, render_svg(diagrams[i]));
    std::cout << path.string() << " " << render_text(diagrams[i]) << "\n";
  }
  return kOk;
}

void add_mn(CLI::App* sub, std::size_t& m, std::size_t& n) {
  sub->add_option("m", m, "number of circles")->required()->check(CLI::Range(std::size_t{1}, kMaxCircles));
  sub->add_option("n", n, "number of chords")->required()->check(CLI::Range(std::size_t{0}, kMaxChords));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bases of chord diagram spaces on several circles modulo the 4T relations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags take precedence");

  Global g;
  app.add_option("--threads", g.threads, "worker threads (0: all cores)")->capture_default_str();
  app.add_option("--max-candidates", g.max_candidates, "enumeration candidate cap")->capture_default_str();
  app.add_option("--max-matrix-cells", g.max_matrix_cells, "cap on nonzeros held during row reduction")
      ->capture_default_str();
  app.add_option("--time-budget", g.time_budget, "wall-clock seconds per command (<=0: unlimited)")
      ->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir, "cache directory (default: $CHORDBASIS_CACHE, then XDG cache)");
  app.add_flag("--no-cache", g.no_cache, "compute everything, write nothing to the cache");

  EnumerateArgs ea;
  auto* enumerate = app.add_subcommand("enumerate", "write the diagram set for (m, n)");
  add_mn(enumerate, ea.m, ea.n);
  enumerate->add_flag("--connected", ea.connected, "connected diagrams only");
  enumerate->add_option("--method", ea.method, "orderly or naive")->capture_default_str();
  enumerate->add_option("-o,--out", ea.out, "output file (default: stdout)");

  BasisArgs ba;
  auto* basis = app.add_subcommand("basis", "compute the connected basis and print its dimension");
  add_mn(basis, ba.m, ba.n);
  basis->add_option("-o,--out", ba.out, "basis file");

  TableArgs ta;
  auto* table = app.add_subcommand("table", "print a dimension table");
  table->add_option("--family", ta.family, "C (connected) or A (all)")->capture_default_str();
  table->add_option("--nmax", ta.n_max, "largest chord count")->capture_default_str()->check(CLI::Range(1, 5));
  table->add_option("--mmax", ta.m_max, "largest circle count (default: nmax+1 for C, 6 for A)");
  table->add_option("--bundled-from", ta.bundled_from, "take connected values for n >= this from the bundled table");
  table->add_flag("--csv", ta.csv, "comma-separated output");
  table->add_flag("--provenance", ta.provenance, "list the source of each connected value");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a verification profile");
  verify->add_option("--profile", va.profile, "fast or full")->capture_default_str();
  verify->add_option("--artifacts", va.artifacts, "directory receiving every intermediate file");

  OrbitArgs oa;
  auto* orbits = app.add_subcommand("orbits", "orbit report of the connected basis under circle permutations");
  add_mn(orbits, oa.m, oa.n);
  orbits->add_flag("--json", oa.json, "JSON output");
  orbits->add_option("-o,--out", oa.out, "output file (default: stdout)");

  EquivariantArgs qa;
  auto* equivariant = app.add_subcommand("equivariant", "write an equivariant basis when one can be built");
  add_mn(equivariant, qa.m, qa.n);
  equivariant->add_option("-o,--out", qa.out, "output file (default: stdout)");

  TreeArgs tra;
  auto* trees = app.add_subcommand("tree-basis", "one normal-form diagram per labeled tree on n+1 circles");
  trees->add_option("n", tra.n, "number of chords")->required()->check(CLI::Range(std::size_t{0}, std::size_t{8}));
  trees->add_option("-o,--out", tra.out, "output file (default: stdout)");

  ExpressArgs xa;
  auto* expr = app.add_subcommand("express", "express a diagram or combination over the basis");
  add_mn(expr, xa.m, xa.n);
  expr->add_option("input", xa.input, "diagram string or 'coef*diagram + ...'")->required();

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "render a diagram, diagram set file or basis file");
  render->add_option("input", ra.input, "diagram string or file")->required();
  render->add_option("--svg", ra.svg_dir, "directory for SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*enumerate) return cmd_enumerate(g, ea);
    if (*basis) return cmd_basis(g, ba);
    if (*table) return cmd_table(g, ta);
    if (*verify) return cmd_verify(g, va);
    if (*orbits) return cmd_orbits(g, oa);
    if (*equivariant) return cmd_equivariant(g, qa);
    if (*trees) return cmd_tree_basis(tra);
    if (*expr) return cmd_express(g, xa);
    if (*render) return cmd_render(ra);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kUsage;
}
