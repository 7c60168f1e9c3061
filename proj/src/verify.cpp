#include "chordbasis/verify.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "chordbasis/symmetry.hpp"

namespace chordbasis {

namespace fs = std::filesystem;

Profile profile_from_string(const std::string& s) {
  if (s == "fast") return Profile::Fast;
  if (s == "full") return Profile::Full;
  throw ParseError("unknown profile '" + s + "' (expected fast or full)");
}

std::string to_string(Profile p) { return p == Profile::Fast ? "fast" : "full"; }

std::size_t profile_n_max(Profile p) { return p == Profile::Fast ? 3 : 5; }

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string VerifyReport::text() const {
  std::string out;
  for (const Check& c : checks) {
    out += (c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
  }
  return out;
}

std::vector<Combination> as_combinations(const std::vector<ChordDiagram>& diagrams, const DiagramSet& ds) {
  std::vector<Combination> out;
  out.reserve(diagrams.size());
  for (const ChordDiagram& d : diagrams) {
    const auto idx = ds.index_of(d);
    if (!idx) throw ValidationError("diagram " + format(d) + " is not in the enumerated set");
    out.push_back(Combination{Entry{static_cast<Column>(*idx), Rational(1)}});
  }
  return out;
}

namespace {

constexpr std::size_t kMaxCirclesA = 6;

std::string cell(std::size_t m, std::size_t n) {
  return "(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
}

std::string stem(std::size_t m, std::size_t n) { return "m" + std::to_string(m) + "-n" + std::to_string(n); }

class Artifacts {
 public:
  explicit Artifacts(fs::path root) : root_(std::move(root)) {}

  bool enabled() const { return !root_.empty(); }

  void put(const std::string& rel, const std::string& content) const {
    if (enabled()) write_file_atomic(root_ / rel, content);
  }

  template <class Fn>
  void put_with(const std::string& rel, Fn&& writer) const {
    if (!enabled()) return;
    std::ostringstream os;
    writer(os);
    put(rel, os.str());
  }

 private:
  fs::path root_;
};

struct Detail {
  std::vector<std::string> problems;
  std::size_t checked = 0;

  Check finish(std::string name, const std::string& what) const {
    Check c{std::move(name), problems.empty(), {}};
    if (problems.empty()) {
      c.detail = std::to_string(checked) + " " + what;
    } else {
      for (std::size_t i = 0; i < problems.size(); ++i) c.detail += (i ? "; " : "") + problems[i];
    }
    return c;
  }
};

class Runner {
 public:
  explicit Runner(const VerifyOptions& opts)
      : opts_(opts), n_max_(profile_n_max(opts.profile)), out_(opts.artifacts) {}

  VerifyReport run() {
    VerifyReport r;
    r.profile = opts_.profile;
    build_connected(r);
    check_reference_A(r);
    check_polynomials(r);
    check_full_basis(r);
    check_direct_rank(r);
    check_trees(r);
    check_equivariant_m2(r);
    check_orbits(r);
    out_.put("report.txt", r.text());
    return r;
  }

 private:
  bool full() const { return opts_.profile == Profile::Full; }

  BasisResult compute(std::size_t m, std::size_t n, std::vector<Relation>& rows) {
    Cache* cache = opts_.cache != nullptr && opts_.cache->enabled() ? opts_.cache : nullptr;
    DiagramSet ds = cache ? cache->diagrams(m, n, true, opts_.basis.enumeration)
                          : enumerate_connected(m, n, opts_.basis.enumeration);
    opts_.basis.rref.deadline.check("relation generation");
    rows = cache ? cache->relations(ds, opts_.basis.relations) : generate_relations(ds, opts_.basis.relations);
    opts_.basis.rref.deadline.check("row reduction");
    if (cache) return cache->basis(m, n, opts_.basis);
    return basis_from_relations(std::move(ds), rows, opts_.basis);
  }

  void build_connected(VerifyReport& r) {
    Detail dims;
    Detail preserve;
    for (std::size_t n = 0; n <= n_max_; ++n) {
      for (std::size_t m = 1; m <= std::min(n + 1, kMaxCirclesA); ++m) {
        std::vector<Relation> rows;
        BasisResult b = compute(m, n, rows);
        const std::string s = "connected/" + stem(m, n);
        out_.put_with(s + "-diagrams.txt", [&](std::ostream& os) { write_diagram_set(os, b.diagrams); });
        out_.put_with(s + "-relations.txt", [&](std::ostream& os) { write_relations(os, b.diagrams, rows); });
        out_.put_with(s + "-basis.txt", [&](std::ostream& os) { write_basis(os, b); });
        for (const Relation& rel : rows) {
          ++preserve.checked;
          if (!check_component_preservation(rel, b.diagrams) && preserve.problems.size() < 5) {
            preserve.problems.push_back(cell(m, n) + " row from " + format(b.diagrams[rel.provenance.source]) +
                                        " mixes components");
          }
        }
        live_.set(m, n, b.dimension(), Source::Live);
        if (n >= 1) {
          ++dims.checked;
          const auto ref = bundled_C(m, n);
          if (ref && *ref != b.dimension()) {
            dims.problems.push_back(cell(m, n) + " computed=" + std::to_string(b.dimension()) +
                                    " reference=" + std::to_string(*ref));
          }
        }
        bases_.emplace(std::make_pair(m, n), std::move(b));
      }
    }
    for (std::size_t n = 0; n <= n_max_; ++n) {
      for (std::size_t m = n + 2; m <= kMaxCirclesA; ++m) live_.set(m, n, 0, Source::Convention);
    }
    out_.put("tables/C.txt", format_dimension_table(live_, true, n_max_, kMaxCirclesA));
    out_.put("tables/C.csv", dimension_table_csv(live_, true, n_max_, kMaxCirclesA));
    r.checks.push_back(dims.finish("connected-dimensions", "cells equal the reference table for n<=" +
                                                               std::to_string(n_max_)));
    r.checks.push_back(preserve.finish("component-preservation", "relation rows preserve components"));
  }

  void check_reference_A(VerifyReport& r) {
    a_table_ = dim_table_A(n_max_, kMaxCirclesA, live_);
    out_.put("tables/A.txt", format_dimension_table(a_table_, false, n_max_, kMaxCirclesA));
    out_.put("tables/A.csv", dimension_table_csv(a_table_, false, n_max_, kMaxCirclesA));
    Detail d;
    for (std::size_t n = 1; n <= n_max_; ++n) {
      for (std::size_t m = 1; m <= kMaxCirclesA; ++m) {
        ++d.checked;
        const std::uint64_t got = a_table_.find(m, n)->value;
        const auto ref = bundled_A(m, n);
        if (ref && *ref != got) {
          d.problems.push_back(cell(m, n) + " formula=" + std::to_string(got) + " reference=" + std::to_string(*ref));
        }
      }
    }
    r.checks.push_back(d.finish("full-dimensions-vs-reference", "cells equal the reference table"));
  }

  void check_polynomials(VerifyReport& r) {
    Detail d;
    std::string report = "n m polynomial formula status\n";
    for (std::size_t n = 1; n <= n_max_; ++n) {
      for (std::size_t m = 1; m <= kMaxCirclesA; ++m) {
        ++d.checked;
        const Rational poly = eval_A_polynomial(n, m);
        const std::uint64_t formula = a_table_.find(m, n)->value;
        const bool ok = poly == Rational(mpz_class(std::to_string(formula)));
        report += std::to_string(n) + " " + std::to_string(m) + " " + poly.get_str() + " " +
                  std::to_string(formula) + (ok ? " ok" : " mismatch") + "\n";
        if (!ok) {
          d.problems.push_back(cell(m, n) + " polynomial=" + poly.get_str() + " formula=" + std::to_string(formula));
        }
      }
    }
    out_.put("tables/polynomials.txt", report);
    r.checks.push_back(d.finish("closed-form-polynomials", "values equal the counting formula"));
  }

  void check_full_basis(VerifyReport& r) {
    Detail d;
    const std::size_t m_max = full() ? kMaxCirclesA : 4;
    for (std::size_t n = 1; n <= std::min<std::size_t>(n_max_, full() ? 4 : 3); ++n) {
      for (std::size_t m = 1; m <= m_max; ++m) {
        opts_.basis.rref.deadline.check("full basis assembly");
        const auto diagrams = full_basis(m, n, bases_);
        ++d.checked;
        const std::uint64_t want = a_table_.find(m, n)->value;
        if (diagrams.size() != want) {
          d.problems.push_back(cell(m, n) + " assembled=" + std::to_string(diagrams.size()) +
                               " formula=" + std::to_string(want));
        }
        if (m <= 3) {
          DiagramSet ds{m, n, false, diagrams};
          out_.put_with("full/" + stem(m, n) + "-basis.txt", [&](std::ostream& os) { write_diagram_set(os, ds); });
        }
      }
    }
    r.checks.push_back(d.finish("full-basis-count", "assembled bases match the counting formula"));
  }

  void check_direct_rank(VerifyReport& r) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t m = 1; m <= 3; ++m) cells.emplace_back(m, n);
    }
    cells.emplace_back(4, 3);
    if (full()) {
      cells.emplace_back(5, 3);
      cells.emplace_back(4, 4);
    }
    Detail d;
    std::string report = "m n diagrams direct formula\n";
    for (auto [m, n] : cells) {
      DiagramSet ds = enumerate_all(m, n, opts_.basis.enumeration);
      const std::size_t count = ds.size();
      const auto rows = generate_relations(ds, opts_.basis.relations);
      const std::size_t dim = basis_from_relations(std::move(ds), rows, opts_.basis).dimension();
      const std::uint64_t want = a_table_.find(m, n)->value;
      ++d.checked;
      report += std::to_string(m) + " " + std::to_string(n) + " " + std::to_string(count) + " " +
                std::to_string(dim) + " " + std::to_string(want) + "\n";
      if (dim != want) {
        d.problems.push_back(cell(m, n) + " direct=" + std::to_string(dim) + " formula=" + std::to_string(want));
      }
    }
    out_.put("tables/direct-rank.txt", report);
    r.checks.push_back(d.finish("full-dimensions-direct-rank", "direct ranks equal the counting formula"));
  }

  void check_trees(VerifyReport& r) {
    Detail d;
    for (std::size_t n = 1; n <= n_max_; ++n) {
      const auto trees = tree_basis(n);
      std::uint64_t cayley = 1;
      for (std::size_t i = 0; i + 1 < n; ++i) cayley *= n + 1;
      ++d.checked;
      if (trees.size() != cayley) {
        d.problems.push_back("n=" + std::to_string(n) + " trees=" + std::to_string(trees.size()) +
                             " expected=" + std::to_string(cayley));
      }
      DiagramSet ds{n + 1, n, true, trees};
      out_.put_with("trees/tree-basis-n" + std::to_string(n) + ".txt",
                    [&](std::ostream& os) { write_diagram_set(os, ds); });
      if (n <= 4) {
        const BasisResult& b = bases_.at({n + 1, n});
        std::string why;
        if (!verify_equivariant(as_combinations(trees, b.diagrams), b, &why)) {
          d.problems.push_back("n=" + std::to_string(n) + " not equivariant: " + why);
        }
      }
    }
    r.checks.push_back(d.finish("tree-basis", "tree bases have Cayley size and are equivariant"));
  }

  void check_equivariant_m2(VerifyReport& r) {
    Detail d;
    for (std::size_t n = 1; n <= std::min<std::size_t>(n_max_, 4); ++n) {
      const BasisResult& b = bases_.at({2, n});
      const OrbitReport raw = orbit_report(b);
      out_.put_with("orbits/" + stem(2, n) + ".txt", [&](std::ostream& os) { write_orbit_report(os, raw, b.diagrams); });
      out_.put("orbits/" + stem(2, n) + ".json", orbit_report_json(raw, b.diagrams));
      ++d.checked;
      if (!raw.dichotomy_holds()) d.problems.push_back(cell(2, n) + " incomplete orbit of neither type");
      const EquivariantResult e = equivariantize_m2(b);
      out_.put_with("equivariant/" + stem(2, n) + ".txt",
                    [&](std::ostream& os) { write_equivariant(os, e.vectors, b.diagrams); });
      std::string why;
      if (e.vectors.size() != b.dimension()) {
        d.problems.push_back(cell(2, n) + " size " + std::to_string(e.vectors.size()));
      } else if (!verify_equivariant(e.vectors, b, &why)) {
        d.problems.push_back(cell(2, n) + " " + why);
      }
      for (std::size_t i = 1; i < e.incomplete_history.size(); ++i) {
        if (e.incomplete_history[i] >= e.incomplete_history[i - 1]) {
          d.problems.push_back(cell(2, n) + " incomplete orbit count did not decrease");
          break;
        }
      }
      if (e.incomplete_history.empty() || e.incomplete_history.back() != 0) {
        d.problems.push_back(cell(2, n) + " incomplete orbits remain");
      }
    }
    r.checks.push_back(d.finish("equivariant-two-circles", "two-circle bases equivariantized and verified"));
  }

  void check_orbits(VerifyReport& r) {
    Detail d;
    const BasisResult& b = bases_.at({3, 3});
    const auto vectors = graph_normal_basis(b);
    ++d.checked;
    if (!vectors) {
      d.problems.push_back(cell(3, 3) + " no graph normal form basis");
    } else {
      out_.put_with("equivariant/" + stem(3, 3) + ".txt",
                    [&](std::ostream& os) { write_equivariant(os, *vectors, b.diagrams); });
      const OrbitReport rep = orbit_report(Frame(b, *vectors));
      out_.put_with("orbits/" + stem(3, 3) + "-normal.txt",
                    [&](std::ostream& os) { write_orbit_report(os, rep, b.diagrams); });
      auto sizes = rep.sizes();
      std::sort(sizes.begin(), sizes.end());
      if (sizes != std::vector<std::size_t>{1, 3, 6, 6}) {
        std::string s;
        for (std::size_t v : sizes) s += (s.empty() ? "" : ",") + std::to_string(v);
        d.problems.push_back(cell(3, 3) + " orbit sizes {" + s + "}");
      }
    }
    for (const auto& [key, basis] : bases_) {
      if (key.first < 3 || key.first > 4) continue;
      ++d.checked;
      if (!orbit_report(basis).dichotomy_holds()) d.problems.push_back(cell(key.first, key.second) + " dichotomy fails");
    }
    r.checks.push_back(d.finish("orbit-structure", "orbit reports consistent"));
  }

  const VerifyOptions& opts_;
  std::size_t n_max_;
  Artifacts out_;
  ConnectedBases bases_;
  DimensionTable live_;
  DimensionTable a_table_;
};

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) { return Runner(opts).run(); }

}  // namespace chordbasis
