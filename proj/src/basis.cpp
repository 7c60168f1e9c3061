#include "chordbasis/basis.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "chordbasis/digest.hpp"

namespace chordbasis {

// --- BasisResult ------------------------------------------------------------------

std::vector<ChordDiagram> BasisResult::basis_diagrams() const {
  std::vector<ChordDiagram> out;
  out.reserve(basis.size());
  for (Column c : basis) out.push_back(diagrams[c]);
  return out;
}

bool BasisResult::is_basis_column(Column c) const { return std::binary_search(basis.begin(), basis.end(), c); }

void BasisResult::validate() const {
  const std::size_t n = diagrams.size();
  if (pivots.size() + basis.size() != n) throw ValidationError("pivots and basis do not cover the diagram set");
  std::vector<char> seen(n, 0);
  for (const auto* list : {&pivots, &basis}) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      const Column c = (*list)[i];
      if (c >= n || seen[c]) throw ValidationError("pivot/basis column repeated or out of range");
      if (i > 0 && (*list)[i - 1] >= c) throw ValidationError("pivot/basis columns not ascending");
      seen[c] = 1;
    }
  }
  if (expressions.size() != pivots.size()) throw ValidationError("one expression per pivot is required");
  for (Column p : pivots) {
    auto it = expressions.find(p);
    if (it == expressions.end()) throw ValidationError("pivot without expression");
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const Entry& e = it->second[i];
      if (!is_basis_column(e.col) || e.value == 0) throw ValidationError("expression uses a non-basis column");
      if (i > 0 && it->second[i - 1].col >= e.col) throw ValidationError("expression columns not ascending");
    }
  }
}

BasisResult basis_from_relations(DiagramSet ds, const std::vector<Relation>& rows, const BasisOptions& opts) {
  const ExactMatrix mat = assemble(rows, ds.size());
  RrefResult r = rref(mat, opts.rref);
  if (opts.modular_check) {
    std::mt19937_64 rng(opts.seed ^ (ds.m * 1000003u + ds.n));
    const std::uint64_t p = random_prime_62(rng);
    const std::size_t mr = modular_rank(mat, p);
    if (mr != r.rank) {
      throw ChordError("rank mod " + std::to_string(p) + " is " + std::to_string(mr) + " but exact rank is " +
                       std::to_string(r.rank));
    }
  }
  BasisResult out;
  out.expressions = express_pivots(r);
  out.pivots = r.pivots;
  std::size_t k = 0;
  for (Column c = 0; c < ds.size(); ++c) {
    if (k < out.pivots.size() && out.pivots[k] == c) {
      ++k;
    } else {
      out.basis.push_back(c);
    }
  }
  out.diagrams = std::move(ds);
  return out;
}

BasisResult connected_basis(std::size_t m, std::size_t n, const BasisOptions& opts) {
  DiagramSet ds = enumerate_connected(m, n, opts.enumeration);
  opts.rref.deadline.check("relation generation");
  const auto rows = generate_relations(ds, opts.relations);
  opts.rref.deadline.check("row reduction");
  return basis_from_relations(std::move(ds), rows, opts);
}

Combination express(const ChordDiagram& d, const BasisResult& b) {
  const auto idx = b.diagrams.index_of(d);
  if (!idx) throw ValidationError("diagram " + format(d) + " is not in the enumerated set");
  const Column c = static_cast<Column>(*idx);
  if (b.is_basis_column(c)) return Combination{Entry{c, Rational(1)}};
  return b.expressions.at(c);
}

Combination express(const Combination& v, const BasisResult& b) {
  for (const Entry& e : v) {
    if (e.col >= b.diagrams.size()) throw ValidationError("combination column out of range");
  }
  return substitute(v, b.expressions);
}

// --- dimensions ------------------------------------------------------------------

std::string to_string(Source s) {
  switch (s) {
    case Source::Live:
      return "live";
    case Source::Bundled:
      return "bundled";
    case Source::Convention:
      return "convention";
    case Source::Formula:
      return "formula";
  }
  return "?";
}

std::optional<DimensionTable::Cell> DimensionTable::find(std::size_t m, std::size_t n) const {
  auto it = cells.find({m, n});
  if (it == cells.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint64_t> conventional_C(std::size_t m, std::size_t n) {
  if (m == 0) return std::nullopt;
  if (n + 1 < m) return 0;
  if (m == 1 && n == 0) return 1;
  return std::nullopt;
}

namespace {

// rows n = 1..5, columns m = 1..6
constexpr std::uint64_t kTableC[5][6] = {
    {1, 1, 0, 0, 0, 0},
    {2, 3, 3, 0, 0, 0},
    {3, 9, 16, 16, 0, 0},
    {6, 22, 67, 127, 125, 0},
    {10, 55, 229, 699, 1347, 1296},
};

constexpr std::uint64_t kTableA[5][6] = {
    {1, 3, 6, 10, 15, 21},
    {2, 8, 24, 59, 125, 237},
    {3, 19, 80, 276, 815, 2088},
    {6, 44, 241, 1105, 4340, 14486},
    {10, 99, 682, 3921, 19468, 81149},
};

}  // namespace

std::optional<std::uint64_t> bundled_C(std::size_t m, std::size_t n) {
  if (auto c = conventional_C(m, n)) return c;
  if (n < 1 || n > 5 || m < 1 || m > 6) return std::nullopt;
  return kTableC[n - 1][m - 1];
}

std::optional<std::uint64_t> bundled_A(std::size_t m, std::size_t n) {
  if (n < 1 || n > 5 || m < 1 || m > 6) return std::nullopt;
  return kTableA[n - 1][m - 1];
}

std::uint64_t dim_C(std::size_t m, std::size_t n, const BasisOptions& opts) {
  if (auto c = conventional_C(m, n)) return *c;
  return connected_basis(m, n, opts).dimension();
}

DimensionTable dim_table_C(std::size_t n_max, std::size_t m_max, const TableOptions& opts) {
  DimensionTable t;
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = 1; m <= m_max; ++m) {
      if (auto c = conventional_C(m, n)) {
        t.set(m, n, *c, Source::Convention);
      } else if (n >= opts.bundled_from_n && bundled_C(m, n)) {
        t.set(m, n, *bundled_C(m, n), Source::Bundled);
      } else {
        t.set(m, n, connected_basis(m, n, opts.basis).dimension(), Source::Live);
      }
    }
  }
  return t;
}

namespace {

mpz_class factorial(std::size_t k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

// Calls emit(parts) for every sequence of `count` integers >= lo summing
// to `total`.
template <class Fn>
void for_each_composition(std::size_t total, std::size_t count, std::size_t lo, Fn&& emit) {
  std::vector<std::size_t> parts(count);
  auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i + 1 == count) {
      if (left >= lo) {
        parts[i] = left;
        emit(parts);
      }
      return;
    }
    for (std::size_t v = lo; v + lo * (count - i - 1) <= left; ++v) {
      parts[i] = v;
      self(self, i + 1, left - v);
    }
  };
  if (count == 0) {
    if (total == 0) emit(parts);
    return;
  }
  rec(rec, 0, total);
}

std::uint64_t lookup_C(const DimensionTable& t, std::size_t r, std::size_t s) {
  if (auto c = t.find(r, s)) return c->value;
  if (auto c = conventional_C(r, s)) return *c;
  throw ValidationError("connected dimension C(" + std::to_string(r) + ", " + std::to_string(s) +
                        ") is not in the table");
}

std::uint64_t to_u64(const mpz_class& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) throw ValidationError("dimension does not fit in 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

}  // namespace

std::uint64_t dim_A(std::size_t m, std::size_t n, const DimensionTable& c_table) {
  if (m == 0) throw ValidationError("at least one circle is required");
  mpz_class total = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    mpz_class term = 0;
    for_each_composition(m, c, 1, [&](const std::vector<std::size_t>& ms) {
      mpz_class multinomial = factorial(m);
      for (std::size_t x : ms) multinomial /= factorial(x);
      mpz_class inner = 0;
      for_each_composition(n, c, 0, [&](const std::vector<std::size_t>& ns) {
        mpz_class prod = 1;
        for (std::size_t i = 0; i < c && prod != 0; ++i) prod *= static_cast<unsigned long>(lookup_C(c_table, ms[i], ns[i]));
        inner += prod;
      });
      term += multinomial * inner;
    });
    const mpz_class cf = factorial(c);
    if (term % cf != 0) {
      throw ValidationError("component count " + std::to_string(c) + " term is not divisible by " + cf.get_str() +
                            " for m=" + std::to_string(m) + " n=" + std::to_string(n));
    }
    total += term / cf;
  }
  return to_u64(total);
}

DimensionTable dim_table_A(std::size_t n_max, std::size_t m_max, const DimensionTable& c_table) {
  DimensionTable t;
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = 1; m <= m_max; ++m) t.set(m, n, dim_A(m, n, c_table), Source::Formula);
  }
  return t;
}

Rational eval_A_polynomial(std::size_t n, std::size_t m_in) {
  const Rational m(static_cast<unsigned long>(m_in));
  auto pw = [&](int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= m;
    return r;
  };
  auto q = [](long num, long den) { return Rational(num, den); };
  Rational v;
  switch (n) {
    case 1:
      v = (pw(2) + m) / 2;
      break;
    case 2:
      v = (pw(4) + 3 * pw(2)) / 8 + (pw(3) + 5 * m) / 4;
      break;
    case 3:
      v = (pw(6) - 287 * pw(4)) / 144 + (19 * pw(5) + 325 * pw(3)) / 48 - q(433, 72) * pw(2) + q(23, 6) * m;
      break;
    case 4:
      v = (pw(8) - 46375 * pw(4)) / 384 + (17 * pw(7) + 26651 * pw(3)) / 96 - q(209, 64) * pw(6) +
          q(113, 4) * pw(5) - q(9775, 32) * pw(2) + q(3107, 24) * m;
      break;
    case 5:
      v = (pw(10) + 13188691 * pw(5)) / 3840 + (29 * pw(9) - 151305 * pw(6)) / 256 -
          (1421 * pw(8) + 23495 * pw(7)) / 384 - q(1139009, 96) * pw(4) + q(4492697, 192) * pw(3) -
          q(1897287, 80) * pw(2) + q(557411, 60) * m;
      break;
    default:
      throw ValidationError("closed-form polynomial available only for 1 <= n <= 5");
  }
  v.canonicalize();
  return v;
}

// --- full basis ------------------------------------------------------------------

ConnectedBases connected_bases_for(std::size_t m, std::size_t n, const BasisOptions& opts) {
  ConnectedBases out;
  for (std::size_t r = 1; r <= m; ++r) {
    for (std::size_t s = r - 1; s <= n; ++s) out.emplace(std::make_pair(r, s), connected_basis(r, s, opts));
  }
  return out;
}

std::vector<PartitionComposition> partition_compositions(std::size_t m, std::size_t n) {
  std::vector<PartitionComposition> out;
  std::vector<std::size_t> block(m, 0);
  auto emit_partition = [&] {
    const std::size_t c = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<std::vector<std::size_t>> parts(c);
    for (std::size_t i = 0; i < m; ++i) parts[block[i]].push_back(i);
    for_each_composition(n, c, 0, [&](const std::vector<std::size_t>& ns) {
      for (std::size_t i = 0; i < c; ++i) {
        if (ns[i] + 1 < parts[i].size()) return;
      }
      out.push_back(PartitionComposition{parts, ns});
    });
  };
  auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == m) {
      emit_partition();
      return;
    }
    for (std::size_t b = 0; b <= used && b < m; ++b) {
      block[i] = b;
      self(self, i + 1, std::max(used, b + 1));
    }
  };
  if (m == 0) return out;
  block[0] = 0;
  rec(rec, 1, 1);
  return out;
}

std::vector<ChordDiagram> full_basis(std::size_t m, std::size_t n, const ConnectedBases& connected) {
  std::vector<ChordDiagram> out;
  for (const PartitionComposition& pc : partition_compositions(m, n)) {
    const std::size_t c = pc.parts.size();
    std::vector<std::vector<ChordDiagram>> factors(c);
    bool empty = false;
    for (std::size_t i = 0; i < c; ++i) {
      auto it = connected.find({pc.parts[i].size(), pc.chords[i]});
      if (it == connected.end()) {
        throw ValidationError("missing connected basis for m=" + std::to_string(pc.parts[i].size()) +
                              " n=" + std::to_string(pc.chords[i]));
      }
      factors[i] = it->second.basis_diagrams();
      if (factors[i].empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> pick(c, 0);
    std::vector<PlacedPart> placed(c);
    while (true) {
      for (std::size_t i = 0; i < c; ++i) placed[i] = PlacedPart{factors[i][pick[i]], pc.parts[i]};
      out.push_back(disjoint_union(placed));
      std::size_t i = 0;
      for (; i < c; ++i) {
        if (++pick[i] < factors[i].size()) break;
        pick[i] = 0;
      }
      if (i == c) break;
    }
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw ChordError("full basis assembly produced a repeated diagram");
  }
  return out;
}

// --- basis file ------------------------------------------------------------------

std::string format_combination(const Combination& v, const DiagramSet& ds) {
  if (v.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += " + ";
    out += v[i].value.get_str();
    out.push_back('*');
    out += format(ds[v[i].col]);
  }
  return out;
}

Combination parse_combination(std::string_view text, const DiagramSet& ds) {
  Combination out;
  if (text == "0") return out;
  std::map<Column, Rational> acc;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(" + ", pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view term = text.substr(pos, end - pos);
    const std::size_t star = term.find('*');
    if (star == std::string_view::npos) throw ParseError("combination term without '*': '" + std::string(term) + "'");
    Rational coef;
    if (coef.set_str(std::string(term.substr(0, star)), 10) != 0) {
      throw ParseError("bad coefficient in '" + std::string(term) + "'");
    }
    coef.canonicalize();
    const ChordDiagram d = parse_diagram(term.substr(star + 1));
    const auto idx = ds.index_of(d);
    if (!idx) throw ParseError("diagram " + format(d) + " is not in the diagram set");
    acc[static_cast<Column>(*idx)] += coef;
    pos = end + 3;
  }
  for (auto& [c, v] : acc) {
    if (v != 0) out.push_back(Entry{c, v});
  }
  return out;
}

namespace {

std::string expression_body(const BasisResult& b) {
  std::string body;
  for (Column p : b.pivots) {
    body += format(b.diagrams[p]);
    body += " = ";
    body += format_combination(b.expressions.at(p), b.diagrams);
    body.push_back('\n');
  }
  return body;
}

constexpr std::string_view kSection = "pivot-expressions";

}  // namespace

void write_basis(std::ostream& out, const BasisResult& b) {
  write_diagram_set(out, b.diagrams);
  const std::string body = expression_body(b);
  out << kSection << " pivots=" << b.pivots.size() << " dimension=" << b.dimension() << " digest=" << sha256_hex(body)
      << '\n';
  out << body;
}

BasisResult read_basis(std::istream& in) {
  std::stringstream whole;
  whole << in.rdbuf();
  const std::string text = whole.str();
  std::size_t cut = text.rfind(std::string("\n") + std::string(kSection) + " ");
  if (cut == std::string::npos) throw ParseError("basis file lacks a pivot-expressions section");
  ++cut;
  std::istringstream head(text.substr(0, cut));
  BasisResult b;
  b.diagrams = read_diagram_set(head);

  std::istringstream rest(text.substr(cut));
  std::string header;
  std::getline(rest, header);
  std::size_t npivots = 0, dimension = 0;
  std::string want_digest;
  {
    std::istringstream hs(header.substr(kSection.size()));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("malformed section token '" + tok + "'");
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      try {
        if (key == "pivots") {
          npivots = std::stoul(val);
        } else if (key == "dimension") {
          dimension = std::stoul(val);
        } else if (key == "digest") {
          want_digest = val;
        } else {
          throw ParseError("unknown section key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        throw ParseError("malformed section value in '" + tok + "'");
      }
    }
  }
  std::string line, body;
  while (std::getline(rest, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ParseError("expression line without ' = '");
    const ChordDiagram pivot = parse_diagram(std::string_view(line).substr(0, eq));
    const auto idx = b.diagrams.index_of(pivot);
    if (!idx) throw ParseError("pivot diagram not in the diagram set");
    const Column p = static_cast<Column>(*idx);
    if (!b.pivots.empty() && b.pivots.back() >= p) throw ParseError("pivots not in ascending order");
    b.pivots.push_back(p);
    b.expressions[p] = parse_combination(std::string_view(line).substr(eq + 3), b.diagrams);
    body += line;
    body.push_back('\n');
  }
  if (sha256_hex(body) != want_digest) throw ParseError("pivot-expressions digest mismatch");
  if (b.pivots.size() != npivots) throw ParseError("pivot count does not match section header");
  std::size_t k = 0;
  for (Column c = 0; c < b.diagrams.size(); ++c) {
    if (k < b.pivots.size() && b.pivots[k] == c) {
      ++k;
    } else {
      b.basis.push_back(c);
    }
  }
  if (b.basis.size() != dimension) throw ParseError("dimension does not match section header");
  try {
    b.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string("inconsistent basis file: ") + e.what());
  }
  return b;
}

}  // namespace chordbasis

namespace chordbasis {

namespace {

struct TableRow {
  std::size_t n;
  std::vector<std::string> cells;
  std::string total;
};

std::vector<TableRow> table_rows(const DimensionTable& t, bool connected, std::size_t n_max, std::size_t m_max) {
  std::vector<TableRow> rows;
  for (std::size_t n = 1; n <= n_max; ++n) {
    TableRow r{n, {}, {}};
    std::uint64_t total = 0;
    for (std::size_t m = 1; m <= m_max; ++m) {
      if (connected && m > n + 1) {
        r.cells.emplace_back();
        continue;
      }
      const auto cell = t.find(m, n);
      if (!cell) throw ValidationError("table lacks m=" + std::to_string(m) + " n=" + std::to_string(n));
      total += cell->value;
      r.cells.push_back(std::to_string(cell->value));
    }
    if (connected) r.total = std::to_string(total);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::string format_dimension_table(const DimensionTable& t, bool connected, std::size_t n_max, std::size_t m_max) {
  const auto rows = table_rows(t, connected, n_max, m_max);
  std::vector<std::string> head{"n\\m"};
  for (std::size_t m = 1; m <= m_max; ++m) head.push_back(std::to_string(m));
  if (connected) head.emplace_back("Total");
  std::vector<std::vector<std::string>> grid{head};
  for (const auto& r : rows) {
    std::vector<std::string> line{std::to_string(r.n)};
    line.insert(line.end(), r.cells.begin(), r.cells.end());
    if (connected) line.push_back(r.total);
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) text += "  ";
      text += std::string(width[i] - line[i].size(), ' ') + line[i];
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  return out;
}

std::string dimension_table_csv(const DimensionTable& t, bool connected, std::size_t n_max, std::size_t m_max) {
  std::string out = "n";
  for (std::size_t m = 1; m <= m_max; ++m) out += "," + std::to_string(m);
  if (connected) out += ",Total";
  out += "\n";
  for (const auto& r : table_rows(t, connected, n_max, m_max)) {
    out += std::to_string(r.n);
    for (const auto& c : r.cells) out += "," + c;
    if (connected) out += "," + r.total;
    out += "\n";
  }
  return out;
}

}  // namespace chordbasis
