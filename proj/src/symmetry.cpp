#include "chordbasis/symmetry.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "chordbasis/digest.hpp"
#include "json.hpp"

namespace chordbasis {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

bool row_less(const SparseRow& a, const SparseRow& b) {
  const std::size_t k = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i].col != b[i].col) return a[i].col < b[i].col;
    if (a[i].value != b[i].value) return a[i].value < b[i].value;
  }
  return a.size() < b.size();
}

struct RowLess {
  bool operator()(const SparseRow& a, const SparseRow& b) const { return row_less(a, b); }
};

Combination unit(Column c) { return Combination{Entry{c, Rational(1)}}; }

}  // namespace

std::vector<Permutation> all_permutations(std::size_t m) {
  std::vector<Permutation> out;
  Permutation p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Permutation> adjacent_transpositions(std::size_t m) {
  std::vector<Permutation> out;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    Permutation p(m);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::swap(p[i], p[i + 1]);
    out.push_back(std::move(p));
  }
  return out;
}

Combination act(const Permutation& sigma, const Combination& v, const DiagramSet& ds) {
  std::map<Column, Rational> acc;
  for (const Entry& e : v) {
    const ChordDiagram img = permute_circles(ds[e.col], sigma);
    const auto idx = ds.index_of(img);
    if (!idx) throw ValidationError("diagram set is not closed under circle permutations");
    acc[static_cast<Column>(*idx)] += e.value;
  }
  Combination out;
  for (auto& [c, x] : acc) {
    if (x != 0) out.push_back(Entry{c, x});
  }
  return out;
}

Combination add(const Combination& a, const Combination& b) {
  Combination out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].col < a[i].col) {
      out.push_back(b[j++]);
    } else {
      Rational s = a[i].value + b[j].value;
      if (s != 0) out.push_back(Entry{a[i].col, s});
      ++i;
      ++j;
    }
  }
  return out;
}

// --- Frame ---------------------------------------------------------------------------

Frame::Frame(const BasisResult& b) : Frame(b, [&] {
  std::vector<Combination> v;
  for (Column c : b.basis) v.push_back(unit(c));
  return v;
}()) {}

Frame::Frame(const BasisResult& b, std::vector<Combination> vectors) : b_(&b), vectors_(std::move(vectors)) {
  const std::size_t d = b.dimension();
  position_.assign(b.diagrams.size(), npos);
  for (std::size_t k = 0; k < d; ++k) position_[b.basis[k]] = k;
  if (vectors_.size() != d) {
    throw ValidationError("frame has " + std::to_string(vectors_.size()) + " vectors for a quotient of dimension " +
                          std::to_string(d));
  }
  identity_ = true;
  for (std::size_t k = 0; k < d && identity_; ++k) {
    identity_ = vectors_[k].size() == 1 && vectors_[k][0].col == b.basis[k] && vectors_[k][0].value == 1;
  }
  if (identity_) return;

  // Gauss-Jordan on [M | I], M's column k holding the coordinates of vector k.
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(2 * d));
  for (std::size_t k = 0; k < d; ++k) {
    for (const Entry& e : raw_coordinates(vectors_[k])) a[e.col][k] = e.value;
    a[k][d + k] = 1;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && a[piv][col] == 0) ++piv;
    if (piv == d) throw ValidationError("frame vectors are linearly dependent in the quotient");
    std::swap(a[piv], a[col]);
    const Rational lead = a[col][col];
    for (auto& x : a[col]) {
      if (x != 0) x /= lead;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = col; k < 2 * d; ++k) {
        if (a[col][k] != 0) a[r][k] -= f * a[col][k];
      }
    }
  }
  inverse_columns_.assign(d, std::vector<Rational>(d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j = 0; j < d; ++j) inverse_columns_[j][r] = a[r][d + j];
  }
}

SparseRow Frame::raw_coordinates(const Combination& v) const {
  SparseRow out;
  for (const Entry& e : express(v, *b_)) out.push_back(Entry{static_cast<Column>(position_[e.col]), e.value});
  return out;
}

SparseRow Frame::coordinates(const Combination& v) const {
  SparseRow x = raw_coordinates(v);
  if (identity_) return x;
  const std::size_t d = size();
  std::vector<Rational> c(d);
  for (const Entry& e : x) {
    const auto& col = inverse_columns_[e.col];
    for (std::size_t r = 0; r < d; ++r) {
      if (col[r] != 0) c[r] += e.value * col[r];
    }
  }
  SparseRow out;
  for (std::size_t r = 0; r < d; ++r) {
    if (c[r] != 0) out.push_back(Entry{static_cast<Column>(r), c[r]});
  }
  return out;
}

std::size_t quotient_rank(const BasisResult& b, const std::vector<Combination>& vectors) {
  std::vector<std::size_t> position(b.diagrams.size(), npos);
  for (std::size_t k = 0; k < b.basis.size(); ++k) position[b.basis[k]] = k;
  ExactMatrix mat;
  mat.ncols = b.dimension();
  for (const auto& v : vectors) {
    SparseRow row;
    for (const Entry& e : express(v, b)) row.push_back(Entry{static_cast<Column>(position[e.col]), e.value});
    if (!row.empty()) mat.rows.push_back(std::move(row));
  }
  return rref(mat).rank;
}

std::optional<std::size_t> unit_position(const SparseRow& coords) {
  if (coords.size() == 1 && coords[0].value == 1) return coords[0].col;
  return std::nullopt;
}

// --- orbits --------------------------------------------------------------------------

std::size_t OrbitReport::incomplete() const {
  return static_cast<std::size_t>(std::count_if(orbits.begin(), orbits.end(), [](const Orbit& o) { return !o.complete; }));
}

bool OrbitReport::dichotomy_holds() const {
  return std::all_of(orbits.begin(), orbits.end(),
                     [](const Orbit& o) { return o.complete || o.type_one || o.type_two; });
}

std::vector<std::size_t> OrbitReport::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& o : orbits) out.push_back(o.size());
  return out;
}

OrbitReport orbit_report(const Frame& f) {
  const DiagramSet& ds = f.basis().diagrams;
  OrbitReport rep;
  rep.m = ds.m;
  rep.n = ds.n;
  const std::size_t d = f.size();
  rep.orbit_of.assign(d, npos);
  const auto perms = all_permutations(ds.m);
  for (std::size_t i = 0; i < d; ++i) {
    if (rep.orbit_of[i] != npos) continue;
    const std::size_t id = rep.orbits.size();
    Orbit o;
    std::set<SparseRow, RowLess> seen;
    for (const Permutation& sigma : perms) {
      Combination t = act(sigma, f.vectors()[i], ds);
      SparseRow c = f.coordinates(t);
      if (!seen.insert(c).second) continue;
      if (auto k = unit_position(c)) {
        o.in_basis.push_back(*k);
        rep.orbit_of[*k] = id;
      }
      o.members.push_back(std::move(t));
      o.member_coordinates.push_back(std::move(c));
    }
    std::sort(o.in_basis.begin(), o.in_basis.end());
    o.complete = o.in_basis.size() == o.members.size();
    rep.orbits.push_back(std::move(o));
  }
  for (std::size_t id = 0; id < rep.orbits.size(); ++id) {
    Orbit& o = rep.orbits[id];
    if (o.complete) continue;
    for (const SparseRow& c : o.member_coordinates) {
      if (unit_position(c)) continue;
      for (const Entry& e : c) {
        const std::size_t other = rep.orbit_of[e.col];
        if (other == id) {
          if (!o.type_one) o.type_one_witness = std::make_pair(o.in_basis.front(), static_cast<std::size_t>(e.col));
          o.type_one = true;
        } else if (!rep.orbits[other].complete) {
          if (!o.type_two) o.type_two_witness = std::make_pair(o.in_basis.front(), static_cast<std::size_t>(e.col));
          o.type_two = true;
        }
      }
    }
  }
  return rep;
}

EquivariantResult equivariantize_m2(const BasisResult& b) {
  if (b.diagrams.m != 2) throw ValidationError("equivariantize_m2 needs a two-circle basis");
  EquivariantResult res;
  for (Column c : b.basis) res.vectors.push_back(unit(c));
  const Permutation swap{1, 0};
  while (true) {
    const Frame f(b, res.vectors);
    const OrbitReport rep = orbit_report(f);
    const std::size_t k = rep.incomplete();
    if (!res.incomplete_history.empty() && k >= res.incomplete_history.back()) {
      throw ChordError("repair round left " + std::to_string(k) + " incomplete orbits, previously " +
                       std::to_string(res.incomplete_history.back()));
    }
    res.incomplete_history.push_back(k);
    if (k == 0) break;
    if (!rep.dichotomy_holds()) throw ChordError("an incomplete orbit is of neither type I nor type II");

    const auto it = std::find_if(rep.orbits.begin(), rep.orbits.end(), [](const Orbit& o) { return !o.complete; });
    const std::size_t id = static_cast<std::size_t>(it - rep.orbits.begin());
    if (it->in_basis.size() != 1) throw ChordError("incomplete two-circle orbit meets the basis more than once");
    const std::size_t i = it->in_basis.front();
    const Combination t = act(swap, res.vectors[i], b.diagrams);
    const SparseRow c = f.coordinates(t);
    Rational self;
    for (const Entry& e : c) {
      if (e.col == i) self = e.value;
    }
    if (self != 0 && self != -1) {
      res.vectors[i] = add(res.vectors[i], t);
      res.log.push_back("type I: vector " + std::to_string(i) + " replaced by its sum with its swap");
      continue;
    }
    std::optional<std::size_t> beta;
    for (const Entry& e : c) {
      const std::size_t other = rep.orbit_of[e.col];
      if (other != id && !rep.orbits[other].complete) {
        beta = e.col;
        break;
      }
    }
    if (beta) {
      res.vectors[*beta] = t;
      res.log.push_back("type II: vector " + std::to_string(*beta) + " replaced by the swap of vector " +
                        std::to_string(i));
      continue;
    }
    // swap(b) = -b + (complete orbits): pair b with a fixed vector f, so that
    // {f + b, swap(f + b)} replaces {f, b}.  Independent unless f has
    // coefficient -2 in swap(b).
    std::optional<std::size_t> fixed;
    for (const Orbit& o : rep.orbits) {
      if (!o.complete || o.size() != 1) continue;
      const std::size_t j = o.in_basis.front();
      Rational wj;
      for (const Entry& e : c) {
        if (e.col == j) wj = e.value;
      }
      if (wj != -2) {
        fixed = j;
        break;
      }
    }
    if (!fixed) {
      throw ChordError("vector " + std::to_string(i) +
                       " has swap coefficient -1 on itself, no type II witness and no usable fixed vector");
    }
    const Combination x = add(res.vectors[*fixed], res.vectors[i]);
    res.vectors[i] = act(swap, x, b.diagrams);
    res.vectors[*fixed] = x;
    res.log.push_back("pairing: vectors " + std::to_string(*fixed) + " and " + std::to_string(i) +
                      " replaced by the orbit of their sum");
  }
  return res;
}

bool verify_equivariant(const std::vector<GeneralizedBasisVector>& vectors, const BasisResult& b, std::string* why) {
  auto fail = [&](std::string reason) {
    if (why) *why = std::move(reason);
    return false;
  };
  std::optional<Frame> f;
  try {
    f.emplace(b, vectors);
  } catch (const ValidationError& e) {
    return fail(e.what());
  }
  for (const Permutation& g : adjacent_transpositions(b.diagrams.m)) {
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      const SparseRow c = f->coordinates(act(g, vectors[k], b.diagrams));
      if (!unit_position(c)) {
        return fail("translate of vector " + std::to_string(k) + " by a transposition is not a member");
      }
    }
  }
  if (why) why->clear();
  return true;
}

// --- underlying graphs -------------------------------------------------------------

Multigraph underlying_graph(const ChordDiagram& d) {
  const StringRep& rep = d.rep();
  std::vector<std::size_t> first(rep.chords(), npos);
  Multigraph g;
  for (std::size_t i = 0; i < rep.circles(); ++i) {
    for (Label l : rep.circle(i)) {
      if (first[l] == npos) {
        first[l] = i;
      } else {
        g.emplace_back(std::min(first[l], i), std::max(first[l], i));
      }
    }
  }
  std::sort(g.begin(), g.end());
  return g;
}

Multigraph permute_graph(const Multigraph& g, const Permutation& sigma) {
  Multigraph out;
  out.reserve(g.size());
  for (auto [a, b] : g) out.emplace_back(std::min(sigma[a], sigma[b]), std::max(sigma[a], sigma[b]));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<GeneralizedBasisVector>> graph_normal_basis(const BasisResult& b) {
  const DiagramSet& ds = b.diagrams;
  const auto perms = all_permutations(ds.m);
  std::map<Multigraph, std::vector<Column>> by_graph;
  for (Column c = 0; c < ds.size(); ++c) by_graph[underlying_graph(ds[c])].push_back(c);

  std::set<Multigraph> done;
  std::vector<GeneralizedBasisVector> vectors;
  for (const auto& [g, cols] : by_graph) {
    if (done.count(g)) continue;
    std::map<Multigraph, Permutation> images;
    std::vector<const Permutation*> stabilizer;
    for (const Permutation& sigma : perms) {
      Multigraph h = permute_graph(g, sigma);
      if (h == g) stabilizer.push_back(&sigma);
      images.emplace(std::move(h), sigma);
    }
    std::optional<Column> rep;
    for (Column c : cols) {
      const Combination base = express(unit(c), b);
      const bool fixed = std::all_of(stabilizer.begin(), stabilizer.end(), [&](const Permutation* s) {
        return express(act(*s, unit(c), ds), b) == base;
      });
      if (fixed) {
        rep = c;
        break;
      }
    }
    if (!rep) return std::nullopt;
    for (const auto& [h, sigma] : images) {
      vectors.push_back(act(sigma, unit(*rep), ds));
      done.insert(h);
    }
  }
  if (vectors.size() != b.dimension() || quotient_rank(b, vectors) != b.dimension()) return std::nullopt;
  return vectors;
}

// --- trees ---------------------------------------------------------------------------

LabeledTree tree_from_prufer(const std::vector<std::size_t>& seq, std::size_t vertices) {
  if (vertices < 2 || seq.size() + 2 != vertices) {
    if (vertices == 1 && seq.empty()) return LabeledTree{1, {}};
    throw ValidationError("Prufer sequence length must be vertices - 2");
  }
  std::vector<std::size_t> degree(vertices, 1);
  for (std::size_t x : seq) {
    if (x >= vertices) throw ValidationError("Prufer entry out of range");
    ++degree[x];
  }
  LabeledTree t{vertices, {}};
  for (std::size_t x : seq) {
    std::size_t leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    t.edges.emplace_back(std::min(leaf, x), std::max(leaf, x));
    --degree[leaf];
    --degree[x];
  }
  std::size_t u = npos;
  for (std::size_t v = 0; v < vertices; ++v) {
    if (degree[v] != 1) continue;
    if (u == npos) {
      u = v;
    } else {
      t.edges.emplace_back(u, v);
    }
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

std::vector<std::size_t> prufer_of(const LabeledTree& t) {
  const std::size_t v = t.vertices;
  if (t.edges.size() + 1 != v) throw ValidationError("not a tree: wrong edge count");
  std::vector<std::set<std::size_t>> adj(v);
  for (auto [a, b] : t.edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<std::size_t> seq;
  std::vector<bool> removed(v, false);
  for (std::size_t step = 0; step + 2 < v; ++step) {
    std::size_t leaf = 0;
    while (removed[leaf] || adj[leaf].size() != 1) {
      if (++leaf == v) throw ValidationError("not a tree: no leaf left");
    }
    const std::size_t nb = *adj[leaf].begin();
    seq.push_back(nb);
    adj[nb].erase(leaf);
    adj[leaf].clear();
    removed[leaf] = true;
  }
  return seq;
}

std::vector<LabeledTree> all_labeled_trees(std::size_t vertices) {
  std::vector<LabeledTree> out;
  if (vertices == 0) return out;
  if (vertices == 1) return {LabeledTree{1, {}}};
  std::vector<std::size_t> seq(vertices - 2, 0);
  while (true) {
    out.push_back(tree_from_prufer(seq, vertices));
    std::size_t i = seq.size();
    while (i > 0) {
      if (++seq[i - 1] < vertices) break;
      seq[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

ChordDiagram tree_diagram(const LabeledTree& t) {
  std::vector<std::vector<std::pair<std::size_t, Label>>> around(t.vertices);
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    auto [a, b] = t.edges[e];
    around[a].emplace_back(b, static_cast<Label>(e));
    around[b].emplace_back(a, static_cast<Label>(e));
  }
  std::vector<std::vector<Label>> blocks(t.vertices);
  for (std::size_t v = 0; v < t.vertices; ++v) {
    std::sort(around[v].begin(), around[v].end());
    for (auto [nb, label] : around[v]) blocks[v].push_back(label);
  }
  return canonicalize(StringRep::from_blocks(blocks));
}

std::vector<ChordDiagram> tree_basis(std::size_t n) {
  std::vector<ChordDiagram> out;
  for (const LabeledTree& t : all_labeled_trees(n + 1)) out.push_back(tree_diagram(t));
  std::sort(out.begin(), out.end());
  return out;
}

LabeledTree tree_reduce(const ChordDiagram& d) {
  if (d.chords() + 1 != d.circles()) throw ValidationError("tree reduction needs m = n + 1");
  if (!is_connected(d)) throw ValidationError("tree reduction needs a connected diagram");
  return LabeledTree{d.circles(), underlying_graph(d)};
}

// --- files ---------------------------------------------------------------------------

namespace {

std::string types_of(const Orbit& o) {
  if (o.complete) return "-";
  std::string s;
  if (o.type_one) s = "I";
  if (o.type_two) s += s.empty() ? "II" : ",II";
  return s.empty() ? "none" : s;
}

}  // namespace

void write_orbit_report(std::ostream& out, const OrbitReport& r, const DiagramSet& ds) {
  out << "orbits m=" << r.m << " n=" << r.n << " count=" << r.orbits.size() << " incomplete=" << r.incomplete()
      << " dichotomy=" << (r.dichotomy_holds() ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < r.orbits.size(); ++i) {
    const Orbit& o = r.orbits[i];
    out << "orbit " << i << " size=" << o.size() << " complete=" << (o.complete ? 1 : 0) << " types=" << types_of(o)
        << " basis=";
    for (std::size_t k = 0; k < o.in_basis.size(); ++k) out << (k ? "," : "") << o.in_basis[k];
    out << '\n';
    for (const auto& mem : o.members) out << "  " << format_combination(mem, ds) << '\n';
  }
}

std::string orbit_report_json(const OrbitReport& r, const DiagramSet& ds) {
  nlohmann::ordered_json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["incomplete"] = r.incomplete();
  j["dichotomy"] = r.dichotomy_holds();
  j["orbits"] = nlohmann::ordered_json::array();
  for (const Orbit& o : r.orbits) {
    nlohmann::ordered_json jo;
    jo["size"] = o.size();
    jo["complete"] = o.complete;
    jo["type_one"] = o.type_one;
    jo["type_two"] = o.type_two;
    jo["basis_positions"] = o.in_basis;
    auto members = nlohmann::ordered_json::array();
    for (const auto& mem : o.members) members.push_back(format_combination(mem, ds));
    jo["members"] = std::move(members);
    j["orbits"].push_back(std::move(jo));
  }
  return j.dump(2) + "\n";
}

void write_equivariant(std::ostream& out, const std::vector<GeneralizedBasisVector>& vectors, const DiagramSet& ds) {
  std::string body;
  for (const auto& v : vectors) {
    body += format_combination(v, ds);
    body.push_back('\n');
  }
  out << "equivariant m=" << ds.m << " n=" << ds.n << " count=" << vectors.size() << " digest=" << sha256_hex(body)
      << '\n'
      << body;
}

std::vector<GeneralizedBasisVector> read_equivariant(std::istream& in, const DiagramSet& ds) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("equivariant ", 0) != 0) {
    throw ParseError("missing equivariant header");
  }
  std::size_t m = 0, n = 0, count = 0;
  std::string want;
  std::istringstream hs(header.substr(12));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("malformed header token '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    try {
      if (key == "m") {
        m = std::stoul(val);
      } else if (key == "n") {
        n = std::stoul(val);
      } else if (key == "count") {
        count = std::stoul(val);
      } else if (key == "digest") {
        want = val;
      } else {
        throw ParseError("unknown header key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError("malformed header value in '" + tok + "'");
    }
  }
  if (m != ds.m || n != ds.n) throw ParseError("equivariant file is for a different (m, n)");
  std::vector<GeneralizedBasisVector> out;
  std::string line, body;
  while (std::getline(in, line)) {
    out.push_back(parse_combination(line, ds));
    body += line;
    body.push_back('\n');
  }
  if (out.size() != count) throw ParseError("vector count does not match header");
  if (sha256_hex(body) != want) throw ParseError("equivariant file digest mismatch");
  return out;
}

}  // namespace chordbasis
