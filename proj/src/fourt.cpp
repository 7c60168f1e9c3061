#include "chordbasis/fourt.hpp"

#include <algorithm>
#include <exception>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace chordbasis {

namespace {

using Blocks = std::vector<std::vector<Label>>;

struct Foot {
  std::size_t circle;
  std::size_t pos;
};

Foot other_foot(const Blocks& blocks, Label chord, Foot known) {
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    for (std::size_t p = 0; p < blocks[c].size(); ++p) {
      if (blocks[c][p] == chord && !(c == known.circle && p == known.pos)) return {c, p};
    }
  }
  throw ValidationError("chord with a single foot");
}

// Removes the foot at `mover` and reinserts it immediately before or after
// the foot at `anchor` (positions refer to the unmodified blocks).
StringRep move_foot(const Blocks& blocks, Foot mover, Foot anchor, bool after) {
  Blocks b = blocks;
  const Label label = b[mover.circle][mover.pos];
  b[mover.circle].erase(b[mover.circle].begin() + static_cast<std::ptrdiff_t>(mover.pos));
  std::size_t at = anchor.pos;
  if (anchor.circle == mover.circle && anchor.pos > mover.pos) --at;
  if (after) ++at;
  auto& target = b[anchor.circle];
  target.insert(target.begin() + static_cast<std::ptrdiff_t>(at), label);
  return StringRep::from_blocks(b);
}

class RowBuilder {
 public:
  explicit RowBuilder(const DiagramSet& ds) : ds_(ds) {}

  void add(const StringRep& rep, int coef) {
    const ChordDiagram d = canonicalize(rep);
    const auto idx = ds_.index_of(d);
    if (!idx) {
      throw ChordError("4T term " + format(d) + " is missing from the diagram set (m=" + std::to_string(ds_.m) +
                       " n=" + std::to_string(ds_.n) + ")");
    }
    for (std::size_t i = 0; i < used_; ++i) {
      if (terms_[i].index == *idx) {
        terms_[i].coef += coef;
        return;
      }
    }
    terms_[used_++] = Term{static_cast<std::uint32_t>(*idx), coef};
  }

  std::vector<Term> finish() {
    std::vector<Term> out;
    for (std::size_t i = 0; i < used_; ++i) {
      if (terms_[i].coef != 0) out.push_back(terms_[i]);
    }
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
    used_ = 0;
    return out;
  }

 private:
  const DiagramSet& ds_;
  std::array<Term, 4> terms_{};
  std::size_t used_ = 0;
};

// Four placements of the moving foot around the two feet of the fixed chord.
// With every strand oriented clockwise the relation reads
//   sum over feet f of the fixed chord: D(mover just after f) - D(mover just before f) = 0,
// scaled so the generating diagram carries +1.
void emit_instance(const Blocks& blocks, Foot mover, Foot near, int sign, RowBuilder& row) {
  const Label fixed = blocks[near.circle][near.pos];
  const Foot far = other_foot(blocks, fixed, near);
  row.add(move_foot(blocks, mover, near, true), sign);
  row.add(move_foot(blocks, mover, near, false), -sign);
  row.add(move_foot(blocks, mover, far, true), sign);
  row.add(move_foot(blocks, mover, far, false), -sign);
}

void relations_for_source(const DiagramSet& ds, std::size_t source, std::vector<Relation>& out) {
  const StringRep& rep = ds[source].rep();
  const Blocks blocks = rep.blocks();
  RowBuilder row(ds);
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    const std::size_t len = blocks[c].size();
    if (len < 2) continue;
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t k2 = (k + 1) % len;
      const Label a = blocks[c][k];
      const Label b = blocks[c][k2];
      if (a == b) continue;
      const bool wrap = k2 == 0;
      Provenance prov{static_cast<std::uint32_t>(source), static_cast<std::uint16_t>(c),
                      static_cast<std::uint16_t>(k), static_cast<std::uint16_t>(k2),
                      wrap ? Family::WrapA : Family::InteriorA};
      // a moves; it currently sits just before b's foot.
      emit_instance(blocks, {c, k}, {c, k2}, -1, row);
      out.push_back(Relation{row.finish(), prov});
      // b moves; it currently sits just after a's foot.
      prov.family = wrap ? Family::WrapB : Family::InteriorB;
      emit_instance(blocks, {c, k2}, {c, k}, +1, row);
      out.push_back(Relation{row.finish(), prov});
    }
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::InteriorA:
      return "interior-A";
    case Family::InteriorB:
      return "interior-B";
    case Family::WrapA:
      return "wrap-A";
    case Family::WrapB:
      return "wrap-B";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::InteriorA, Family::InteriorB, Family::WrapA, Family::WrapB}) {
    if (to_string(f) == s) return f;
  }
  throw ParseError("unknown relation family '" + s + "'");
}

std::vector<Relation> generate_relations(const DiagramSet& ds, const RelationOptions& opts) {
  std::vector<Relation> rows;
  if (ds.n < 2) return rows;
  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1 || ds.size() < 2 * threads) {
    for (std::size_t s = 0; s < ds.size(); ++s) relations_for_source(ds, s, rows);
    return rows;
  }
  std::vector<std::vector<Relation>> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const std::size_t lo = ds.size() * t / threads;
        const std::size_t hi = ds.size() * (t + 1) / threads;
        try {
          for (std::size_t s = lo; s < hi; ++s) relations_for_source(ds, s, parts[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& p : parts) {
    rows.insert(rows.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return rows;
}

bool check_component_preservation(const Relation& rel, const DiagramSet& ds) {
  bool first = true;
  CirclePartition part;
  std::vector<std::size_t> counts;
  for (const Term& t : rel.terms) {
    if (t.index >= ds.size()) return false;
    const StringRep& rep = ds[t.index].rep();
    CirclePartition p = components(rep);
    std::vector<std::size_t> c = component_chord_counts(rep, p);
    if (first) {
      part = std::move(p);
      counts = std::move(c);
      first = false;
    } else if (!(p == part) || c != counts) {
      return false;
    }
  }
  return true;
}

// --- relation file -------------------------------------------------------------

void write_relations(std::ostream& out, const DiagramSet& ds, const std::vector<Relation>& rows) {
  out << "relations m=" << ds.m << " n=" << ds.n << " count=" << ds.size() << " digest=" << digest(ds)
      << " rows=" << rows.size() << '\n';
  for (const Relation& r : rows) {
    const Provenance& p = r.provenance;
    out << "# source=" << p.source << " circle=" << p.circle << " pos=" << p.first << ',' << p.second
        << " family=" << to_string(p.family) << '\n';
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
      if (i > 0) out << ' ';
      out << r.terms[i].index << ':' << r.terms[i].coef;
    }
    out << '\n';
  }
}

std::vector<Relation> read_relations(std::istream& in, const DiagramSet& ds) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty relation file");
  std::ostringstream expected;
  expected << "relations m=" << ds.m << " n=" << ds.n << " count=" << ds.size() << " digest=" << digest(ds)
           << " rows=";
  if (line.rfind(expected.str(), 0) != 0) throw ParseError("relation file is not bound to this diagram set");
  const std::size_t rows = std::stoul(line.substr(expected.str().size()));
  std::vector<Relation> out;
  out.reserve(rows);
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) throw ParseError("expected provenance line, got '" + line + "'");
    Relation r;
    {
      unsigned long source = 0, circle = 0, first = 0, second = 0;
      char fam[32] = {0};
      if (std::sscanf(line.c_str(), "# source=%lu circle=%lu pos=%lu,%lu family=%31s", &source, &circle, &first,
                      &second, fam) != 5) {
        throw ParseError("malformed provenance line '" + line + "'");
      }
      r.provenance = Provenance{static_cast<std::uint32_t>(source), static_cast<std::uint16_t>(circle),
                                static_cast<std::uint16_t>(first), static_cast<std::uint16_t>(second),
                                family_from_string(fam)};
    }
    if (!std::getline(in, line)) throw ParseError("provenance line without a row");
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError("malformed term '" + tok + "'");
      Term t{static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon))),
             static_cast<std::int32_t>(std::stol(tok.substr(colon + 1)))};
      if (t.index >= ds.size()) throw ParseError("term index out of range");
      r.terms.push_back(t);
    }
    out.push_back(std::move(r));
  }
  if (out.size() != rows) throw ParseError("relation row count does not match header");
  return out;
}

}  // namespace chordbasis
