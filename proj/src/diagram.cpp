#include "chordbasis/diagram.hpp"

#include <algorithm>
#include <numeric>

namespace chordbasis {

namespace {

constexpr Label kUnassigned = 0xFF;

struct LabelMap {
  std::vector<Label> to_new;
  Label next = 0;

  friend bool operator==(const LabelMap& a, const LabelMap& b) { return a.to_new == b.to_new; }
  friend bool operator<(const LabelMap& a, const LabelMap& b) { return a.to_new < b.to_new; }
};

// Relabels circle `block` read from rotation `r` into `out`, extending `map`.
// Stops early and returns +1 as soon as the output exceeds `bound` (when
// given); otherwise returns the three-way comparison against `bound`.
int rotate_relabel(std::span<const Label> block, std::size_t r, LabelMap& map, Label* out,
                   const Label* bound) {
  const std::size_t len = block.size();
  int cmp = 0;
  for (std::size_t t = 0; t < len; ++t) {
    std::size_t idx = r + t;
    if (idx >= len) idx -= len;
    Label& slot = map.to_new[block[idx]];
    if (slot == kUnassigned) slot = map.next++;
    out[t] = slot;
    if (bound != nullptr && cmp == 0) {
      if (out[t] < bound[t]) {
        cmp = -1;
      } else if (out[t] > bound[t]) {
        return 1;
      }
    }
  }
  return cmp;
}

void dedupe(std::vector<LabelMap>& states) {
  if (states.size() < 2) return;
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
}

}  // namespace

// --- StringRep ---------------------------------------------------------------

StringRep StringRep::from_blocks(const std::vector<std::vector<Label>>& blocks) {
  StringRep rep;
  rep.starts.assign(1, 0);
  for (const auto& b : blocks) {
    rep.feet.insert(rep.feet.end(), b.begin(), b.end());
    rep.starts.push_back(static_cast<Offset>(rep.feet.size()));
  }
  return rep;
}

std::vector<std::vector<Label>> StringRep::blocks() const {
  std::vector<std::vector<Label>> out(circles());
  for (std::size_t i = 0; i < circles(); ++i) {
    auto c = circle(i);
    out[i].assign(c.begin(), c.end());
  }
  return out;
}

void StringRep::validate() const {
  if (starts.size() < 2) throw ValidationError("a diagram needs at least one circle");
  if (starts.size() - 1 > kMaxCircles) throw ValidationError("too many circles");
  if (starts.front() != 0) throw ValidationError("first circle must start at position 0");
  if (starts.back() != feet.size()) throw ValidationError("last boundary must equal the foot count");
  for (std::size_t i = 1; i < starts.size(); ++i) {
    if (starts[i] < starts[i - 1]) throw ValidationError("circle boundaries must be nondecreasing");
  }
  if (feet.size() % 2 != 0) throw ValidationError("odd number of chord feet");
  const std::size_t n = feet.size() / 2;
  if (n > kMaxChords) throw ValidationError("too many chords");
  std::vector<int> seen(n, 0);
  for (Label l : feet) {
    if (l >= n) {
      throw ValidationError("chord label " + std::to_string(l) + " outside [0, " + std::to_string(n) + ")");
    }
    ++seen[l];
  }
  for (std::size_t l = 0; l < n; ++l) {
    if (seen[l] != 2) {
      throw ValidationError("chord label " + std::to_string(l) + " occurs " + std::to_string(seen[l]) +
                            " times");
    }
  }
}

bool StringRep::valid() const noexcept {
  try {
    validate();
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

std::strong_ordering operator<=>(const StringRep& a, const StringRep& b) {
  if (auto c = a.circles() <=> b.circles(); c != 0) return c;
  if (auto c = a.chords() <=> b.chords(); c != 0) return c;
  if (auto c = a.starts <=> b.starts; c != 0) return c;
  return a.feet <=> b.feet;
}

std::vector<std::vector<std::size_t>> CirclePartition::classes() const {
  std::vector<std::vector<std::size_t>> out(count);
  for (std::size_t i = 0; i < component_of.size(); ++i) out[component_of[i]].push_back(i);
  return out;
}

// --- text format -------------------------------------------------------------

StringRep parse(std::string_view text) {
  bool delimited = text.find(',') != std::string_view::npos;
  if (!text.empty() && text.back() == '.') {
    delimited = true;
    text.remove_suffix(1);
  }
  std::vector<std::vector<Label>> blocks(1);
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '|') {
      blocks.emplace_back();
      ++i;
    } else if (ch >= '0' && ch <= '9') {
      unsigned value = 0;
      if (delimited) {
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          value = value * 10 + static_cast<unsigned>(text[i] - '0');
          if (value > kMaxChords) throw ParseError("chord label too large");
          ++i;
        }
        if (i < text.size() && text[i] == ',') {
          ++i;
          if (i == text.size() || text[i] == '|') throw ParseError("dangling ',' in diagram text");
        }
      } else {
        value = static_cast<unsigned>(ch - '0');
        ++i;
      }
      blocks.back().push_back(static_cast<Label>(value));
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "' in diagram text");
    }
  }
  StringRep rep = StringRep::from_blocks(blocks);
  rep.validate();
  return rep;
}

std::string format(const StringRep& rep) {
  const bool delimited = rep.chords() > 10;
  std::string out;
  bool any_comma = false;
  for (std::size_t i = 0; i < rep.circles(); ++i) {
    if (i > 0) out.push_back('|');
    auto block = rep.circle(i);
    for (std::size_t k = 0; k < block.size(); ++k) {
      if (delimited) {
        if (k > 0) {
          out.push_back(',');
          any_comma = true;
        }
        out += std::to_string(block[k]);
      } else {
        out.push_back(static_cast<char>('0' + block[k]));
      }
    }
  }
  if (delimited && !any_comma) out.push_back('.');
  return out;
}

ChordDiagram parse_diagram(std::string_view text) { return canonicalize(parse(text)); }

// --- canonical form ------------------------------------------------------------

StringRep relabel_first_occurrence(const StringRep& rep) {
  StringRep out = rep;
  std::vector<Label> map(256, kUnassigned);
  Label next = 0;
  for (Label& l : out.feet) {
    if (map[l] == kUnassigned) map[l] = next++;
    l = map[l];
  }
  return out;
}

ChordDiagram canonicalize(const StringRep& rep) {
  rep.validate();
  const std::size_t n = rep.chords();
  StringRep out;
  out.starts = rep.starts;
  out.feet.assign(rep.feet.size(), 0);

  std::vector<LabelMap> states{LabelMap{std::vector<Label>(n, kUnassigned), 0}};
  std::vector<LabelMap> next_states;
  std::vector<Label> block_buf;
  for (std::size_t i = 0; i < rep.circles(); ++i) {
    auto block = rep.circle(i);
    const std::size_t len = block.size();
    if (len == 0) continue;
    Label* best = out.feet.data() + rep.starts[i];
    block_buf.resize(len);
    bool have_best = false;
    next_states.clear();
    for (const LabelMap& st : states) {
      for (std::size_t r = 0; r < len; ++r) {
        LabelMap trial = st;
        const int cmp = rotate_relabel(block, r, trial, block_buf.data(), have_best ? best : nullptr);
        if (!have_best || cmp < 0) {
          std::copy(block_buf.begin(), block_buf.end(), best);
          next_states.clear();
          next_states.push_back(std::move(trial));
          have_best = true;
        } else if (cmp == 0) {
          next_states.push_back(std::move(trial));
        }
      }
    }
    dedupe(next_states);
    states.swap(next_states);
  }
  return ChordDiagram::trusted(std::move(out));
}

ChordDiagram canonicalize_exhaustive(const StringRep& rep) {
  rep.validate();
  const std::size_t m = rep.circles();
  std::vector<std::size_t> rot(m, 0);
  StringRep trial = rep;
  StringRep best;
  bool have_best = false;
  while (true) {
    for (std::size_t i = 0; i < m; ++i) {
      auto block = rep.circle(i);
      for (std::size_t t = 0; t < block.size(); ++t) {
        trial.feet[rep.starts[i] + t] = block[(rot[i] + t) % block.size()];
      }
    }
    StringRep relabeled = relabel_first_occurrence(trial);
    if (!have_best || relabeled.feet < best.feet) {
      best = std::move(relabeled);
      have_best = true;
    }
    std::size_t i = 0;
    for (; i < m; ++i) {
      if (++rot[i] < std::max<std::size_t>(rep.circle_size(i), 1)) break;
      rot[i] = 0;
    }
    if (i == m) break;
  }
  return ChordDiagram::trusted(std::move(best));
}

bool is_canonical(const StringRep& rep) {
  const std::size_t n = rep.chords();
  std::vector<LabelMap> states{LabelMap{std::vector<Label>(n, kUnassigned), 0}};
  std::vector<LabelMap> next_states;
  std::vector<Label> block_buf;
  for (std::size_t i = 0; i < rep.circles(); ++i) {
    auto block = rep.circle(i);
    const std::size_t len = block.size();
    if (len == 0) continue;
    const Label* target = rep.feet.data() + rep.starts[i];
    block_buf.resize(len);
    next_states.clear();
    for (const LabelMap& st : states) {
      for (std::size_t r = 0; r < len; ++r) {
        LabelMap trial = st;
        const int cmp = rotate_relabel(block, r, trial, block_buf.data(), target);
        if (cmp < 0) return false;
        if (cmp == 0) next_states.push_back(std::move(trial));
      }
    }
    dedupe(next_states);
    states.swap(next_states);
  }
  return true;
}

// --- structure -----------------------------------------------------------------

ChordDiagram permute_circles(const ChordDiagram& d, std::span<const std::size_t> sigma) {
  const std::size_t m = d.circles();
  if (sigma.size() != m) throw ValidationError("permutation size does not match circle count");
  std::vector<bool> hit(m, false);
  for (std::size_t s : sigma) {
    if (s >= m || hit[s]) throw ValidationError("circle permutation is not a bijection");
    hit[s] = true;
  }
  std::vector<std::vector<Label>> blocks(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto c = d.rep().circle(j);
    blocks[sigma[j]].assign(c.begin(), c.end());
  }
  return canonicalize(StringRep::from_blocks(blocks));
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

CirclePartition components(const StringRep& rep) {
  rep.validate();
  const std::size_t m = rep.circles();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::size_t> first_circle(rep.chords(), m);
  for (std::size_t i = 0; i < m; ++i) {
    for (Label l : rep.circle(i)) {
      if (first_circle[l] == m) {
        first_circle[l] = i;
      } else {
        std::size_t a = find_root(parent, first_circle[l]);
        std::size_t b = find_root(parent, i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  CirclePartition p;
  p.component_of.assign(m, 0);
  std::vector<std::size_t> id_of_root(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = find_root(parent, i);
    if (id_of_root[r] == m) id_of_root[r] = p.count++;
    p.component_of[i] = id_of_root[r];
  }
  return p;
}

bool is_connected(const StringRep& rep) { return components(rep).count == 1; }

std::vector<std::size_t> component_chord_counts(const StringRep& rep, const CirclePartition& p) {
  std::vector<std::size_t> counts(p.count, 0);
  std::vector<bool> seen(rep.chords(), false);
  for (std::size_t i = 0; i < rep.circles(); ++i) {
    for (Label l : rep.circle(i)) {
      if (!seen[l]) {
        seen[l] = true;
        ++counts[p.component_of[i]];
      }
    }
  }
  return counts;
}

ChordDiagram disjoint_union(std::span<const PlacedPart> parts) {
  std::size_t total = 0;
  for (const auto& part : parts) {
    if (part.targets.size() != part.diagram.circles()) {
      throw ValidationError("target list length differs from the part's circle count");
    }
    total += part.targets.size();
  }
  std::vector<std::vector<Label>> blocks(total);
  std::vector<bool> used(total, false);
  std::size_t offset = 0;
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < part.targets.size(); ++k) {
      const std::size_t t = part.targets[k];
      if (t >= total || used[t]) throw ValidationError("target circle lists overlap or leave gaps");
      used[t] = true;
      for (Label l : part.diagram.rep().circle(k)) {
        blocks[t].push_back(static_cast<Label>(l + offset));
      }
    }
    offset += part.diagram.chords();
  }
  if (offset > kMaxChords) throw ValidationError("too many chords");
  return canonicalize(StringRep::from_blocks(blocks));
}

ChordDiagram restrict_to(const ChordDiagram& d, std::span<const std::size_t> circles) {
  const std::size_t m = d.circles();
  if (circles.empty()) throw ValidationError("a full subdiagram needs at least one circle");
  std::vector<bool> keep(m, false);
  for (std::size_t c : circles) {
    if (c >= m || keep[c]) throw ValidationError("invalid circle list for full subdiagram");
    keep[c] = true;
  }
  std::vector<int> inside(d.chords(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!keep[i]) continue;
    for (Label l : d.rep().circle(i)) ++inside[l];
  }
  std::vector<std::vector<Label>> blocks;
  for (std::size_t c : circles) {
    auto& b = blocks.emplace_back();
    for (Label l : d.rep().circle(c)) {
      if (inside[l] == 2) b.push_back(l);
    }
  }
  return canonicalize(relabel_first_occurrence(StringRep::from_blocks(blocks)));
}

}  // namespace chordbasis

std::size_t std::hash<chordbasis::ChordDiagram>::operator()(const chordbasis::ChordDiagram& d) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (auto s : d.rep().starts) mix(s + 0x100u);
  for (auto l : d.rep().feet) mix(l);
  return static_cast<std::size_t>(h);
}
