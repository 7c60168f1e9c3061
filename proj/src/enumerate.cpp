#include "chordbasis/enumerate.hpp"

#include <algorithm>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "chordbasis/digest.hpp"

namespace chordbasis {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays exact at every step
    const std::uint64_t num = n - k + i;
    if (r > kSaturated / num) return kSaturated;
    r = r * num / i;
  }
  return r;
}

// Calls `emit` for every sequence of length 2n in which each label 0..n-1
// appears twice and labels first appear in increasing order.
template <class Fn>
void for_each_first_occurrence_sequence(std::size_t n, Fn&& emit) {
  std::vector<Label> seq(2 * n);
  std::vector<int> uses(n, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t opened, std::size_t open_count) -> void {
    if (pos == 2 * n) {
      emit(seq);
      return;
    }
    for (std::size_t l = 0; l < opened; ++l) {
      if (uses[l] == 1) {
        uses[l] = 2;
        seq[pos] = static_cast<Label>(l);
        self(self, pos + 1, opened, open_count - 1);
        uses[l] = 1;
      }
    }
    if (opened < n) {
      uses[opened] = 1;
      seq[pos] = static_cast<Label>(opened);
      self(self, pos + 1, opened + 1, open_count + 1);
      uses[opened] = 0;
    }
  };
  rec(rec, 0, 0, 0);
}

template <class Fn>
void for_each_label_sequence(std::size_t n, Fn&& emit) {
  std::vector<Label> seq;
  for (std::size_t l = 0; l < n; ++l) {
    seq.push_back(static_cast<Label>(l));
    seq.push_back(static_cast<Label>(l));
  }
  do {
    emit(seq);
  } while (std::next_permutation(seq.begin(), seq.end()));
}

std::vector<ChordDiagram> enumerate_range(std::size_t m, std::size_t n, bool connected,
                                          const std::vector<std::vector<Offset>>& boundaries,
                                          std::size_t first, std::size_t stride, EnumerationMethod method,
                                          const Deadline& deadline) {
  std::vector<ChordDiagram> found;
  StringRep rep;
  const bool need_check = connected && m >= 2;
  if (method == EnumerationMethod::Orderly) {
    for (std::size_t b = first; b < boundaries.size(); b += stride) {
      deadline.check("enumeration");
      rep.starts = boundaries[b];
      for_each_first_occurrence_sequence(n, [&](const std::vector<Label>& seq) {
        rep.feet = seq;
        if (!is_canonical(rep)) return;
        if (need_check && !is_connected(rep)) return;
        found.push_back(ChordDiagram::trusted(rep));
      });
    }
    return found;
  }
  std::set<ChordDiagram> retained;
  for (std::size_t b = first; b < boundaries.size(); b += stride) {
    deadline.check("enumeration");
    rep.starts = boundaries[b];
    for_each_label_sequence(n, [&](const std::vector<Label>& seq) {
      rep.feet = seq;
      ChordDiagram d = canonicalize(rep);
      if (need_check && !is_connected(d)) return;
      retained.insert(std::move(d));
    });
  }
  return {retained.begin(), retained.end()};
}

DiagramSet enumerate_impl(std::size_t m, std::size_t n, bool connected, const EnumerationOptions& opts) {
  if (m < 1) throw ValidationError("at least one circle is required");
  if (m > kMaxCircles || n > kMaxChords) throw ValidationError("instance size out of range");
  DiagramSet ds;
  ds.m = m;
  ds.n = n;
  ds.connected_only = connected;
  if (connected && n + 1 < m) return ds;

  const std::uint64_t candidates = candidate_count(m, n, connected, opts.method);
  if (candidates > opts.max_candidates) {
    throw BudgetExceeded("enumeration of m=" + std::to_string(m) + " n=" + std::to_string(n) + " needs " +
                         std::to_string(candidates) + " candidates; cap is " +
                         std::to_string(opts.max_candidates));
  }
  const auto boundaries = boundary_vectors(m, 2 * n, connected && m >= 2);
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::vector<ChordDiagram>> parts(threads);
  if (threads == 1) {
    parts[0] = enumerate_range(m, n, connected, boundaries, 0, 1, opts.method, opts.deadline);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            parts[t] = enumerate_range(m, n, connected, boundaries, t, threads, opts.method, opts.deadline);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (auto& p : parts) {
    ds.diagrams.insert(ds.diagrams.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  std::sort(ds.diagrams.begin(), ds.diagrams.end());
  ds.diagrams.erase(std::unique(ds.diagrams.begin(), ds.diagrams.end()), ds.diagrams.end());
  return ds;
}

}  // namespace

std::optional<std::size_t> DiagramSet::index_of(const ChordDiagram& d) const {
  auto it = std::lower_bound(diagrams.begin(), diagrams.end(), d);
  if (it == diagrams.end() || !(*it == d)) return std::nullopt;
  return static_cast<std::size_t>(it - diagrams.begin());
}

void DiagramSet::validate() const {
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    const auto& d = diagrams[i];
    if (d.circles() != m || d.chords() != n) throw ValidationError("diagram with wrong (m, n) in set");
    if (i > 0 && !(diagrams[i - 1] < d)) throw ValidationError("diagram set is not strictly increasing");
    if (connected_only && !is_connected(d)) throw ValidationError("disconnected diagram in connected set");
  }
}

std::vector<std::vector<Offset>> boundary_vectors(std::size_t m, std::size_t len, bool skip_empty) {
  std::vector<std::vector<Offset>> out;
  std::vector<Offset> cur(m + 1, 0);
  cur[m] = static_cast<Offset>(len);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      if (skip_empty && cur[m - 1] == cur[m]) return;
      out.push_back(cur);
      return;
    }
    const std::size_t lo = cur[i - 1] + (skip_empty ? 1 : 0);
    for (std::size_t v = lo; v <= len; ++v) {
      cur[i] = static_cast<Offset>(v);
      self(self, i + 1);
    }
  };
  if (m == 1) {
    if (!(skip_empty && len == 0)) out.push_back(cur);
    return out;
  }
  rec(rec, 1);
  return out;
}

std::uint64_t candidate_count(std::size_t m, std::size_t n, bool connected, EnumerationMethod method) {
  const std::size_t len = 2 * n;
  std::uint64_t boundaries = 0;
  if (connected && m >= 2) {
    boundaries = len >= m ? binomial(len - 1, m - 1) : 0;
  } else {
    boundaries = binomial(len + m - 1, m - 1);
  }
  std::uint64_t per = 1;
  if (method == EnumerationMethod::Orderly) {
    for (std::size_t k = 1; k < len; k += 2) per = sat_mul(per, k);
  } else {
    for (std::size_t k = 1; k <= len; ++k) per = sat_mul(per, k);
    for (std::size_t k = 0; k < n; ++k) per /= 2;
  }
  return sat_mul(boundaries, per);
}

DiagramSet enumerate_all(std::size_t m, std::size_t n, const EnumerationOptions& opts) {
  return enumerate_impl(m, n, false, opts);
}

DiagramSet enumerate_connected(std::size_t m, std::size_t n, const EnumerationOptions& opts) {
  return enumerate_impl(m, n, true, opts);
}

// --- interchange file ----------------------------------------------------------

namespace {

std::string body_text(const DiagramSet& ds) {
  std::string body;
  for (const auto& d : ds.diagrams) {
    body += format(d);
    body.push_back('\n');
  }
  return body;
}

}  // namespace

std::string digest(const DiagramSet& ds) { return sha256_hex(body_text(ds)); }

void write_diagram_set(std::ostream& out, const DiagramSet& ds) {
  const std::string body = body_text(ds);
  out << "m=" << ds.m << " n=" << ds.n << " connected=" << (ds.connected_only ? 1 : 0)
      << " count=" << ds.size() << '\n';
  out << "digest=" << sha256_hex(body) << '\n';
  out << body;
}

DiagramSet read_diagram_set(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty diagram set file");
  DiagramSet ds;
  int connected = 0;
  std::size_t count = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    int fields = 0;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("malformed header token '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      try {
        if (key == "m") {
          ds.m = std::stoul(val);
        } else if (key == "n") {
          ds.n = std::stoul(val);
        } else if (key == "connected") {
          connected = std::stoi(val);
        } else if (key == "count") {
          count = std::stoul(val);
        } else {
          throw ParseError("unknown header key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        throw ParseError("malformed header value in '" + tok + "'");
      }
      ++fields;
    }
    if (fields != 4) throw ParseError("diagram set header needs m, n, connected and count");
  }
  ds.connected_only = connected != 0;
  std::string line;
  std::string expected_digest;
  if (!std::getline(in, line) || line.rfind("digest=", 0) != 0) throw ParseError("missing digest line");
  expected_digest = line.substr(7);
  std::string body;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') throw ParseError("CRLF line endings are not accepted");
    StringRep rep = parse(line);
    ChordDiagram d = canonicalize(rep);
    if (!(d.rep() == rep)) throw ParseError("diagram '" + line + "' is not in canonical form");
    ds.diagrams.push_back(std::move(d));
    body += line;
    body.push_back('\n');
  }
  if (ds.diagrams.size() != count) throw ParseError("diagram count does not match header");
  if (sha256_hex(body) != expected_digest) throw ParseError("diagram set digest mismatch");
  ds.validate();
  return ds;
}

}  // namespace chordbasis
