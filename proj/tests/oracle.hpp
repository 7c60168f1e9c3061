#pragma once

// Reference computations written independently of the library: brute-force
// canonical forms, connectivity, a dense rational eliminator over
// boost::multiprecision and the exponential formula for full dimensions.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chordbasis/basis.hpp"

namespace oracle {

using Blocks = std::vector<std::vector<int>>;
using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Blocks to_blocks(const chordbasis::StringRep& rep) {
  Blocks out;
  for (const auto& b : rep.blocks()) out.emplace_back(b.begin(), b.end());
  return out;
}

inline chordbasis::StringRep to_rep(const Blocks& blocks) {
  std::vector<std::vector<chordbasis::Label>> b;
  for (const auto& blk : blocks) b.emplace_back(blk.begin(), blk.end());
  return chordbasis::StringRep::from_blocks(b);
}

inline std::vector<int> relabel(const Blocks& blocks) {
  std::map<int, int> names;
  std::vector<int> flat;
  for (const auto& b : blocks) {
    for (int x : b) {
      auto [it, fresh] = names.emplace(x, static_cast<int>(names.size()));
      flat.push_back(it->second);
    }
  }
  return flat;
}

/// Least relabeled foot sequence over every combination of rotations.
inline Blocks canonical(const Blocks& blocks) {
  std::vector<std::size_t> rot(blocks.size(), 0);
  std::vector<int> best;
  while (true) {
    Blocks r(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      for (std::size_t k = 0; k < b.size(); ++k) r[i].push_back(b[(k + rot[i]) % b.size()]);
    }
    const auto flat = relabel(r);
    if (best.empty() || flat < best) best = flat;
    std::size_t i = 0;
    while (i < blocks.size()) {
      if (blocks[i].size() > 1 && ++rot[i] < blocks[i].size()) break;
      rot[i] = 0;
      ++i;
    }
    if (i == blocks.size()) break;
  }
  Blocks out(blocks.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out[i].assign(best.begin() + pos, best.begin() + pos + blocks[i].size());
    pos += blocks[i].size();
  }
  return out;
}

inline bool connected(const Blocks& blocks) {
  const std::size_t m = blocks.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  std::map<int, std::size_t> first;
  for (std::size_t i = 0; i < m; ++i) {
    for (int x : blocks[i]) {
      auto [it, fresh] = first.emplace(x, i);
      if (!fresh) parent[root(i)] = root(it->second);
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < m; ++i) roots.insert(root(i));
  return roots.size() == 1;
}

/// Every diagram with m circles and n chords, in canonical block form.
inline std::set<Blocks> all_diagrams(std::size_t m, std::size_t n, bool connected_only) {
  std::set<Blocks> out;
  std::vector<int> word;
  std::vector<int> used(n, 0);
  std::function<void()> fill = [&]() {
    if (word.size() == 2 * n) {
      std::vector<std::size_t> cut(m + 1, 0);
      cut[m] = 2 * n;
      std::function<void(std::size_t)> split = [&](std::size_t i) {
        if (i == m) {
          Blocks b(m);
          for (std::size_t c = 0; c < m; ++c) b[c].assign(word.begin() + cut[c], word.begin() + cut[c + 1]);
          if (!connected_only || connected(b)) out.insert(canonical(b));
          return;
        }
        for (std::size_t v = cut[i - 1]; v <= 2 * n; ++v) {
          cut[i] = v;
          split(i + 1);
        }
      };
      split(1);
      return;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (used[x] == 2) continue;
      ++used[x];
      word.push_back(static_cast<int>(x));
      fill();
      word.pop_back();
      --used[x];
    }
  };
  fill();
  return out;
}

// --- dense rational elimination ----------------------------------------------------

using Dense = std::vector<std::vector<BigRational>>;

inline BigRational to_big(const chordbasis::Rational& q) { return BigRational(q.get_str()); }

inline Dense to_dense(const chordbasis::ExactMatrix& mat) {
  Dense d(mat.nrows(), std::vector<BigRational>(mat.ncols));
  for (std::size_t r = 0; r < mat.nrows(); ++r) {
    for (const auto& e : mat.rows[r]) d[r][e.col] = to_big(e.value);
  }
  return d;
}

/// Gauss-Jordan; zero rows dropped.  Returns the reduced rows.
inline Dense rref(Dense a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const BigRational lead = a[r][c];
    for (auto& v : a[r]) v /= lead;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const BigRational f = a[i][c];
      for (std::size_t k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  a.resize(r);
  return a;
}

inline Dense to_dense(const chordbasis::RrefResult& r, std::size_t ncols) {
  Dense d(r.rref.nrows(), std::vector<BigRational>(ncols));
  for (std::size_t i = 0; i < r.rref.nrows(); ++i) {
    for (const auto& e : r.rref.rows[i]) d[i][e.col] = to_big(e.value);
  }
  return d;
}

inline chordbasis::ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t max_dim) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<int> val(-4, 4);
  std::uniform_int_distribution<int> sparse(0, 2);
  chordbasis::ExactMatrix m;
  const std::size_t rows = dim(rng);
  m.ncols = dim(rng);
  const int zero_bias = sparse(rng);
  for (std::size_t r = 0; r < rows; ++r) {
    chordbasis::SparseRow row;
    for (std::size_t c = 0; c < m.ncols; ++c) {
      int v = val(rng);
      if (zero_bias > 0 && sparse(rng) < zero_bias) v = 0;
      if (v != 0) row.push_back(chordbasis::Entry{static_cast<chordbasis::Column>(c), chordbasis::Rational(v)});
    }
    m.rows.push_back(std::move(row));
  }
  // Occasional dependent rows.
  if (rows >= 2 && sparse(rng) == 0) {
    chordbasis::SparseRow sum;
    std::map<chordbasis::Column, chordbasis::Rational> acc;
    for (const auto& e : m.rows[0]) acc[e.col] += e.value;
    for (const auto& e : m.rows[1]) acc[e.col] += 2 * e.value;
    for (auto& [c, v] : acc) {
      if (v != 0) sum.push_back(chordbasis::Entry{c, v});
    }
    m.rows.back() = sum;
  }
  return m;
}

// --- full dimensions by the exponential formula ---------------------------------------

/// Sum over set partitions of the m circles (unordered, no factorial) and
/// chord distributions over the blocks of the product of connected
/// dimensions.  `conn(r, s)` returns the connected dimension.
inline BigInt full_dimension(std::size_t m, std::size_t n, const std::function<BigInt(std::size_t, std::size_t)>& conn) {
  BigInt total = 0;
  std::vector<std::size_t> block(m, 0);
  std::function<void(std::size_t, std::size_t)> partitions = [&](std::size_t i, std::size_t used) {
    if (i == m) {
      std::vector<std::size_t> sizes(used, 0);
      for (std::size_t b : block) ++sizes[b];
      std::function<BigInt(std::size_t, std::size_t)> distribute = [&](std::size_t k, std::size_t left) -> BigInt {
        if (k == sizes.size()) return left == 0 ? BigInt(1) : BigInt(0);
        BigInt acc = 0;
        for (std::size_t s = 0; s <= left; ++s) {
          const BigInt c = conn(sizes[k], s);
          if (c != 0) acc += c * distribute(k + 1, left - s);
        }
        return acc;
      };
      total += distribute(0, n);
      return;
    }
    for (std::size_t b = 0; b <= used && b < m; ++b) {
      block[i] = b;
      partitions(i + 1, std::max(used, b + 1));
    }
  };
  partitions(0, 0);
  return total;
}

}  // namespace oracle
