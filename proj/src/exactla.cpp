#include "chordbasis/exactla.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

#include "chordbasis/kernels.hpp"

namespace chordbasis {

std::size_t ExactMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

void ExactMatrix::validate() const {
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].col >= ncols) throw ValidationError("matrix column index out of range");
      if (r[i].value == 0) throw ValidationError("stored zero in sparse row");
      if (i > 0 && r[i - 1].col >= r[i].col) throw ValidationError("sparse row columns not increasing");
    }
  }
}

ExactMatrix assemble(std::span<const Relation> rows, std::size_t ncols) {
  ExactMatrix m;
  m.ncols = ncols;
  for (const Relation& rel : rows) {
    if (rel.empty()) continue;
    SparseRow row;
    row.reserve(rel.terms.size());
    for (const Term& t : rel.terms) {
      if (t.index >= ncols) throw ValidationError("relation index out of range for " + std::to_string(ncols) + " columns");
      if (t.coef == 0) continue;
      row.push_back(Entry{t.index, Rational(t.coef)});
    }
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i - 1].col == row[i].col) throw ValidationError("relation repeats a column");
    }
    if (!row.empty()) m.rows.push_back(std::move(row));
  }
  return m;
}

namespace {

// out = alpha * a - beta * b, dropping cancelled entries.
void combine(const SparseRow& a, const Rational& alpha, const SparseRow& b, const Rational& beta, SparseRow& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Rational tmp;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
      out.push_back(Entry{a[i].col, alpha * a[i].value});
      ++i;
    } else if (i == a.size() || b[j].col < a[i].col) {
      out.push_back(Entry{b[j].col, -(beta * b[j].value)});
      ++j;
    } else {
      tmp = alpha * a[i].value - beta * b[j].value;
      if (tmp != 0) out.push_back(Entry{a[i].col, tmp});
      ++i;
      ++j;
    }
  }
}

// Row policies.  A row is "installed" as the pivot row of its leading column.

struct RationalPolicy {
  static void install(SparseRow& r) {
    const Rational lead = r.front().value;
    for (auto& e : r) e.value /= lead;
  }
  // Removes the entry at pivot column of `piv` from `r`.
  static void eliminate(SparseRow& r, const Rational& at, const SparseRow& piv, SparseRow& scratch) {
    static const Rational one(1);
    combine(r, one, piv, at, scratch);
    r.swap(scratch);
  }
};

struct FractionFreePolicy {
  // Rows hold integers (denominator 1), primitive, positive lead.
  static void make_primitive(SparseRow& r) {
    mpz_class g = 0;
    for (const auto& e : r) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.value.get_num_mpz_t());
      if (g == 1) break;
    }
    if (r.front().value < 0) g = -g;
    if (g != 1) {
      for (auto& e : r) mpz_divexact(e.value.get_num_mpz_t(), e.value.get_num_mpz_t(), g.get_mpz_t());
    }
  }
  static void install(SparseRow& r) { make_primitive(r); }
  static void eliminate(SparseRow& r, const Rational& at, const SparseRow& piv, SparseRow& scratch) {
    const mpz_class& a = piv.front().value.get_num();
    const mpz_class& b = at.get_num();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const Rational alpha(mpz_class(a / g));
    const Rational beta(mpz_class(b / g));
    combine(r, alpha, piv, beta, scratch);
    r.swap(scratch);
    if (!r.empty()) make_primitive(r);
  }
  static void integerize(SparseRow& r) {
    mpz_class l = 1;
    for (const auto& e : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
    for (auto& e : r) e.value *= l;
    make_primitive(r);
  }
};

// Dense echelon continuation over Q.
class DenseEchelon {
 public:
  DenseEchelon(std::size_t ncols, std::size_t max_cells) : ncols_(ncols), max_cells_(max_cells), pivot_of_(ncols, -1) {}

  void add(const SparseRow& sparse) {
    std::vector<Rational> x(ncols_);
    for (const auto& e : sparse) x[e.col] = e.value;
    Rational f;
    for (std::size_t c = 0; c < ncols_; ++c) {
      if (x[c] == 0) continue;
      if (pivot_of_[c] < 0) {
        const Rational lead = x[c];
        for (std::size_t k = c; k < ncols_; ++k) {
          if (x[k] != 0) x[k] /= lead;
        }
        if ((rows_.size() + 1) * ncols_ > max_cells_) {
          throw BudgetExceeded("dense elimination exceeds the matrix cell budget");
        }
        pivot_of_[c] = static_cast<long>(rows_.size());
        rows_.push_back(std::move(x));
        return;
      }
      f = x[c];
      const auto& piv = rows_[static_cast<std::size_t>(pivot_of_[c])];
      for (std::size_t k = c; k < ncols_; ++k) {
        if (piv[k] != 0) x[k] -= f * piv[k];
      }
    }
  }

  RrefResult finish() {
    RrefResult out;
    out.rref.ncols = ncols_;
    std::vector<Column> order;
    for (std::size_t c = 0; c < ncols_; ++c) {
      if (pivot_of_[c] >= 0) order.push_back(static_cast<Column>(c));
    }
    Rational f;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto& row = rows_[static_cast<std::size_t>(pivot_of_[*it])];
      for (std::size_t q = *it + 1; q < ncols_; ++q) {
        if (row[q] == 0 || pivot_of_[q] < 0) continue;
        f = row[q];
        const auto& piv = rows_[static_cast<std::size_t>(pivot_of_[q])];
        for (std::size_t k = q; k < ncols_; ++k) {
          if (piv[k] != 0) row[k] -= f * piv[k];
        }
      }
    }
    for (Column c : order) {
      const auto& row = rows_[static_cast<std::size_t>(pivot_of_[c])];
      SparseRow s;
      for (std::size_t k = c; k < ncols_; ++k) {
        if (row[k] != 0) s.push_back(Entry{static_cast<Column>(k), row[k]});
      }
      out.rref.rows.push_back(std::move(s));
    }
    out.pivots = std::move(order);
    out.rank = out.pivots.size();
    return out;
  }

 private:
  std::size_t ncols_;
  std::size_t max_cells_;
  std::vector<long> pivot_of_;
  std::vector<std::vector<Rational>> rows_;
};

template <class Policy>
class SparseEchelon {
 public:
  SparseEchelon(std::size_t ncols, const RrefOptions& opts) : ncols_(ncols), opts_(opts), pivot_of_(ncols, -1) {}

  // Returns false once the rows are dense enough to hand over.
  bool add(SparseRow r) {
    while (!r.empty()) {
      const Column lead = r.front().col;
      const long p = pivot_of_[lead];
      if (p < 0) {
        Policy::install(r);
        cells_ += r.size();
        if (cells_ > opts_.max_cells) throw BudgetExceeded("sparse elimination exceeds the matrix cell budget");
        pivot_of_[lead] = static_cast<long>(rows_.size());
        rows_.push_back(std::move(r));
        if (rows_.size() < opts_.dense_min_rows) return true;
        return static_cast<double>(cells_) <= opts_.dense_fill * static_cast<double>(rows_.size() * ncols_);
      }
      const Rational at = r.front().value;
      Policy::eliminate(r, at, rows_[static_cast<std::size_t>(p)], scratch_);
    }
    return true;
  }

  RrefResult finish() {
    std::vector<Column> order;
    for (std::size_t c = 0; c < ncols_; ++c) {
      if (pivot_of_[c] >= 0) order.push_back(static_cast<Column>(c));
    }
    // Back substitution, last pivot first, so every row used is final.
    std::size_t done = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (++done % 256 == 0) opts_.deadline.check("back substitution");
      auto& row = rows_[static_cast<std::size_t>(pivot_of_[*it])];
      for (std::size_t k = 1; k < row.size();) {
        const Column q = row[k].col;
        if (pivot_of_[q] < 0) {
          ++k;
          continue;
        }
        const Rational at = row[k].value;
        Policy::eliminate(row, at, rows_[static_cast<std::size_t>(pivot_of_[q])], scratch_);
        // entries before q are untouched; resume at the first column past q
        k = static_cast<std::size_t>(
            std::upper_bound(row.begin(), row.end(), q, [](Column c, const Entry& e) { return c < e.col; }) -
            row.begin());
      }
    }
    RrefResult out;
    out.rref.ncols = ncols_;
    for (Column c : order) {
      SparseRow row = std::move(rows_[static_cast<std::size_t>(pivot_of_[c])]);
      RationalPolicy::install(row);
      out.rref.rows.push_back(std::move(row));
    }
    out.pivots = std::move(order);
    out.rank = out.pivots.size();
    return out;
  }

  // Moves the rows out as monic rational rows.
  std::vector<SparseRow> release() {
    for (auto& r : rows_) RationalPolicy::install(r);
    return std::move(rows_);
  }

 private:
  std::size_t ncols_;
  RrefOptions opts_;
  std::vector<long> pivot_of_;
  std::vector<SparseRow> rows_;
  SparseRow scratch_;
  std::size_t cells_ = 0;
};

template <class Policy>
RrefResult rref_with(const ExactMatrix& mat, const RrefOptions& opts) {
  SparseEchelon<Policy> ech(mat.ncols, opts);
  std::size_t i = 0;
  bool sparse_ok = true;
  for (; i < mat.rows.size() && sparse_ok; ++i) {
    if (i % 256 == 0) opts.deadline.check("row reduction");
    SparseRow r = mat.rows[i];
    if constexpr (std::is_same_v<Policy, FractionFreePolicy>) {
      if (!r.empty()) FractionFreePolicy::integerize(r);
    }
    sparse_ok = ech.add(std::move(r));
  }
  if (sparse_ok) return ech.finish();
  DenseEchelon dense(mat.ncols, opts.max_cells);
  for (const auto& r : ech.release()) dense.add(r);
  for (; i < mat.rows.size(); ++i) {
    if (i % 16 == 0) opts.deadline.check("row reduction");
    dense.add(mat.rows[i]);
  }
  return dense.finish();
}

}  // namespace

RrefResult rref(const ExactMatrix& mat, const RrefOptions& opts) {
  mat.validate();
  if (opts.method == RrefMethod::FractionFree) return rref_with<FractionFreePolicy>(mat, opts);
  return rref_with<RationalPolicy>(mat, opts);
}

RrefResult rref_dense(const ExactMatrix& mat) {
  mat.validate();
  DenseEchelon dense(mat.ncols, static_cast<std::size_t>(-1));
  for (const auto& r : mat.rows) dense.add(r);
  return dense.finish();
}

Expressions express_pivots(const RrefResult& r) {
  Expressions out;
  for (std::size_t i = 0; i < r.rank; ++i) {
    const SparseRow& row = r.rref.rows[i];
    SparseRow e;
    for (std::size_t k = 1; k < row.size(); ++k) e.push_back(Entry{row[k].col, -row[k].value});
    out.emplace(r.pivots[i], std::move(e));
  }
  return out;
}

SparseRow substitute(const SparseRow& row, const Expressions& expr) {
  std::map<Column, Rational> acc;
  for (const Entry& e : row) {
    auto it = expr.find(e.col);
    if (it == expr.end()) {
      acc[e.col] += e.value;
    } else {
      for (const Entry& t : it->second) acc[t.col] += e.value * t.value;
    }
  }
  SparseRow out;
  for (auto& [c, v] : acc) {
    if (v != 0) out.push_back(Entry{c, v});
  }
  return out;
}

// --- modular cross-check ------------------------------------------------------

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = kernels::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = kernels::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t random_prime_62(std::mt19937_64& rng) {
  while (true) {
    const std::uint64_t candidate = (rng() >> 2) | (1ull << 61) | 1ull;
    if (is_prime_u64(candidate)) return candidate;
  }
}

namespace {

std::uint64_t reduce_mod(const Rational& v, std::uint64_t p) {
  mpz_class pz;
  mpz_import(pz.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  auto to_u64 = [&](const mpz_class& z) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), z.get_mpz_t(), pz.get_mpz_t());
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
    return out;
  };
  const std::uint64_t num = to_u64(v.get_num());
  const std::uint64_t den = to_u64(v.get_den());
  if (den == 0) throw ValidationError("denominator divisible by the modulus");
  return den == 1 ? num : kernels::mul_mod(num, kernels::inv_mod(den, p), p);
}

struct ModRow {
  std::vector<std::pair<Column, std::uint64_t>> sparse;
  std::vector<std::uint64_t> dense;  // used once promoted
  bool is_dense = false;
  std::size_t lead = 0;              // first possibly nonzero column when dense

  void promote(std::size_t ncols) {
    dense.assign(ncols, 0);
    for (auto& [c, v] : sparse) dense[c] = v;
    lead = sparse.empty() ? ncols : sparse.front().first;
    sparse.clear();
    is_dense = true;
  }
};

}  // namespace

std::size_t modular_rank(const ExactMatrix& mat, std::uint64_t p) {
  const std::size_t ncols = mat.ncols;
  std::vector<long> pivot_of(ncols, -1);
  std::vector<ModRow> pivots;
  std::vector<std::pair<Column, std::uint64_t>> scratch;

  auto sub_sparse = [&](ModRow& r, std::uint64_t f, const ModRow& piv) {
    scratch.clear();
    std::size_t i = 0, j = 0;
    const auto& a = r.sparse;
    const auto& b = piv.sparse;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        scratch.push_back(a[i++]);
      } else {
        const std::uint64_t t = kernels::mul_mod(f, b[j].second, p);
        if (i == a.size() || b[j].first < a[i].first) {
          scratch.emplace_back(b[j].first, t == 0 ? 0 : p - t);
          ++j;
        } else {
          const std::uint64_t v = a[i].second >= t ? a[i].second - t : a[i].second + (p - t);
          if (v != 0) scratch.emplace_back(a[i].first, v);
          ++i;
          ++j;
        }
      }
    }
    r.sparse.swap(scratch);
  };

  for (const auto& src : mat.rows) {
    ModRow r;
    for (const auto& e : src) {
      const std::uint64_t v = reduce_mod(e.value, p);
      if (v != 0) r.sparse.emplace_back(e.col, v);
    }
    while (true) {
      std::size_t lead = ncols;
      if (r.is_dense) {
        while (r.lead < ncols && r.dense[r.lead] == 0) ++r.lead;
        lead = r.lead;
      } else if (!r.sparse.empty()) {
        lead = r.sparse.front().first;
      }
      if (lead == ncols) break;
      const long pi = pivot_of[lead];
      if (pi < 0) {
        if (r.is_dense) {
          const std::uint64_t inv = kernels::inv_mod(r.dense[lead], p);
          kernels::scale_mod(std::span(r.dense).subspan(lead), inv, p);
        } else {
          const std::uint64_t inv = kernels::inv_mod(r.sparse.front().second, p);
          for (auto& e : r.sparse) e.second = kernels::mul_mod(e.second, inv, p);
        }
        pivot_of[lead] = static_cast<long>(pivots.size());
        pivots.push_back(std::move(r));
        break;
      }
      const ModRow& piv = pivots[static_cast<std::size_t>(pi)];
      const std::uint64_t f = r.is_dense ? r.dense[lead] : r.sparse.front().second;
      if (!r.is_dense && piv.is_dense) r.promote(ncols);
      if (r.is_dense) {
        if (piv.is_dense) {
          kernels::axpy_mod(std::span(r.dense).subspan(lead), std::span(piv.dense).subspan(lead), f, p);
        } else {
          for (const auto& [c, v] : piv.sparse) {
            const std::uint64_t t = kernels::mul_mod(f, v, p);
            r.dense[c] = r.dense[c] >= t ? r.dense[c] - t : r.dense[c] + (p - t);
          }
        }
      } else {
        sub_sparse(r, f, piv);
        if (2 * r.sparse.size() > ncols) r.promote(ncols);
      }
    }
  }
  return pivots.size();
}

}  // namespace chordbasis
