#include "chordbasis/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

#define CHORDBASIS_AVX2 __attribute__((target("avx2,popcnt")))

namespace chordbasis::kernels::avx2 {

namespace {

struct Factor {
  __m256i c_lo, c_hi;  // 32-bit halves of c
  __m256i s_lo, s_hi;  // 32-bit halves of the Shoup quotient
  __m256i p;
};

CHORDBASIS_AVX2 inline Factor make_factor(std::uint64_t c, std::uint64_t p) {
  const std::uint64_t s = shoup_factor(c, p);
  return Factor{_mm256_set1_epi64x(static_cast<long long>(c & 0xFFFFFFFFu)),
                _mm256_set1_epi64x(static_cast<long long>(c >> 32)),
                _mm256_set1_epi64x(static_cast<long long>(s & 0xFFFFFFFFu)),
                _mm256_set1_epi64x(static_cast<long long>(s >> 32)), _mm256_set1_epi64x(static_cast<long long>(p))};
}

// High 64 bits of x * b, with b given by its 32-bit halves.
CHORDBASIS_AVX2 inline __m256i mulhi_u64(__m256i x, __m256i b_lo, __m256i b_hi) {
  const __m256i mask = _mm256_set1_epi64x(0xFFFFFFFFll);
  const __m256i x_hi = _mm256_srli_epi64(x, 32);
  const __m256i ll = _mm256_mul_epu32(x, b_lo);
  const __m256i lh = _mm256_mul_epu32(x, b_hi);
  const __m256i hl = _mm256_mul_epu32(x_hi, b_lo);
  const __m256i hh = _mm256_mul_epu32(x_hi, b_hi);
  const __m256i mid = _mm256_add_epi64(_mm256_add_epi64(_mm256_srli_epi64(ll, 32), _mm256_and_si256(lh, mask)),
                                       _mm256_and_si256(hl, mask));
  return _mm256_add_epi64(_mm256_add_epi64(hh, _mm256_srli_epi64(lh, 32)),
                          _mm256_add_epi64(_mm256_srli_epi64(hl, 32), _mm256_srli_epi64(mid, 32)));
}

// Low 64 bits of x * b.
CHORDBASIS_AVX2 inline __m256i mullo_u64(__m256i x, __m256i b_lo, __m256i b_hi) {
  const __m256i x_hi = _mm256_srli_epi64(x, 32);
  const __m256i ll = _mm256_mul_epu32(x, b_lo);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(x, b_hi), _mm256_mul_epu32(x_hi, b_lo));
  return _mm256_add_epi64(ll, _mm256_slli_epi64(cross, 32));
}

// c * x mod p for x in [0, p).
CHORDBASIS_AVX2 inline __m256i mul_factor(__m256i x, const Factor& f) {
  const __m256i q = mulhi_u64(x, f.s_lo, f.s_hi);
  const __m256i p_lo = _mm256_and_si256(f.p, _mm256_set1_epi64x(0xFFFFFFFFll));
  const __m256i p_hi = _mm256_srli_epi64(f.p, 32);
  __m256i r = _mm256_sub_epi64(mullo_u64(x, f.c_lo, f.c_hi), mullo_u64(q, p_lo, p_hi));
  // r < 2p < 2^63, so signed compares are exact
  const __m256i lt = _mm256_cmpgt_epi64(f.p, r);
  return _mm256_sub_epi64(r, _mm256_andnot_si256(lt, f.p));
}

}  // namespace

CHORDBASIS_AVX2 void axpy_mod(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t c,
                              std::uint64_t p) {
  const Factor f = make_factor(c, p);
  std::size_t i = 0;
  const std::size_t n = dst.size();
  for (; i + 4 <= n; i += 4) {
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + i));
    const __m256i t = mul_factor(s, f);
    const __m256i under = _mm256_cmpgt_epi64(t, d);
    const __m256i r = _mm256_add_epi64(_mm256_sub_epi64(d, t), _mm256_and_si256(under, f.p));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + i), r);
  }
  scalar::axpy_mod(dst.subspan(i), src.subspan(i), c, p);
}

CHORDBASIS_AVX2 void scale_mod(std::span<std::uint64_t> dst, std::uint64_t c, std::uint64_t p) {
  const Factor f = make_factor(c, p);
  std::size_t i = 0;
  const std::size_t n = dst.size();
  for (; i + 4 <= n; i += 4) {
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + i), mul_factor(d, f));
  }
  scalar::scale_mod(dst.subspan(i), c, p);
}

CHORDBASIS_AVX2 std::size_t count_nonzero(std::span<const std::uint64_t> v) {
  std::size_t zeros = 0;
  std::size_t i = 0;
  const __m256i zero = _mm256_setzero_si256();
  for (; i + 4 <= v.size(); i += 4) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.data() + i));
    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(x, zero)));
    zeros += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  return (i - zeros) + scalar::count_nonzero(v.subspan(i));
}

}  // namespace chordbasis::kernels::avx2

#endif
