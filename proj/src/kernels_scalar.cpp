#include <atomic>

#include "chordbasis/kernels.hpp"

namespace chordbasis::kernels {

namespace {

Isa probe_cpu() {
#if defined(__x86_64__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{probe_cpu()};
  return isa;
}

}  // namespace

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa isa = probe_cpu();
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

Isa select_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  active().store(isa, std::memory_order_relaxed);
  return isa;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e != 0) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t shoup_factor(std::uint64_t c, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(c) << 64) / p);
}

namespace scalar {

void axpy_mod(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t c, std::uint64_t p) {
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const std::uint64_t t = mul_mod(c, src[i], p);
    dst[i] = dst[i] >= t ? dst[i] - t : dst[i] + (p - t);
  }
}

void scale_mod(std::span<std::uint64_t> dst, std::uint64_t c, std::uint64_t p) {
  for (auto& v : dst) v = mul_mod(c, v, p);
}

std::size_t count_nonzero(std::span<const std::uint64_t> v) {
  std::size_t n = 0;
  for (auto x : v) n += x != 0;
  return n;
}

}  // namespace scalar

void axpy_mod(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t c, std::uint64_t p) {
#if defined(__x86_64__)
  if (active_isa() == Isa::Avx2) return avx2::axpy_mod(dst, src, c, p);
#endif
  scalar::axpy_mod(dst, src, c, p);
}

void scale_mod(std::span<std::uint64_t> dst, std::uint64_t c, std::uint64_t p) {
#if defined(__x86_64__)
  if (active_isa() == Isa::Avx2) return avx2::scale_mod(dst, c, p);
#endif
  scalar::scale_mod(dst, c, p);
}

std::size_t count_nonzero(std::span<const std::uint64_t> v) {
#if defined(__x86_64__)
  if (active_isa() == Isa::Avx2) return avx2::count_nonzero(v);
#endif
  return scalar::count_nonzero(v);
}

}  // namespace chordbasis::kernels
