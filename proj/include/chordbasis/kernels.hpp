#pragma once

// Dense arithmetic modulo a prime p < 2^62 on rows of 64-bit residues.
//
// Each kernel has a portable scalar version and, on x86-64, an AVX2 version
// chosen at runtime.  Both produce identical outputs for every input; the
// AVX2 path multiplies by a fixed factor using Shoup's precomputed quotient.

#include <cstdint>
#include <span>
#include <string>

namespace chordbasis::kernels {

enum class Isa { Scalar, Avx2 };

std::string to_string(Isa isa);

/// Best instruction set supported by the running CPU.
Isa detected_isa();
/// Instruction set currently used by the dispatching entry points.
Isa active_isa();
/// Overrides the dispatch choice; requesting an unsupported ISA falls back
/// to Scalar.  Returns the ISA actually selected.
Isa select_isa(Isa isa);

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

/// floor(c * 2^64 / p), for c < p.
std::uint64_t shoup_factor(std::uint64_t c, std::uint64_t p);

// All residues are in [0, p); dst and src have equal length.

/// dst[i] = (dst[i] - c * src[i]) mod p
void axpy_mod(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t c, std::uint64_t p);
/// dst[i] = c * dst[i] mod p
void scale_mod(std::span<std::uint64_t> dst, std::uint64_t c, std::uint64_t p);
std::size_t count_nonzero(std::span<const std::uint64_t> v);

namespace scalar {
void axpy_mod(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t c, std::uint64_t p);
void scale_mod(std::span<std::uint64_t> dst, std::uint64_t c, std::uint64_t p);
std::size_t count_nonzero(std::span<const std::uint64_t> v);
}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
void axpy_mod(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t c, std::uint64_t p);
void scale_mod(std::span<std::uint64_t> dst, std::uint64_t c, std::uint64_t p);
std::size_t count_nonzero(std::span<const std::uint64_t> v);
}  // namespace avx2
#endif

}  // namespace chordbasis::kernels
