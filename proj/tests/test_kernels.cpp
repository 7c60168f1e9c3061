#include <doctest.h>

#include <random>
#include <vector>

#include "chordbasis/exactla.hpp"
#include "chordbasis/kernels.hpp"

using namespace chordbasis;
namespace k = chordbasis::kernels;

TEST_CASE("scalar and vector kernels agree") {
  if (k::detected_isa() != k::Isa::Avx2) {
    MESSAGE("AVX2 not available; comparing scalar with itself");
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint64_t p = random_prime_62(rng);
    if (trial % 3 == 0) p = 1000003;
    const std::size_t len = rng() % 70;
    std::vector<std::uint64_t> a(len), b(len);
    for (auto& x : a) x = rng() % p;
    for (auto& x : b) x = (rng() % 4 == 0) ? 0 : rng() % p;
    const std::uint64_t c = rng() % p;
    auto s = a;
    auto v = a;
    k::scalar::axpy_mod(s, b, c, p);
    k::select_isa(k::Isa::Avx2);
    k::axpy_mod(v, b, c, p);
    CHECK(s == v);
    k::scalar::scale_mod(s, c, p);
    k::scale_mod(v, c, p);
    CHECK(s == v);
    CHECK(k::scalar::count_nonzero(b) == k::count_nonzero(b));
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t want = (a[i] + p - k::mul_mod(c, b[i], p)) % p;
      CHECK(k::mul_mod(want, c, p) == s[i]);
    }
  }
  k::select_isa(k::detected_isa());
}

TEST_CASE("dispatch falls back to scalar on request") {
  CHECK(k::select_isa(k::Isa::Scalar) == k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::select_isa(k::detected_isa());
  CHECK(k::active_isa() == k::detected_isa());
}

TEST_CASE("modular rank does not depend on the kernel") {
  const DiagramSet ds = enumerate_connected(3, 3);
  const ExactMatrix mat = assemble(generate_relations(ds), ds.size());
  const std::uint64_t p = 2305843009213693951ull;
  k::select_isa(k::Isa::Scalar);
  const std::size_t scalar = modular_rank(mat, p);
  k::select_isa(k::detected_isa());
  CHECK(modular_rank(mat, p) == scalar);
  CHECK(scalar == ds.size() - 16);
}
