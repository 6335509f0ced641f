#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sgfem/fem.hpp"
#include "sgfem/simd/kernels.hpp"

using namespace sgfem;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

const simd::KernelTable* vector_table() {
  return simd::cpu_supports(simd::Isa::Avx2) ? simd::avx2_kernels() : nullptr;
}

}  // namespace

TEST_CASE("scalar table is always available and selectable") {
  CHECK(simd::cpu_supports(simd::Isa::Scalar));
  const auto& before = simd::active();
  simd::select(simd::Isa::Scalar);
  CHECK(simd::active().isa == simd::Isa::Scalar);
  simd::select(before.isa);
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto* vec = vector_table();
  if (!vec) {
    MESSAGE("AVX2 not available on this machine; equivalence test skipped");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 1000u, 1003u}) {
    CAPTURE(n);
    const auto x = random_vector(n, 1 + n), y = random_vector(n, 2 + n);
    const double d_ref = ref.dot(x.data(), y.data(), n);
    const double d_vec = vec->dot(x.data(), y.data(), n);
    CHECK(std::abs(d_ref - d_vec) <= 1e-13 * (1.0 + std::abs(d_ref)) * std::sqrt(double(n) + 1));

    auto y1 = y, y2 = y;
    ref.axpy(0.37, x.data(), y1.data(), n);
    vec->axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

    y1 = y, y2 = y;
    ref.xpay(x.data(), -1.25, y1.data(), n);
    vec->xpay(x.data(), -1.25, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
  }
}

TEST_CASE("vector CSR product matches the scalar reference on the Q1 stencil") {
  const auto* vec = vector_table();
  if (!vec) {
    MESSAGE("AVX2 not available on this machine; equivalence test skipped");
    return;
  }
  for (double h : {1.0, 0.5, 0.1, 1.0 / 7}) {
    const auto mesh = build_mesh(h);
    const auto pat = q1_pattern(mesh);
    const auto vals = random_vector(pat->nnz(), 11);
    const auto x = random_vector(static_cast<std::size_t>(pat->rows), 12);
    auto y1 = random_vector(static_cast<std::size_t>(pat->rows), 13), y2 = y1;
    simd::scalar_kernels().csr_gemv(pat->view(), vals.data(), -0.5, x.data(), y1.data());
    vec->csr_gemv(pat->view(), vals.data(), -0.5, x.data(), y2.data());
    for (std::size_t i = 0; i < y1.size(); ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1 + std::abs(y1[i])));
  }
}

TEST_CASE("wrappers dispatch through the active table") {
  const auto x = random_vector(21, 3), y = random_vector(21, 4);
  double ref = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ref += x[i] * y[i];
  CHECK(simd::dot(x, y) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(simd::norm2_squared(x) == doctest::Approx(simd::dot(x, x)));
}
