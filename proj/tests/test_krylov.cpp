#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sgfem/krylov.hpp"

using namespace sgfem;

namespace {

LinearMap diagonal(std::vector<double> d) {
  return [d = std::move(d)](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < d.size(); ++i) y[i] = d[i] * x[i];
  };
}

// Symmetric positive definite tridiagonal (1D Laplacian plus shift).
LinearMap laplacian(std::size_t n, double shift) {
  return [n, shift](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = (2.0 + shift) * x[i];
      if (i > 0) v -= x[i - 1];
      if (i + 1 < n) v -= x[i + 1];
      y[i] = v;
    }
  };
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

TEST_CASE("identity system converges in one step") {
  const auto b = ones(50);
  std::vector<double> x(50, 0.0);
  const auto rep = cg(diagonal(ones(50)), {}, b, x);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK(rep.relative_residuals.size() == 2);
  CHECK(rep.relative_residuals.front() == doctest::Approx(1.0));
  CHECK(rep.kappa_estimate == doctest::Approx(1.0));
  for (double v : x) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("condition estimates from the Lanczos tridiagonal") {
  {
    const std::vector<double> b{1.0, 1.0};
    std::vector<double> x(2, 0.0);
    const auto rep = cg(diagonal({1.0, 100.0}), {}, b, x);
    CHECK(rep.iterations == 2);
    CHECK(rep.kappa_estimate == doctest::Approx(100.0).epsilon(1e-8));
  }
  {
    std::vector<double> d(10);
    for (int i = 0; i < 10; ++i) d[i] = i + 1.0;
    const auto b = ones(10);
    std::vector<double> x(10, 0.0);
    KrylovOptions o;
    o.tol = 1e-14;
    const auto rep = cg(diagonal(d), {}, b, x, o);
    CHECK(rep.kappa_estimate == doctest::Approx(10.0).epsilon(1e-8));
    const auto [lo, hi] = lanczos_extreme_eigenvalues(rep.alphas, rep.betas);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(hi == doctest::Approx(10.0).epsilon(1e-8));

    // Ritz values interlace, so the estimate grows with the step count.
    double prev = 0.0;
    for (std::size_t k = 1; k <= rep.alphas.size(); ++k) {
      const double est = lanczos_condition_estimate(std::span(rep.alphas).first(k), std::span(rep.betas).first(k - 1));
      CHECK(est >= prev * (1 - 1e-12));
      prev = est;
    }
  }
}

TEST_CASE("recursive residual tracks the true residual") {
  const std::size_t n = 400;
  const auto A = laplacian(n, 0.01);
  const auto b = ones(n);
  std::vector<double> x(n, 0.0), Ax(n);
  const auto rep = cg(A, {}, b, x);
  CHECK(rep.converged);
  CHECK(rep.final_relres <= 1e-8);
  A(x, Ax);
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) r2 += (b[i] - Ax[i]) * (b[i] - Ax[i]);
  CHECK(std::sqrt(r2 / n) <= 1e-7);
  CHECK(default_max_iter(n) == static_cast<int>(10 * std::sqrt(double(n)) + 5000));

  std::ostringstream os;
  write_residual_history(os, rep);
  CHECK(os.str().rfind("iter,relres\n0,", 0) == 0);
}

TEST_CASE("flexible CG matches CG for a fixed preconditioner") {
  const std::size_t n = 200;
  const auto A = laplacian(n, 0.05);
  std::vector<double> inv(n, 1.0 / 2.05);
  inv[0] = 0.9;  // non-uniform so the preconditioner does something
  const auto M = diagonal(inv);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> b(n);
  for (auto& v : b) v = U(rng);
  std::vector<double> x1(n, 0.0), x2(n, 0.0);
  const auto r1 = cg(A, M, b, x1);
  const auto r2 = fcg(A, M, b, x2);
  KrylovOptions t;
  t.truncation = 1;
  std::vector<double> x3(n, 0.0);
  const auto r3 = fcg(A, M, b, x3, t);
  CHECK(std::abs(r1.iterations - r2.iterations) <= 1);
  CHECK(std::abs(r1.iterations - r3.iterations) <= 1);
  CHECK(r2.kappa_estimate == doctest::Approx(r1.kappa_estimate).epsilon(1e-3));
  for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == doctest::Approx(x2[i]).epsilon(1e-6));
}

TEST_CASE("non-symmetric preconditioner is flagged") {
  const std::size_t n = 30;
  const auto A = laplacian(n, 0.5);
  const LinearMap M = [n](std::span<const double> r, std::span<double> z) {
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] + (i + 1 < n ? 0.9 * r[i + 1] : 0.0);
  };
  const auto b = ones(n);
  std::vector<double> x(n, 0.0);
  KrylovOptions o;
  o.probe_preconditioner = true;
  const auto rep = cg(A, M, b, x, o);
  CHECK(rep.spd_suspect);

  std::vector<double> y(n, 0.0);
  const auto clean = cg(A, {}, b, y, o);
  CHECK_FALSE(clean.spd_suspect);
}
