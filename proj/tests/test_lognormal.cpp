#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sgfem/gpc_basis.hpp"
#include "sgfem/lognormal.hpp"
#include "sgfem/preconditioners.hpp"

using namespace sgfem;

TEST_CASE("Gaussian parameters reproduce the lognormal moments") {
  const auto g = gaussian_parameters(1.0, 1.0);
  CHECK(g.sigma * g.sigma == doctest::Approx(std::log(2.0)));
  CHECK(g.mu == doctest::Approx(-0.5 * std::log(2.0)));
  const auto h = gaussian_parameters(2.5, 0.3);
  CHECK(std::exp(h.mu + 0.5 * h.sigma * h.sigma) == doctest::Approx(2.5));
  CHECK(std::sqrt(std::exp(h.sigma * h.sigma) - 1.0) == doctest::Approx(0.3));
  const auto z = gaussian_parameters(3.0, 0.0);
  CHECK(z.sigma == 0.0);
  CHECK(z.mu == doctest::Approx(std::log(3.0)));
}

TEST_CASE("zero amplitude leaves only the mean coefficient") {
  const auto basis = build_multi_index_set(3, 4);
  const std::vector<double> a(3, 0.0);
  const auto k = lognormal_coefficients_at(0.7, a, basis);
  CHECK(k[0] == doctest::Approx(std::exp(0.7)));
  for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] == 0.0);
}

TEST_CASE("closed-form chaos coefficients against Gauss-Hermite projection") {
  const auto basis = build_multi_index_set(1, 10);
  const auto [x, w] = gauss_rule(Family::Hermite, 60);
  for (double amp : {0.3, 0.8, -1.1}) {
    const double mu = -0.2;
    const auto k = lognormal_coefficients_at(mu, std::vector<double>{amp}, basis);
    for (std::size_t n = 0; n < basis.size(); ++n) {
      double proj = 0.0;
      for (std::size_t q = 0; q < x.size(); ++q)
        proj += w[q] * std::exp(mu + amp * x[q]) * eval_orthonormal(Family::Hermite, basis[n][0], x[q]);
      CAPTURE(amp);
      CAPTURE(n);
      CHECK(std::abs(k[n] - proj) <= 1e-10);
    }
  }
}

TEST_CASE("truncated chaos recovers mean and variance") {
  const std::vector<double> a{0.5, 0.4, 0.3, 0.2};
  double a2 = 0.0;
  for (double v : a) a2 += v * v;
  const double mu = 0.1;
  const auto k = lognormal_coefficients_at(mu, a, build_multi_index_set(4, 8));
  double var = 0.0;
  for (std::size_t i = 1; i < k.size(); ++i) var += k[i] * k[i];
  const double mean = std::exp(mu + 0.5 * a2);
  CHECK(k[0] == doctest::Approx(mean));
  CHECK(std::abs(var - mean * mean * (std::exp(a2) - 1.0)) <= 0.01 * mean * mean * (std::exp(a2) - 1.0));
}

TEST_CASE("lognormal Galerkin operator structure") {
  LognormalSpec spec;
  spec.N = 2;
  spec.P = 2;
  spec.cov = 0.5;
  const auto mesh = build_mesh(0.25);
  const auto model = build_lognormal_model(spec, mesh);
  CHECK(model.coeff_basis.max_degree() == 4);
  CHECK(model.fields.size() == basis_size(2, 4));
  CHECK(model.gaussian.sigma * model.gaussian.sigma == doctest::Approx(std::log(1.25)));

  const auto op = build_lognormal_operator(spec, mesh, model);
  const std::size_t M = op.block_count();
  CHECK(M == 6);
  CHECK(op.tensor().nonzero_blocks() == M * M);
  bool coupled_diagonal = false;
  for (std::size_t k = 1; k < M; ++k)
    for (std::size_t i = 1; i < op.tensor().coeff_size(); ++i)
      if (op.tensor().value(i, k, k) != 0.0) coupled_diagonal = true;
  CHECK(coupled_diagonal);
  CHECK_FALSE(op.level_block_diagonal(2));
  CHECK_FALSE(op.diagonal_is_mean_multiple(1));

  const Eigen::MatrixXd A = op.dense();
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff());
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("hierarchical preconditioner with direct and iterative level solves") {
  LognormalSpec spec;
  spec.N = 2;
  spec.P = 2;
  spec.cov = 1.0;
  const auto mesh = build_mesh(0.125);
  const auto op = build_lognormal_operator(spec, mesh);
  auto b = assemble_load(mesh, 1.0);
  b.resize(op.dim(), 0.0);
  const LinearMap A = [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); };

  PreconditionerSetup direct, iterative;
  iterative.level_policy = LevelSolvePolicy::Iterative;
  iterative.inner.tol = 1e-12;
  const HierarchicalSchurPreconditioner Md(op, direct), Mi(op, iterative);
  CHECK(Md.level_solver(2).direct());
  CHECK_FALSE(Mi.level_solver(2).direct());
  std::vector<double> x1(op.dim(), 0.0), x2(op.dim(), 0.0);
  const auto r1 = cg(A, Md.as_map(), b, x1);
  const auto r2 = fcg(A, Mi.as_map(), b, x2);
  CHECK(r1.converged);
  CHECK(r2.converged);
  CHECK(std::abs(r1.iterations - r2.iterations) <= 1);
}
