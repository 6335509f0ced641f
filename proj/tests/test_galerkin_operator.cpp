#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgfem/galerkin_operator.hpp"
#include "sgfem/problem.hpp"

using namespace sgfem;

namespace {

ProblemConfig small(int N, int P) {
  ProblemConfig c;
  c.N = N;
  c.P = P;
  c.h = 0.25;
  return c;
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

// sum_i G_i (x) K_i with (G_i)_{kj} = c_ijk, built from the raw pieces.
Eigen::MatrixXd kronecker_oracle(const GalerkinOperator& op) {
  const std::size_t n = op.spatial_dim(), M = op.block_count();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * M, n * M);
  for (std::size_t i = 0; i < op.stiffness().size(); ++i) {
    const Eigen::MatrixXd Ki = op.stiffness()[i].to_dense();
    for (std::size_t k = 0; k < M; ++k)
      for (std::size_t j = 0; j < M; ++j) {
        const double c = op.tensor().value(i, j, k);
        if (c != 0.0) A.block(k * n, j * n, n, n) += c * Ki;
      }
  }
  return A;
}

}  // namespace

TEST_CASE("matrix-free product equals the dense Kronecker sum") {
  for (auto [N, P] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
    const auto pb = build_problem(small(N, P));
    const auto& op = *pb.op;
    const Eigen::MatrixXd A = kronecker_oracle(op);
    CHECK((A - op.dense()).cwiseAbs().maxCoeff() <= 1e-12 * A.cwiseAbs().maxCoeff());
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-14);

    const auto x = random_vector(op.dim(), 5);
    std::vector<double> y(op.dim());
    op.apply(x, y);
    const Eigen::VectorXd ref = A * Eigen::Map<const Eigen::VectorXd>(x.data(), op.dim());
    for (std::size_t r = 0; r < op.dim(); ++r) CHECK(std::abs(y[r] - ref(r)) <= 1e-12 * (1 + std::abs(ref(r))));
  }
}

TEST_CASE("order zero reduces to the mean stiffness") {
  const auto pb = build_problem(small(3, 0));
  const auto& op = *pb.op;
  CHECK(op.block_count() == 1);
  CHECK(op.levels() == 0);
  const auto x = random_vector(op.dim(), 2);
  std::vector<double> y(op.dim()), z(op.dim());
  op.apply(x, y);
  op.stiffness()[0].multiply(x, z);
  for (std::size_t r = 0; r < op.dim(); ++r) CHECK(y[r] == doctest::Approx(z[r]));
}

TEST_CASE("hierarchy parts") {
  const auto pb = build_problem(small(2, 3));
  const auto& op = *pb.op;
  const std::size_t n = op.spatial_dim();
  REQUIRE(op.levels() == 3);
  CHECK(op.level_dims() == std::vector<std::size_t>{1, 3, 6, 10});
  CHECK(op.tail(0).begin == 0);
  CHECK(op.tail(0).end == 1);
  CHECK(op.head(2).end == 3);
  CHECK(op.tail(2).begin == 3);
  CHECK(op.tail(2).end == 6);

  for (int l = 1; l <= 3; ++l) {
    CHECK(op.level_block_diagonal(l));
    const auto t = op.tail(l);
    for (std::size_t k = t.begin; k < t.end; ++k) {
      CHECK(op.diagonal_is_mean_multiple(k));
      const auto blk = op.block(k, k);
      const auto K0 = op.stiffness()[0].values();
      for (std::size_t e = 0; e < K0.size(); ++e) CHECK(blk[e] == doctest::Approx(op.mean_scale(k) * K0[e]));
    }

    // <B y, x> = <y, C x>
    const auto x = random_vector(op.head(l).size() * n, 10 + l), yv = random_vector(t.size() * n, 20 + l);
    std::vector<double> By(x.size()), Cx(yv.size());
    const std::size_t nb = op.apply_part(l, Part::B, yv, By);
    const std::size_t nc = op.apply_part(l, Part::C, x, Cx);
    CHECK(nb == nc);
    CHECK(nb == op.count_blocks(op.head(l), t));
    double lhs = 0, rhs = 0;
    for (std::size_t r = 0; r < x.size(); ++r) lhs += By[r] * x[r];
    for (std::size_t r = 0; r < yv.size(); ++r) rhs += yv[r] * Cx[r];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  // The leading block of level P-1 is the operator built with order P-1.
  const auto lower = build_problem(small(2, 2));
  const Eigen::MatrixXd A2 = Eigen::MatrixXd(op.assemble(op.leading(2), op.leading(2)));
  CHECK((A2 - lower.op->dense()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("apply_range accumulates and counts blocks") {
  const auto pb = build_problem(small(2, 2));
  const auto& op = *pb.op;
  const std::size_t n = op.spatial_dim();
  const BlockRange all{0, op.block_count()};
  const auto x = random_vector(op.dim(), 9);
  std::vector<double> y(op.dim(), 1.0), ref(op.dim());
  op.apply(x, ref);
  const std::size_t count = op.apply_range(all, all, x, y, 2.0, true);
  CHECK(count == op.tensor().nonzero_blocks());
  for (std::size_t r = 0; r < y.size(); ++r) CHECK(y[r] == doctest::Approx(1.0 + 2.0 * ref[r]));
  CHECK(op.count_blocks(all, all) == op.tensor().nonzero_blocks());
  CHECK(op.dim() == 6 * n);
  CHECK_THROWS(op.dense(10));
}
