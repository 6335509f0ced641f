#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/SparseCholesky>

#include "sgfem/fem.hpp"

using namespace sgfem;

namespace {

// u(1/2, 1/2) for -lap u = 1 on the unit square, Dirichlet zero, from the
// double sine series.
double poisson_center_value() {
  const double pi = std::acos(-1.0);
  double s = 0.0;
  for (int m = 1; m < 400; m += 2)
    for (int n = 1; n < 400; n += 2) {
      const double sign = (((m - 1) / 2 + (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
      s += sign * 16.0 / (pi * pi * m * n * pi * pi * (m * m + n * n));
    }
  return s;
}

}  // namespace

TEST_CASE("mesh layout") {
  const auto m = build_mesh(0.1);
  CHECK(m.cells == 10);
  CHECK(m.node_count() == 121);
  int boundary = 0;
  for (char b : m.boundary) boundary += b;
  CHECK(boundary == 40);
  CHECK(m.x[m.node(3, 7)] == doctest::Approx(0.3));
  CHECK(m.y[m.node(3, 7)] == doctest::Approx(0.7));
  CHECK_THROWS_AS(build_mesh(0.3), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(0.0), std::invalid_argument);
  CHECK(build_mesh(1.0 / 3).cells == 3);
}

TEST_CASE("hand-assembled stiffness on a 2x2 mesh") {
  const auto m = build_mesh(0.5);
  const auto pat = q1_pattern(m);
  const std::vector<double> one(m.node_count(), 1.0);
  const auto K = assemble_weighted_stiffness(m, pat, one, BoundaryRows::Keep);
  // Corner node 0 sees a single element.
  CHECK(K.at(0, 0) == doctest::Approx(2.0 / 3));
  CHECK(K.at(0, 1) == doctest::Approx(-1.0 / 6));
  CHECK(K.at(0, 3) == doctest::Approx(-1.0 / 6));
  CHECK(K.at(0, 4) == doctest::Approx(-1.0 / 3));
  // Centre node sees all four.
  CHECK(K.at(4, 4) == doctest::Approx(8.0 / 3));
  CHECK(K.at(4, 1) == doctest::Approx(-1.0 / 3));
  CHECK(K.at(4, 0) == doctest::Approx(-1.0 / 3));
  CHECK(K.at(0, 8) == 0.0);
}

TEST_CASE("row sums vanish and boundary treatment") {
  const auto m = build_mesh(0.125);
  const auto pat = q1_pattern(m);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  std::vector<double> field(m.node_count());
  for (auto& v : field) v = U(rng);

  const auto K = assemble_weighted_stiffness(m, pat, field, BoundaryRows::Keep);
  std::vector<double> ones(m.node_count(), 1.0), r(m.node_count());
  K.multiply(ones, r);
  for (int n = 0; n < m.node_count(); ++n) CHECK(std::abs(r[n]) <= 1e-13);
  CHECK(K.asymmetry() <= 1e-14);

  const auto Ki = assemble_weighted_stiffness(m, pat, field, BoundaryRows::Identity);
  const auto Kz = assemble_weighted_stiffness(m, pat, field, BoundaryRows::Zero);
  for (int n = 0; n < m.node_count(); ++n) {
    if (!m.boundary[n]) continue;
    CHECK(Ki.at(n, n) == 1.0);
    CHECK(Kz.at(n, n) == 0.0);
    const int other = m.node(m.cells / 2, m.cells / 2);
    CHECK(Ki.at(n, other) == 0.0);
  }
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Ki.to_eigen());
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("assembly is linear in the field") {
  const auto m = build_mesh(0.25);
  const auto pat = q1_pattern(m);
  std::vector<double> a(m.node_count()), b(m.node_count()), c(m.node_count());
  for (int n = 0; n < m.node_count(); ++n) {
    a[n] = std::sin(3 * m.x[n]) + m.y[n];
    b[n] = std::cos(m.x[n] * m.y[n]);
    c[n] = a[n] - 2.5 * b[n];
  }
  const auto Ka = assemble_weighted_stiffness(m, pat, a, BoundaryRows::Zero);
  const auto Kb = assemble_weighted_stiffness(m, pat, b, BoundaryRows::Zero);
  const auto Kc = assemble_weighted_stiffness(m, pat, c, BoundaryRows::Zero);
  for (std::size_t e = 0; e < pat->nnz(); ++e)
    CHECK(Kc.values()[e] == doctest::Approx(Ka.values()[e] - 2.5 * Kb.values()[e]));
}

TEST_CASE("load vector and the Poisson centre value") {
  const auto m = build_mesh(0.1);
  const auto f = assemble_load(m, 1.0);
  for (int n = 0; n < m.node_count(); ++n) {
    if (m.boundary[n]) CHECK(f[n] == 0.0);
    else CHECK(f[n] == doctest::Approx(0.01));
  }
  const auto g = assemble_load(m, [](double, double) { return 1.0; });
  for (int n = 0; n < m.node_count(); ++n) CHECK(g[n] == doctest::Approx(f[n]));

  const auto pat = q1_pattern(m);
  const std::vector<double> one(m.node_count(), 1.0);
  const auto K = assemble_weighted_stiffness(m, pat, one, BoundaryRows::Identity);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(K.to_eigen());
  const Eigen::VectorXd u = llt.solve(Eigen::Map<const Eigen::VectorXd>(f.data(), m.node_count()));
  const double exact = poisson_center_value();
  CHECK(exact == doctest::Approx(0.0737).epsilon(1e-3));
  CHECK(std::abs(u(m.node(5, 5)) - exact) <= 0.02 * exact);
}
