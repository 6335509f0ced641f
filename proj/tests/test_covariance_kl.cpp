#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgfem/covariance_kl.hpp"
#include "sgfem/fem.hpp"

using namespace sgfem;

namespace {

// Dense Nystrom oracle written out independently of the library.
std::vector<double> nystrom_eigenvalues(double L, int n) {
  const double h = 1.0 / (n - 1);
  Eigen::VectorXd sw(n);
  for (int i = 0; i < n; ++i) sw(i) = std::sqrt((i == 0 || i == n - 1) ? 0.5 * h : h);
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = sw(i) * sw(j) * std::exp(-std::abs(i - j) * h / L);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::reverse(out.begin(), out.end());
  return out;
}

// Exact eigenvalues of exp(-|x - y| / L) on an interval of half-length a
// from the transcendental equations; roots bracketed per branch.
std::vector<double> analytic_eigenvalues(double L, int count) {
  const double c = 1.0 / L, a = 0.5;
  auto bisect = [](auto f, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((f(lo) < 0) == (f(mid) < 0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::vector<double> lambdas;
  const double pi = std::acos(-1.0);
  for (int k = 0; static_cast<int>(lambdas.size()) < count; ++k) {
    const double lo = k * pi / a + 1e-12, mid = (k + 0.5) * pi / a, hi = (k + 1) * pi / a - 1e-12;
    // Even: c - w tan(w a) = 0 on (k pi / a, (k + 1/2) pi / a).
    const double we = bisect([&](double w) { return c - w * std::tan(w * a); }, lo, mid - 1e-12);
    // Odd: w + c tan(w a) = 0 on ((k + 1/2) pi / a, (k + 1) pi / a).
    const double wo = bisect([&](double w) { return w + c * std::tan(w * a); }, mid + 1e-12, hi);
    lambdas.push_back(2 * c / (we * we + c * c));
    lambdas.push_back(2 * c / (wo * wo + c * c));
  }
  lambdas.resize(count);
  return lambdas;
}

}  // namespace

TEST_CASE("1D spectrum: trace, ordering, normalization and sign") {
  const auto e = eig_1d_exponential(0.5, 1000, 20);
  CHECK(std::accumulate(e.all_lambdas.begin(), e.all_lambdas.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t m = 1; m < e.lambdas.size(); ++m) CHECK(e.lambdas[m] < e.lambdas[m - 1]);
  for (std::size_t m = 0; m < e.modes.size(); ++m) {
    double norm = 0.0;
    for (std::size_t q = 0; q < e.grid.size(); ++q) norm += e.weights[q] * e.modes[m][q] * e.modes[m][q];
    CHECK(std::abs(norm - 1.0) <= 1e-8);
    CHECK(e.modes[m][0] >= 0.0);
  }
  CHECK_THROWS_AS(eig_1d_exponential(0.5, 10, 11), std::invalid_argument);
  CHECK_THROWS_AS(eig_1d_exponential(-1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("leading eigenvalue against the dense Nystrom oracle at 2000 points") {
  const auto oracle = nystrom_eigenvalues(0.5, 2000);
  const auto e = eig_1d_exponential(0.5, 1000, 15);
  CHECK(std::abs(e.lambdas[0] - oracle[0]) <= 1e-6 * oracle[0]);
  const auto exact = analytic_eigenvalues(0.5, 10);
  for (int m = 0; m < 10; ++m) CHECK(std::abs(e.lambdas[m] - exact[m]) <= 1e-4 * exact[m]);
}

TEST_CASE("2D eigenvalues are products of 1D eigenvalues with a stable refinement") {
  const CovarianceSpec spec{1.0, 0.5};
  const auto e1 = eig_1d_exponential(0.5, 1000, 15);
  const auto modes = eig_2d_separable(spec, e1, 15);
  CHECK(modes[0].lambda == doctest::Approx(e1.lambdas[0] * e1.lambdas[0]));
  CHECK(modes[0].a == 0);
  CHECK(modes[0].b == 0);
  for (std::size_t i = 1; i < modes.size(); ++i) CHECK(modes[i].lambda <= modes[i - 1].lambda);
  // The (0,1)/(1,0) pair is degenerate and ordered by (a, b).
  CHECK(modes[1].lambda == modes[2].lambda);
  CHECK(modes[1].a == 0);
  CHECK(modes[2].a == 1);
  for (const auto& m : modes) CHECK(m.lambda == doctest::Approx(e1.lambdas[m.a] * e1.lambdas[m.b]));

  const auto fine = eig_2d_separable(spec, eig_1d_exponential(0.5, 2000, 15), 15);
  for (std::size_t i = 0; i < 15; ++i) CHECK(std::abs(fine[i].lambda - modes[i].lambda) < 1e-4 * modes[i].lambda);

  const auto scaled = eig_2d_separable({0.5, 0.5}, e1, 15);
  for (std::size_t i = 0; i < 15; ++i) CHECK(scaled[i].lambda == doctest::Approx(0.25 * modes[i].lambda));
}

TEST_CASE("expansion fields on the mesh") {
  const auto mesh = build_mesh(0.1);
  const auto kl1 = build_kl_expansion({0.5, 0.5}, 1, 1.0, mesh.x, mesh.y);
  CHECK(kl1.fields.size() == 1);
  CHECK(kl1.mean == 1.0);
  CHECK(kl1.fields[0].size() == mesh.x.size());

  // Realizations stay positive on every vertex of the xi cube [-1, 1]^N.
  // Beyond six modes sum_i |k_i| exceeds k0 = 1 at some nodes.
  for (int N = 1; N <= 6; ++N) {
    const auto kl = build_kl_expansion({0.5, 0.5}, N, 1.0, mesh.x, mesh.y);
    double worst = 1e300;
    for (unsigned v = 0; v < (1u << N); ++v)
      for (std::size_t n = 0; n < mesh.x.size(); ++n) {
        double k = kl.mean;
        for (int i = 0; i < N; ++i) k += ((v >> i) & 1u ? 1.0 : -1.0) * kl.fields[i][n];
        worst = std::min(worst, k);
      }
    CAPTURE(N);
    CHECK(worst > 0.0);
  }
}

TEST_CASE("truncated expansion reconstructs the covariance") {
  const auto mesh = build_mesh(0.1);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, mesh.node_count() - 1);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 10; ++i) pairs.emplace_back(pick(rng), pick(rng));
  double prev = 1e300;
  for (int N : {1, 4, 16, 64}) {
    const auto kl = build_kl_expansion({1.0, 0.5}, N, 0.0, mesh.x, mesh.y);
    double err = 0.0;
    for (auto [p, q] : pairs) {
      double s = 0.0;
      for (int i = 0; i < N; ++i) s += kl.fields[i][p] * kl.fields[i][q];
      const double exact = std::exp(-(std::abs(mesh.x[p] - mesh.x[q]) + std::abs(mesh.y[p] - mesh.y[q])) / 0.5);
      err += std::abs(s - exact);
    }
    CAPTURE(N);
    CHECK(err < prev);
    prev = err;
  }
}
