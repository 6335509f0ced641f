#include "sgfem/covariance_kl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>

namespace sgfem {

double Eigen1D::eval(std::size_t m, double x) const {
  const auto& v = modes.at(m);
  const std::size_t n = grid.size();
  if (n == 1) return v[0];
  const double h = 1.0 / static_cast<double>(n - 1);
  double t = std::clamp(x, 0.0, 1.0) / h;
  std::size_t q = std::min(static_cast<std::size_t>(t), n - 2);
  t -= static_cast<double>(q);
  return (1.0 - t) * v[q] + t * v[q + 1];
}

namespace {

struct Decomposition {
  std::vector<double> grid, weights, lambdas;  // descending
  Eigen::MatrixXd vectors;                     // columns match lambdas, already unweighted
};

std::shared_ptr<const Decomposition> decompose(double L, int n) {
  auto d = std::make_shared<Decomposition>();
  const double h = 1.0 / (n - 1);
  d->grid.resize(n);
  d->weights.assign(n, h);
  d->weights.front() = d->weights.back() = 0.5 * h;
  for (int q = 0; q < n; ++q) d->grid[q] = q * h;

  Eigen::VectorXd sw(n);
  for (int q = 0; q < n; ++q) sw(q) = std::sqrt(d->weights[q]);
  Eigen::MatrixXd B(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      B(p, q) = sw(p) * std::exp(-std::abs(d->grid[p] - d->grid[q]) / L) * sw(q);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_1d_exponential: eigensolve failed");
  d->lambdas.resize(n);
  d->vectors.resize(n, n);
  for (int m = 0; m < n; ++m) {
    const int src = n - 1 - m;
    d->lambdas[m] = es.eigenvalues()(src);
    Eigen::VectorXd v = es.eigenvectors().col(src).cwiseQuotient(sw);
    if (v(0) < 0.0) v = -v;
    d->vectors.col(m) = v;
  }
  return d;
}

std::shared_ptr<const Decomposition> cached(double L, int n) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const Decomposition>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{L, n}];
  if (!slot) slot = decompose(L, n);
  return slot;
}

}  // namespace

Eigen1D eig_1d_exponential(double corr_length, int n_quad, int n_modes) {
  if (!(corr_length > 0.0)) throw std::invalid_argument("eig_1d_exponential: L must be positive");
  if (n_quad < 2) throw std::invalid_argument("eig_1d_exponential: need n_quad >= 2");
  if (n_modes < 1 || n_modes > n_quad)
    throw std::invalid_argument("eig_1d_exponential: n_modes must be in 1..n_quad");
  auto d = cached(corr_length, n_quad);
  Eigen1D out;
  out.grid = d->grid;
  out.weights = d->weights;
  out.all_lambdas = d->lambdas;
  out.lambdas.assign(d->lambdas.begin(), d->lambdas.begin() + n_modes);
  out.modes.resize(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    const auto col = d->vectors.col(m);
    out.modes[m].assign(col.data(), col.data() + n_quad);
  }
  return out;
}

std::vector<Mode2D> eig_2d_separable(const CovarianceSpec& spec, const Eigen1D& eig1d,
                                     int n_modes) {
  const int n1 = static_cast<int>(eig1d.lambdas.size());
  if (n_modes < 1) throw std::invalid_argument("eig_2d_separable: need n_modes >= 1");
  const bool complete = static_cast<std::size_t>(n1) == eig1d.all_lambdas.size();
  if ((n1 < n_modes && !complete) || n1 * n1 < n_modes)
    throw std::invalid_argument("eig_2d_separable: not enough 1D modes");
  const double s2 = spec.sigma * spec.sigma;
  std::vector<Mode2D> all;
  all.reserve(static_cast<std::size_t>(n1 * n1));
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) all.push_back({s2 * eig1d.lambdas[a] * eig1d.lambdas[b], a, b});
  // Products of the same pair in swapped order are computed identically, so
  // exact ties are real ties and fall back to (a, b).
  std::stable_sort(all.begin(), all.end(), [](const Mode2D& x, const Mode2D& y) {
    if (x.lambda != y.lambda) return x.lambda > y.lambda;
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  all.resize(static_cast<std::size_t>(n_modes));
  return all;
}

KLExpansion build_kl_expansion(const CovarianceSpec& spec, int N, double mean,
                               std::span<const double> node_x, std::span<const double> node_y,
                               int n_quad) {
  if (N < 1) throw std::invalid_argument("build_kl_expansion: need N >= 1");
  if (node_x.size() != node_y.size())
    throw std::invalid_argument("build_kl_expansion: coordinate length mismatch");
  // The N largest products only involve 1D indices below N.
  const Eigen1D e1 = eig_1d_exponential(spec.corr_length, n_quad, std::min(N, n_quad));
  KLExpansion kl;
  kl.N = N;
  kl.mean = mean;
  kl.modes = eig_2d_separable(spec, e1, N);
  kl.fields.resize(N);
  for (int i = 0; i < N; ++i) {
    const Mode2D& m = kl.modes[i];
    kl.eigenvalues.push_back(m.lambda);
    const double amp = std::sqrt(m.lambda);
    auto& f = kl.fields[i];
    f.resize(node_x.size());
    for (std::size_t n = 0; n < node_x.size(); ++n)
      f[n] = amp * e1.eval(m.a, node_x[n]) * e1.eval(m.b, node_y[n]);
  }
  return kl;
}

}  // namespace sgfem
