#include "sgfem/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sgfem/simd/kernels.hpp"

namespace sgfem {

using simd::axpy;
using simd::dot;

int default_max_iter(std::size_t n) {
  return static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 5000;
}

namespace {

using Vec = std::vector<double>;

void apply_or_copy(const LinearMap& M, std::span<const double> in, std::span<double> out) {
  if (M) {
    M(in, out);
  } else {
    std::copy(in.begin(), in.end(), out.begin());
  }
}

bool probe_fails(const LinearMap& M, std::size_t n, unsigned seed) {
  if (!M) return false;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec u(n), v(n), Mu(n), Mv(n);
  for (auto& a : u) a = U(rng);
  for (auto& a : v) a = U(rng);
  M(u, Mu);
  M(v, Mv);
  const double uMv = dot(u, Mv), vMu = dot(v, Mu);
  const double scale = std::sqrt(dot(Mu, Mu) * dot(v, v)) + std::sqrt(dot(Mv, Mv) * dot(u, u));
  const bool asymmetric = std::abs(uMv - vMu) > 1e-6 * scale;
  return asymmetric || dot(u, Mu) <= 0.0 || dot(v, Mv) <= 0.0;
}

struct Setup {
  double bnorm;
  Vec r;
  bool done;
};

Setup start(const LinearMap& A, std::span<const double> b, std::span<double> x, SolveReport& rep,
            const KrylovOptions& opts) {
  const std::size_t n = b.size();
  if (x.size() != n) throw std::invalid_argument("krylov: size mismatch");
  Setup s{std::sqrt(dot(b, b)), Vec(n), false};
  A(x, s.r);
  for (std::size_t i = 0; i < n; ++i) s.r[i] = b[i] - s.r[i];
  if (s.bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    rep.final_relres = 0.0;
    if (opts.record_history) rep.relative_residuals.push_back(0.0);
    s.done = true;
    return s;
  }
  rep.final_relres = std::sqrt(dot(s.r, s.r)) / s.bnorm;
  if (opts.record_history) rep.relative_residuals.push_back(rep.final_relres);
  if (rep.final_relres <= opts.tol) {
    rep.converged = true;
    s.done = true;
  }
  return s;
}

void finish(SolveReport& rep, const KrylovOptions& opts, std::chrono::steady_clock::time_point t0) {
  if (opts.estimate_kappa && !rep.alphas.empty()) {
    try {
      rep.kappa_estimate = lanczos_condition_estimate(rep.alphas, rep.betas);
    } catch (const std::exception&) {
      rep.kappa_estimate = std::nan("");
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolveReport cg(const LinearMap& A, const LinearMap& M, std::span<const double> b, std::span<double> x,
               const KrylovOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const std::size_t n = b.size();
  if (opts.probe_preconditioner && probe_fails(M, n, opts.seed)) rep.spd_suspect = true;
  Setup s = start(A, b, x, rep, opts);
  if (s.done) {
    finish(rep, opts, t0);
    return rep;
  }
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : default_max_iter(n);
  Vec& r = s.r;
  Vec z(n), p(n), q(n);
  apply_or_copy(M, r, z);
  double rz = dot(r, z);
  if (!(rz > 0.0)) rep.spd_suspect = true;
  p = z;

  for (int it = 0; it < max_iter; ++it) {
    A(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) rep.spd_suspect = true;
    if (pq == 0.0 || !std::isfinite(pq)) break;
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    rep.alphas.push_back(alpha);
    rep.iterations = it + 1;
    rep.final_relres = std::sqrt(dot(r, r)) / s.bnorm;
    if (opts.record_history) rep.relative_residuals.push_back(rep.final_relres);
    if (rep.final_relres <= opts.tol) {
      rep.converged = true;
      break;
    }
    apply_or_copy(M, r, z);
    const double rz_new = dot(r, z);
    if (!(rz_new > 0.0)) rep.spd_suspect = true;
    if (rz_new == 0.0 || !std::isfinite(rz_new)) break;
    const double beta = rz_new / rz;
    rep.betas.push_back(beta);
    rz = rz_new;
    simd::xpay(z, beta, p);
  }
  finish(rep, opts, t0);
  return rep;
}

SolveReport fcg(const LinearMap& A, const LinearMap& M, std::span<const double> b,
                std::span<double> x, const KrylovOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const std::size_t n = b.size();
  if (opts.probe_preconditioner && probe_fails(M, n, opts.seed)) rep.spd_suspect = true;
  Setup s = start(A, b, x, rep, opts);
  if (s.done) {
    finish(rep, opts, t0);
    return rep;
  }
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : default_max_iter(n);
  const std::size_t window = opts.truncation > 0 ? static_cast<std::size_t>(opts.truncation)
                                                 : static_cast<std::size_t>(max_iter);
  struct Direction {
    Vec p, q;
    double pq;
  };
  std::deque<Direction> dirs;
  Vec& r = s.r;
  Vec z(n);

  for (int it = 0; it < max_iter; ++it) {
    apply_or_copy(M, r, z);
    if (!(dot(r, z) > 0.0)) rep.spd_suspect = true;
    Direction d{z, Vec(n), 0.0};
    for (const auto& old : dirs) axpy(-dot(z, old.q) / old.pq, old.p, d.p);
    if (!dirs.empty()) rep.betas.push_back(-dot(z, dirs.back().q) / dirs.back().pq);
    A(d.p, d.q);
    d.pq = dot(d.p, d.q);
    if (!(d.pq > 0.0)) rep.spd_suspect = true;
    if (d.pq == 0.0 || !std::isfinite(d.pq)) {
      if (!rep.betas.empty() && rep.betas.size() == rep.alphas.size()) rep.betas.pop_back();
      break;
    }
    const double alpha = dot(d.p, r) / d.pq;
    axpy(alpha, d.p, x);
    axpy(-alpha, d.q, r);
    rep.alphas.push_back(alpha);
    rep.iterations = it + 1;
    rep.final_relres = std::sqrt(dot(r, r)) / s.bnorm;
    if (opts.record_history) rep.relative_residuals.push_back(rep.final_relres);
    dirs.push_back(std::move(d));
    if (dirs.size() > window) dirs.pop_front();
    if (rep.final_relres <= opts.tol) {
      rep.converged = true;
      break;
    }
  }
  finish(rep, opts, t0);
  return rep;
}

std::pair<double, double> lanczos_extreme_eigenvalues(std::span<const double> alphas,
                                                      std::span<const double> betas) {
  const std::size_t k = alphas.size();
  if (k == 0) throw std::invalid_argument("lanczos: empty coefficient sequence");
  if (betas.size() + 1 < k) throw std::invalid_argument("lanczos: too few beta values");
  Eigen::VectorXd diag(static_cast<Eigen::Index>(k));
  Eigen::VectorXd off(static_cast<Eigen::Index>(k > 1 ? k - 1 : 1));
  off.setZero();
  for (std::size_t j = 0; j < k; ++j) {
    diag(j) = 1.0 / alphas[j];
    if (j > 0) diag(j) += betas[j - 1] / alphas[j - 1];
    if (j + 1 < k) off(j) = std::sqrt(std::abs(betas[j])) / alphas[j];
  }
  if (k == 1) return {diag(0), diag(0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off.head(k - 1), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("lanczos: tridiagonal eigensolve failed");
  return {es.eigenvalues()(0), es.eigenvalues()(k - 1)};
}

double lanczos_condition_estimate(std::span<const double> alphas, std::span<const double> betas) {
  const auto [lo, hi] = lanczos_extreme_eigenvalues(alphas, betas);
  return hi / lo;
}

void write_residual_history(std::ostream& os, const SolveReport& report) {
  os << "iter,relres\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.relative_residuals.size(); ++i)
    os << i << ',' << report.relative_residuals[i] << '\n';
}

}  // namespace sgfem
