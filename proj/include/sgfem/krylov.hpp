#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace sgfem {

/// out = Op(in). The output span is fully overwritten.
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

/// Block-level operation counts (one spatial-sized matvec or solve each).
struct WorkCount {
  std::size_t n_b = 0;   // nonzero blocks of the global matrix
  std::size_t n_db = 0;  // diagonal blocks
  std::size_t n_m = 0;   // block matvecs per preconditioner application
  std::size_t n_ds = 0;  // block solves per preconditioner application

  bool operator==(const WorkCount&) const = default;
};

struct KrylovOptions {
  double tol = 1e-8;
  /// 0 selects default_max_iter(n).
  int max_iter = 0;
  bool record_history = true;
  bool estimate_kappa = true;
  /// Flexible CG only: directions kept for orthogonalization, 0 = all.
  int truncation = 0;
  /// Probe the preconditioner with two random vectors for symmetry and
  /// positivity before iterating; failures set spd_suspect.
  bool probe_preconditioner = false;
  unsigned seed = 12345;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  bool spd_suspect = false;
  double kappa_estimate = 1.0;
  double final_relres = 0.0;  // recursive residual
  std::vector<double> relative_residuals;  // entry 0 is the initial residual
  std::vector<double> alphas;
  std::vector<double> betas;
  WorkCount work;
  double wall_time = 0.0;
};

/// 10 sqrt(n) + 5000.
int default_max_iter(std::size_t n);

/// Preconditioned CG. x holds the initial guess on entry. An empty
/// preconditioner means the identity. Stops when ||r|| / ||b|| <= tol on the
/// recursively updated, unpreconditioned residual.
SolveReport cg(const LinearMap& A, const LinearMap& M, std::span<const double> b, std::span<double> x,
               const KrylovOptions& opts = {});

/// Flexible CG with truncated explicit orthogonalization of the search
/// directions; tolerates a preconditioner that changes between iterations.
SolveReport fcg(const LinearMap& A, const LinearMap& M, std::span<const double> b,
                std::span<double> x, const KrylovOptions& opts = {});

/// lambda_max / lambda_min of the Lanczos tridiagonal built from the CG
/// step lengths (k values) and direction coefficients (k - 1 values).
double lanczos_condition_estimate(std::span<const double> alphas, std::span<const double> betas);

/// Extreme eigenvalues of the same tridiagonal.
std::pair<double, double> lanczos_extreme_eigenvalues(std::span<const double> alphas,
                                                      std::span<const double> betas);

/// CSV `iter,relres`.
void write_residual_history(std::ostream& os, const SolveReport& report);

}  // namespace sgfem
