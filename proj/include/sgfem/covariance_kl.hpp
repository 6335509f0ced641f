#pragma once

// Karhunen-Loeve expansion of a field with separable exponential covariance
// C(x, y) = sigma^2 exp(-|x1 - y1| / L) exp(-|x2 - y2| / L) on the unit square.

#include <cstddef>
#include <span>
#include <vector>

namespace sgfem {

struct CovarianceSpec {
  double sigma = 1.0;
  double corr_length = 0.5;
};

/// Leading eigenpairs of exp(-|x - y| / L) on [0, 1].
struct Eigen1D {
  std::vector<double> grid;
  std::vector<double> weights;                // trapezoid weights on grid
  std::vector<double> lambdas;                // non-increasing
  std::vector<std::vector<double>> modes;     // modes[m][q], L2-normalized, v(0) >= 0
  std::vector<double> all_lambdas;            // full discrete spectrum, non-increasing

  /// Piecewise-linear interpolation of mode m at x in [0, 1].
  double eval(std::size_t m, double x) const;
};

/// Nystrom discretization with the trapezoid rule on n_quad uniform points,
/// symmetrized with the square-root weights. Results are cached per
/// (L, n_quad) and the requested number of modes is sliced from the cache.
Eigen1D eig_1d_exponential(double corr_length, int n_quad, int n_modes);

struct Mode2D {
  double lambda;
  int a;  // 1D mode index in x
  int b;  // 1D mode index in y
};

/// The n_modes largest products sigma^2 lambda_a lambda_b, ties ordered by
/// (a, b) lexicographically.
std::vector<Mode2D> eig_2d_separable(const CovarianceSpec& spec, const Eigen1D& eig1d,
                                     int n_modes);

struct KLExpansion {
  int N = 0;
  double mean = 0.0;
  std::vector<double> eigenvalues;          // lambda_1 >= ... >= lambda_N
  std::vector<Mode2D> modes;
  std::vector<std::vector<double>> fields;  // fields[i][node] = sqrt(lambda_i) v_i(node)
};

/// Samples the weighted eigenfunctions at the given node coordinates.
KLExpansion build_kl_expansion(const CovarianceSpec& spec, int N, double mean,
                               std::span<const double> node_x, std::span<const double> node_y,
                               int n_quad = 1000);

}  // namespace sgfem
