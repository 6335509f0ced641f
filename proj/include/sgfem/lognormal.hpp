#pragma once

// Lognormal coefficient k = exp(g) with g a Gaussian field given by its KL
// expansion, projected onto Hermite chaos of order 2P.

#include <span>
#include <vector>

#include "sgfem/covariance_kl.hpp"
#include "sgfem/fem.hpp"
#include "sgfem/galerkin_operator.hpp"
#include "sgfem/gpc_basis.hpp"

namespace sgfem {

struct LognormalSpec {
  double mean = 1.0;         // mean of k
  double cov = 1.0;          // std(k) / mean(k)
  double corr_length = 0.5;  // of the underlying Gaussian field
  int N = 4;
  int P = 4;                 // solution order; the coefficient uses 2P
  int n_quad = 1000;
};

struct GaussianParams {
  double mu = 0.0;
  double sigma = 0.0;
};

/// sigma^2 = ln(1 + cov^2), mu = ln(mean) - sigma^2 / 2.
GaussianParams gaussian_parameters(double mean, double cov);

/// Chaos coefficients at one point of exp(mu + sum_d a_d xi_d):
///   k_alpha = exp(mu + |a|^2 / 2) prod_d a_d^alpha_d / sqrt(alpha_d!).
std::vector<double> lognormal_coefficients_at(double mu, std::span<const double> amplitudes,
                                              const MultiIndexSet& coeff_basis);

/// fields[i][node] for every coefficient index i, from the Gaussian KL.
std::vector<std::vector<double>> lognormal_gpc_coefficients(double mu,
                                                            const KLExpansion& gaussian_kl,
                                                            const MultiIndexSet& coeff_basis);

struct LognormalModel {
  GaussianParams gaussian;
  KLExpansion gaussian_kl;
  MultiIndexSet coeff_basis;
  std::vector<std::vector<double>> fields;
};

LognormalModel build_lognormal_model(const LognormalSpec& spec, const Mesh& mesh);

/// Hermite Galerkin operator with K_i assembled from every coefficient
/// field; the block pattern is dense.
GalerkinOperator build_lognormal_operator(const LognormalSpec& spec, const Mesh& mesh);
GalerkinOperator build_lognormal_operator(const LognormalSpec& spec, const Mesh& mesh,
                                          const LognormalModel& model);

}  // namespace sgfem
