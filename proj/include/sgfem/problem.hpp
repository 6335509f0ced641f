#pragma once

// Assembly of a complete stochastic Galerkin system from a flat configuration.

#include <memory>
#include <string>
#include <vector>

#include "sgfem/covariance_kl.hpp"
#include "sgfem/fem.hpp"
#include "sgfem/galerkin_operator.hpp"
#include "sgfem/gpc_basis.hpp"

namespace sgfem {

enum class Distribution { Uniform, Lognormal };

Distribution parse_distribution(const std::string& name);
std::string to_string(Distribution d);

struct ProblemConfig {
  Distribution distribution = Distribution::Uniform;
  int N = 4;
  int P = 4;
  double h = 0.1;
  double k0 = 1.0;            // mean coefficient
  double sigma = 0.5;         // uniform case: standard deviation scale of the KL field
  double cov = 1.0;           // lognormal case: std(k) / mean(k)
  double corr_length = 0.5;
  double xi_half_width = 1.0; // uniform case: xi_i ~ U[-a, a]
  int n_quad = 1000;
  double source = 1.0;        // constant f
};

struct Problem {
  ProblemConfig config;
  Mesh mesh;
  MultiIndexSet basis;
  KLExpansion kl;  // of k (uniform) or of the underlying Gaussian (lognormal)
  std::unique_ptr<GalerkinOperator> op;
  std::vector<double> rhs;  // global, nonzero only in block 0
};

/// Uniform case: k = k0 + sum_i k_i xi_i with xi_i ~ U[-a, a] and the
/// Legendre chaos, so the coefficient on psi_{e_i} is k_i a / sqrt(3).
/// Lognormal case: Hermite chaos of order 2P of exp(g).
Problem build_problem(const ProblemConfig& cfg);

/// (M + 1) (1/h + 1)^2.
std::size_t global_dofs(int N, int P, double h);

}  // namespace sgfem
