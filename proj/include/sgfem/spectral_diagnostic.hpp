#pragma once

// Dense check of the level-wise spectral equivalence
//   c_{l,1} u'A_l u <= u'S_l u <= c_{l,2} u'A_l u,  S_l = A_l - B_{l+1} D_{l+1}^-1 C_{l+1},
// against the measured condition number of the preconditioned operator.

#include <cstddef>
#include <vector>

#include "sgfem/galerkin_operator.hpp"
#include "sgfem/preconditioners.hpp"

namespace sgfem {

struct LevelConstants {
  int level;
  double c1;
  double c2;
};

struct SpectralReport {
  std::vector<LevelConstants> levels;  // l = 0 .. P-1
  double bound = 1.0;                  // prod c2 / c1
  double kappa = 1.0;                  // lambda_max / lambda_min of M A
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  bool holds = true;                   // kappa <= bound (1 + 1e-6)
};

/// Throws std::length_error when the global dimension exceeds max_dim.
SpectralReport spectral_diagnostic(const GalerkinOperator& op, const PreconditionerSetup& setup,
                                   std::size_t max_dim = 2000);

}  // namespace sgfem
