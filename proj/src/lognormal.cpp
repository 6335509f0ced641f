#include "sgfem/lognormal.hpp"

#include <cmath>
#include <stdexcept>

namespace sgfem {

GaussianParams gaussian_parameters(double mean, double cov) {
  if (!(mean > 0.0)) throw std::invalid_argument("lognormal: mean must be positive");
  if (cov < 0.0) throw std::invalid_argument("lognormal: cov must be nonnegative");
  GaussianParams g;
  const double s2 = std::log1p(cov * cov);
  g.sigma = std::sqrt(s2);
  g.mu = std::log(mean) - 0.5 * s2;
  return g;
}

std::vector<double> lognormal_coefficients_at(double mu, std::span<const double> amplitudes,
                                              const MultiIndexSet& coeff_basis) {
  if (amplitudes.size() != static_cast<std::size_t>(coeff_basis.dimensions()))
    throw std::invalid_argument("lognormal: amplitude count does not match the basis");
  double a2 = 0.0;
  for (double a : amplitudes) a2 += a * a;
  const double base = std::exp(mu + 0.5 * a2);
  std::vector<double> out(coeff_basis.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto alpha = coeff_basis[i];
    double v = base;
    for (std::size_t d = 0; d < amplitudes.size(); ++d)
      if (alpha[d] > 0)
        v *= std::pow(amplitudes[d], alpha[d]) / std::sqrt(std::tgamma(alpha[d] + 1.0));
    out[i] = v;
  }
  return out;
}

std::vector<std::vector<double>> lognormal_gpc_coefficients(double mu,
                                                            const KLExpansion& gaussian_kl,
                                                            const MultiIndexSet& coeff_basis) {
  const std::size_t nodes = gaussian_kl.fields.empty() ? 0 : gaussian_kl.fields.front().size();
  std::vector<std::vector<double>> fields(coeff_basis.size(), std::vector<double>(nodes));
  std::vector<double> a(static_cast<std::size_t>(gaussian_kl.N));
  for (std::size_t n = 0; n < nodes; ++n) {
    for (std::size_t d = 0; d < a.size(); ++d) a[d] = gaussian_kl.fields[d][n];
    const auto c = lognormal_coefficients_at(mu, a, coeff_basis);
    for (std::size_t i = 0; i < c.size(); ++i) fields[i][n] = c[i];
  }
  return fields;
}

LognormalModel build_lognormal_model(const LognormalSpec& spec, const Mesh& mesh) {
  LognormalModel m;
  m.gaussian = gaussian_parameters(spec.mean, spec.cov);
  m.gaussian_kl = build_kl_expansion({m.gaussian.sigma, spec.corr_length}, spec.N, m.gaussian.mu,
                                     mesh.x, mesh.y, spec.n_quad);
  m.coeff_basis = build_multi_index_set(spec.N, 2 * spec.P);
  m.fields = lognormal_gpc_coefficients(m.gaussian.mu, m.gaussian_kl, m.coeff_basis);
  return m;
}

GalerkinOperator build_lognormal_operator(const LognormalSpec& spec, const Mesh& mesh,
                                          const LognormalModel& model) {
  if (model.coeff_basis.dimensions() != spec.N || model.coeff_basis.max_degree() != 2 * spec.P)
    throw std::invalid_argument("build_lognormal_operator: coefficient basis mismatch");
  const auto basis = build_multi_index_set(spec.N, spec.P);
  auto tensor = build_triple_product_tensor(basis, model.coeff_basis, Family::Hermite);
  const auto pattern = q1_pattern(mesh);
  std::vector<CsrMatrix> K;
  K.reserve(model.fields.size());
  for (std::size_t i = 0; i < model.fields.size(); ++i)
    K.push_back(assemble_weighted_stiffness(mesh, pattern, model.fields[i],
                                            i == 0 ? BoundaryRows::Identity : BoundaryRows::Zero));
  return GalerkinOperator(std::move(K), std::move(tensor), hierarchy_dims(spec.N, spec.P));
}

GalerkinOperator build_lognormal_operator(const LognormalSpec& spec, const Mesh& mesh) {
  return build_lognormal_operator(spec, mesh, build_lognormal_model(spec, mesh));
}

}  // namespace sgfem
