#include "sgfem/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "sgfem/lognormal.hpp"

namespace sgfem {

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform") return Distribution::Uniform;
  if (name == "lognormal") return Distribution::Lognormal;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

std::string to_string(Distribution d) { return d == Distribution::Uniform ? "uniform" : "lognormal"; }

std::size_t global_dofs(int N, int P, double h) {
  const auto side = static_cast<std::size_t>(build_mesh(h).nodes_per_side());
  return basis_size(N, P) * side * side;
}

Problem build_problem(const ProblemConfig& cfg) {
  if (cfg.N < 1) throw std::invalid_argument("build_problem: N must be >= 1");
  if (cfg.P < 0) throw std::invalid_argument("build_problem: P must be >= 0");
  if (!(cfg.k0 > 0.0)) throw std::invalid_argument("build_problem: k0 must be positive");
  if (!(cfg.corr_length > 0.0)) throw std::invalid_argument("build_problem: corr_length must be positive");

  Problem pb;
  pb.config = cfg;
  pb.mesh = build_mesh(cfg.h);
  pb.basis = build_multi_index_set(cfg.N, cfg.P);

  if (cfg.distribution == Distribution::Uniform) {
    if (cfg.sigma < 0.0) throw std::invalid_argument("build_problem: sigma must be nonnegative");
    if (!(cfg.xi_half_width > 0.0)) throw std::invalid_argument("build_problem: xi_half_width must be positive");
    // sigma = 0 still builds the expansion; the fields are simply zero.
    const double s = cfg.sigma > 0.0 ? cfg.sigma : 1.0;
    pb.kl = build_kl_expansion({s, cfg.corr_length}, cfg.N, cfg.k0, pb.mesh.x, pb.mesh.y, cfg.n_quad);
    if (cfg.sigma == 0.0)
      for (auto& f : pb.kl.fields) std::fill(f.begin(), f.end(), 0.0);

    const auto pattern = q1_pattern(pb.mesh);
    std::vector<CsrMatrix> K;
    std::vector<double> field(pb.mesh.x.size(), cfg.k0);
    K.push_back(assemble_weighted_stiffness(pb.mesh, pattern, field, BoundaryRows::Identity));
    const double to_chaos = cfg.xi_half_width / std::sqrt(3.0);
    for (int i = 0; i < cfg.N; ++i) {
      for (std::size_t n = 0; n < field.size(); ++n) field[n] = to_chaos * pb.kl.fields[i][n];
      K.push_back(assemble_weighted_stiffness(pb.mesh, pattern, field, BoundaryRows::Zero));
    }
    pb.op = std::make_unique<GalerkinOperator>(std::move(K), build_kl_tensor(pb.basis, Family::Legendre),
                                               hierarchy_dims(cfg.N, cfg.P));
  } else {
    LognormalSpec spec{cfg.k0, cfg.cov, cfg.corr_length, cfg.N, cfg.P, cfg.n_quad};
    auto model = build_lognormal_model(spec, pb.mesh);
    pb.kl = model.gaussian_kl;
    pb.op = std::make_unique<GalerkinOperator>(build_lognormal_operator(spec, pb.mesh, model));
  }

  const auto f0 = assemble_load(pb.mesh, cfg.source);
  pb.rhs.assign(pb.op->dim(), 0.0);
  std::copy(f0.begin(), f0.end(), pb.rhs.begin());
  return pb;
}

}  // namespace sgfem
