#include "sgfem/spectral_diagnostic.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace sgfem {

SpectralReport spectral_diagnostic(const GalerkinOperator& op, const PreconditionerSetup& setup,
                                   std::size_t max_dim) {
  if (op.dim() > max_dim) throw std::length_error("spectral_diagnostic: size guard exceeded");
  const Eigen::MatrixXd A = op.dense(max_dim);
  const auto n = static_cast<Eigen::Index>(op.spatial_dim());
  const auto& dims = op.level_dims();
  SpectralReport rep;

  for (int l = 0; l < op.levels(); ++l) {
    const Eigen::Index m = static_cast<Eigen::Index>(dims[l]) * n;
    const Eigen::Index e = static_cast<Eigen::Index>(dims[l + 1]) * n;
    const Eigen::MatrixXd Al = A.topLeftCorner(m, m);
    const Eigen::MatrixXd B = A.block(0, m, m, e - m);
    const Eigen::MatrixXd C = A.block(m, 0, e - m, m);
    const Eigen::MatrixXd D = A.block(m, m, e - m, e - m);
    Eigen::LLT<Eigen::MatrixXd> Dllt(D);
    if (Dllt.info() != Eigen::Success) throw std::runtime_error("spectral_diagnostic: D not SPD");
    Eigen::MatrixXd S = Al - B * Dllt.solve(C);
    S = 0.5 * (S + S.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(S, Al, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw std::runtime_error("spectral_diagnostic: eigensolve failed");
    const double c1 = ges.eigenvalues().minCoeff(), c2 = ges.eigenvalues().maxCoeff();
    rep.levels.push_back({l, c1, c2});
    rep.bound *= c2 / c1;
  }

  HierarchicalSchurPreconditioner M(op, setup);
  const auto N = static_cast<Eigen::Index>(op.dim());
  Eigen::MatrixXd Md(N, N);
  std::vector<double> unit(op.dim(), 0.0), col(op.dim());
  for (Eigen::Index j = 0; j < N; ++j) {
    unit[static_cast<std::size_t>(j)] = 1.0;
    M.apply(unit, col);
    unit[static_cast<std::size_t>(j)] = 0.0;
    Md.col(j) = Eigen::Map<const Eigen::VectorXd>(col.data(), N);
  }
  Md = 0.5 * (Md + Md.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> Mllt(Md);
  if (Mllt.info() != Eigen::Success) throw std::runtime_error("spectral_diagnostic: M not SPD");
  const Eigen::MatrixXd L = Mllt.matrixL();
  Eigen::MatrixXd T = L.transpose() * A * L;
  T = 0.5 * (T + T.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  rep.lambda_min = es.eigenvalues().minCoeff();
  rep.lambda_max = es.eigenvalues().maxCoeff();
  rep.kappa = rep.lambda_max / rep.lambda_min;
  rep.holds = rep.kappa <= rep.bound * (1.0 + 1e-6);
  return rep;
}

}  // namespace sgfem
