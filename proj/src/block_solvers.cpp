#include "sgfem/block_solvers.hpp"

#include <algorithm>
#include <cmath>

#include "sgfem/krylov.hpp"

namespace sgfem {

InnerSolver InnerSolver::parse(const std::string& name) {
  InnerSolver s;
  if (name == "exact") {
    s.kind = Kind::Exact;
  } else if (name == "cg") {
    s.kind = Kind::Cg;
    s.m0 = Precond::None;
  } else if (name == "cg-diag") {
    s.kind = Kind::Cg;
    s.m0 = Precond::Diagonal;
  } else if (name == "cg-exact") {
    s.kind = Kind::Cg;
    s.m0 = Precond::Exact;
  } else {
    throw std::invalid_argument("unknown inner solver '" + name + "'");
  }
  return s;
}

std::string InnerSolver::name() const {
  if (kind == Kind::Exact) return "exact";
  switch (m0) {
    case Precond::None: return "cg";
    case Precond::Diagonal: return "cg-diag";
    case Precond::Exact: return "cg-exact";
  }
  return "cg";
}

SpdBlockSolver::SpdBlockSolver(const CsrMatrix& K, InnerSolver policy) : K_(K), policy_(policy) {
  const bool need_factor = policy_.kind == InnerSolver::Kind::Exact ||
                           policy_.m0 == InnerSolver::Precond::Exact;
  if (need_factor) {
    llt_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(K_.to_eigen());
    if (llt_->info() != Eigen::Success)
      throw InnerSolveError("block Cholesky failed: matrix not positive definite", -1, 0, 0.0);
  }
  if (policy_.kind == InnerSolver::Kind::Cg && policy_.m0 == InnerSolver::Precond::Diagonal) {
    inv_diag_.resize(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
      const double d = K_.at(static_cast<std::int32_t>(r), static_cast<std::int32_t>(r));
      if (!(d > 0.0)) throw InnerSolveError("nonpositive diagonal entry", -1, 0, 0.0);
      inv_diag_[r] = 1.0 / d;
    }
  }
}

void SpdBlockSolver::solve(std::span<const double> b, std::span<double> x) const {
  const auto n = static_cast<Eigen::Index>(dim());
  if (policy_.kind == InnerSolver::Kind::Exact) {
    Eigen::Map<const Eigen::VectorXd> bb(b.data(), n);
    Eigen::Map<Eigen::VectorXd> xx(x.data(), n);
    xx = llt_->solve(bb);
    return;
  }
  LinearMap A = [this](std::span<const double> in, std::span<double> out) { K_.multiply(in, out); };
  LinearMap M;
  if (policy_.m0 == InnerSolver::Precond::Diagonal) {
    M = [this](std::span<const double> in, std::span<double> out) {
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = inv_diag_[i] * in[i];
    };
  } else if (policy_.m0 == InnerSolver::Precond::Exact) {
    M = [this, n](std::span<const double> in, std::span<double> out) {
      Eigen::Map<Eigen::VectorXd>(out.data(), n) = llt_->solve(Eigen::Map<const Eigen::VectorXd>(in.data(), n));
    };
  }
  KrylovOptions opts;
  opts.tol = policy_.tol;
  opts.max_iter = policy_.max_iter;
  opts.record_history = false;
  opts.estimate_kappa = false;
  std::fill(x.begin(), x.end(), 0.0);
  const SolveReport rep = cg(A, M, b, x, opts);
  inner_iters_ += static_cast<std::size_t>(rep.iterations);
  if (!rep.converged)
    throw InnerSolveError("inner CG did not converge", -1, 0, rep.final_relres);
}

LevelSolver::LevelSolver(const GalerkinOperator& op, int level, InnerSolver inner,
                         std::shared_ptr<const SpdBlockSolver> k0_solver, LevelSolvePolicy policy,
                         std::size_t direct_limit)
    : op_(op),
      level_(level),
      range_(op.tail(level)),
      inner_(inner),
      block_diagonal_(op.level_block_diagonal(level)),
      k0_(std::move(k0_solver)) {
  if (block_diagonal_) {
    own_.resize(range_.size());
    for (std::size_t k = range_.begin; k < range_.end; ++k) {
      if (op_.diagonal_is_mean_multiple(k) && k0_) continue;
      const auto vals = op_.block(k, k);
      CsrMatrix Dk(op_.stiffness().front().shared_pattern(),
                   std::vector<double>(vals.begin(), vals.end()));
      own_[k - range_.begin] = std::make_shared<SpdBlockSolver>(Dk, inner_);
    }
    return;
  }
  if (!k0_) throw std::invalid_argument("LevelSolver: coupled level needs a K_0 solver");
  const std::size_t unknowns = range_.size() * op_.spatial_dim();
  if (policy == LevelSolvePolicy::Direct && unknowns <= direct_limit) {
    llt_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(op_.assemble(range_, range_));
    if (llt_->info() != Eigen::Success)
      throw InnerSolveError("level Cholesky failed", level_, 0, 0.0);
  }
}

std::size_t LevelSolver::solve(std::span<const double> rhs, std::span<double> y) const {
  const std::size_t n = op_.spatial_dim();
  if (rhs.size() != range_.size() * n || y.size() != rhs.size())
    throw std::invalid_argument("LevelSolver::solve: dimension mismatch");

  auto k0_block = [&](std::size_t k, std::span<const double> r, std::span<double> out) {
    k0_->solve(r, out);
    const double s = 1.0 / op_.mean_scale(k);
    if (s != 1.0)
      for (auto& v : out) v *= s;
  };

  if (block_diagonal_) {
    for (std::size_t k = range_.begin; k < range_.end; ++k) {
      const std::size_t off = (k - range_.begin) * n;
      auto r = rhs.subspan(off, n);
      auto out = y.subspan(off, n);
      try {
        if (const auto& own = own_[k - range_.begin]) {
          own->solve(r, out);
        } else {
          k0_block(k, r, out);
        }
      } catch (const InnerSolveError& e) {
        throw InnerSolveError(e.what(), level_, k, e.residual);
      }
    }
    return range_.size();
  }

  if (llt_) {
    const auto m = static_cast<Eigen::Index>(rhs.size());
    Eigen::Map<Eigen::VectorXd>(y.data(), m) = llt_->solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), m));
    return range_.size();
  }

  const BlockRange R = range_;
  LinearMap A = [this, R](std::span<const double> in, std::span<double> out) {
    op_.apply_range(R, R, in, out);
  };
  LinearMap M = [&, R, n](std::span<const double> in, std::span<double> out) {
    for (std::size_t k = R.begin; k < R.end; ++k)
      k0_block(k, in.subspan((k - R.begin) * n, n), out.subspan((k - R.begin) * n, n));
  };
  KrylovOptions opts;
  opts.tol = inner_.tol;
  opts.max_iter = inner_.max_iter;
  opts.record_history = false;
  opts.estimate_kappa = false;
  std::fill(y.begin(), y.end(), 0.0);
  const SolveReport rep = cg(A, M, rhs, y, opts);
  if (!rep.converged)
    throw InnerSolveError("level CG did not converge", level_, R.begin, rep.final_relres);
  return range_.size();
}

}  // namespace sgfem
