#pragma once

// Solvers for single spatial blocks and for the trailing level blocks D_l.

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "sgfem/galerkin_operator.hpp"
#include "sgfem/sparse_matrix.hpp"

namespace sgfem {

struct InnerSolver {
  enum class Kind { Exact, Cg };
  enum class Precond { None, Diagonal, Exact };

  Kind kind = Kind::Exact;
  Precond m0 = Precond::None;  // used by Kind::Cg
  double tol = 1e-8;
  int max_iter = 0;            // 0: krylov default

  /// "exact", "cg", "cg-diag", "cg-exact".
  static InnerSolver parse(const std::string& name);
  std::string name() const;
};

class InnerSolveError : public std::runtime_error {
 public:
  InnerSolveError(const std::string& what, int level, std::size_t block, double residual)
      : std::runtime_error(what), level(level), block(block), residual(residual) {}
  int level;
  std::size_t block;
  double residual;
};

/// Solves K x = b for one sparse SPD matrix, by Cholesky or inner CG.
class SpdBlockSolver {
 public:
  SpdBlockSolver(const CsrMatrix& K, InnerSolver policy);

  /// Throws InnerSolveError when the inner iteration does not converge.
  void solve(std::span<const double> b, std::span<double> x) const;

  std::size_t dim() const { return static_cast<std::size_t>(K_.rows()); }
  /// Total inner CG iterations since construction.
  std::size_t inner_iterations() const { return inner_iters_.load(); }

 private:
  CsrMatrix K_;
  InnerSolver policy_;
  std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
  std::vector<double> inv_diag_;
  mutable std::atomic<std::size_t> inner_iters_{0};
};

enum class LevelSolvePolicy { Direct, Iterative };

/// Solves D_l y = r on the trailing range of one level (level 0 is A_0).
///
/// When D_l is block diagonal each block is solved on its own; blocks that
/// are scalar multiples of K_0 share one K_0 solver. Otherwise the level is
/// treated as one coupled system: assembled and factored (Direct, up to
/// direct_limit unknowns) or solved by CG preconditioned blockwise with K_0.
class LevelSolver {
 public:
  LevelSolver(const GalerkinOperator& op, int level, InnerSolver inner,
              std::shared_ptr<const SpdBlockSolver> k0_solver,
              LevelSolvePolicy policy = LevelSolvePolicy::Direct,
              std::size_t direct_limit = 20000);

  /// rhs and y are local to tail(level). Returns the number of block solves
  /// (one per spatial block of the level).
  std::size_t solve(std::span<const double> rhs, std::span<double> y) const;

  int level() const { return level_; }
  BlockRange range() const { return range_; }
  bool block_diagonal() const { return block_diagonal_; }
  bool direct() const { return static_cast<bool>(llt_); }

 private:
  const GalerkinOperator& op_;
  int level_;
  BlockRange range_;
  InnerSolver inner_;
  bool block_diagonal_;
  std::shared_ptr<const SpdBlockSolver> k0_;
  std::vector<std::shared_ptr<const SpdBlockSolver>> own_;  // per block, null when using k0_
  std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
};

}  // namespace sgfem
