#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sgfem/block_solvers.hpp"
#include "sgfem/galerkin_operator.hpp"
#include "sgfem/krylov.hpp"

namespace sgfem {

enum class PreconditionerKind { None, Mean, BlockSgs, HierarchicalSchur };

/// "none", "mean", "bgs", "hs".
PreconditionerKind parse_preconditioner(const std::string& name);
std::string to_string(PreconditionerKind kind);

struct PreconditionerSetup {
  InnerSolver inner;
  LevelSolvePolicy level_policy = LevelSolvePolicy::Direct;
  std::size_t direct_limit = 20000;
};

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;

  /// z = M r; r and z span the full global vector.
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;

  /// True when the mapping changes between applications (inner iterations).
  virtual bool variable() const { return false; }

  /// Block matvecs / block solves of the most recent application.
  std::size_t last_matvecs() const { return last_matvecs_; }
  std::size_t last_solves() const { return last_solves_; }
  std::size_t applications() const { return applications_; }

  LinearMap as_map() const {
    return [this](std::span<const double> r, std::span<double> z) { apply(r, z); };
  }

 protected:
  void record(std::size_t matvecs, std::size_t solves) const {
    last_matvecs_ = matvecs;
    last_solves_ = solves;
    ++applications_;
  }

 private:
  mutable std::size_t last_matvecs_ = 0;
  mutable std::size_t last_solves_ = 0;
  mutable std::size_t applications_ = 0;
};

/// Shared K_0 solver for an operator (block 0 of the tensor is K_0 alone).
std::shared_ptr<const SpdBlockSolver> make_k0_solver(const GalerkinOperator& op,
                                                     const InnerSolver& inner);

/// Each spatial block solved independently with c_0kk K_0.
class MeanBasedPreconditioner : public Preconditioner {
 public:
  MeanBasedPreconditioner(const GalerkinOperator& op, const PreconditionerSetup& setup);
  void apply(std::span<const double> r, std::span<double> z) const override;
  bool variable() const override { return variable_; }

 private:
  const GalerkinOperator& op_;
  std::shared_ptr<const SpdBlockSolver> k0_;
  bool variable_;
};

/// One forward and one backward block Gauss-Seidel sweep in natural block
/// order with zero initial guess.
class BlockSgsPreconditioner : public Preconditioner {
 public:
  BlockSgsPreconditioner(const GalerkinOperator& op, const PreconditionerSetup& setup);
  void apply(std::span<const double> r, std::span<double> z) const override;
  bool variable() const override { return variable_; }

 private:
  void solve_diagonal(std::size_t k, std::span<const double> rhs, std::span<double> out) const;

  const GalerkinOperator& op_;
  std::shared_ptr<const SpdBlockSolver> k0_;
  std::vector<std::shared_ptr<const SpdBlockSolver>> diag_;  // null: use k0_ scaled
  bool variable_;
};

/// Hierarchical Schur complement preconditioner.
///
/// Descending over the levels l = top..1 the trailing part is eliminated
/// (pre-correction w_head -= B_l D_l^-1 w_tail); A_0 is solved at the
/// bottom; ascending, the trailing parts are recovered from
/// D_l^-1 (w_tail - C_l z_head). Levels above top_level are left out, which
/// gives the preconditioner of a leading subsystem.
class HierarchicalSchurPreconditioner : public Preconditioner {
 public:
  HierarchicalSchurPreconditioner(const GalerkinOperator& op, const PreconditionerSetup& setup,
                                  int top_level = -1);
  void apply(std::span<const double> r, std::span<double> z) const override;
  bool variable() const override { return variable_; }

  int top_level() const { return top_; }
  std::size_t dim() const { return op_.leading(top_).size() * op_.spatial_dim(); }
  const LevelSolver& level_solver(int level) const { return *levels_.at(static_cast<std::size_t>(level)); }

 private:
  const GalerkinOperator& op_;
  int top_;
  std::vector<std::unique_ptr<LevelSolver>> levels_;
  bool variable_;
};

/// Three-factor block preconditioner on the top-level 2x2 split:
///   M = [I 0; -M_D3 C I] [M_S 0; 0 M_D2] [I -B M_D1; 0 I].
class GeneralizedTwoLevelPreconditioner : public Preconditioner {
 public:
  /// Each map acts on local vectors (head or tail of the top level).
  GeneralizedTwoLevelPreconditioner(const GalerkinOperator& op, LinearMap md1, LinearMap md2,
                                    LinearMap md3, LinearMap ms);
  void apply(std::span<const double> r, std::span<double> z) const override;

 private:
  const GalerkinOperator& op_;
  LinearMap md1_, md2_, md3_, ms_;
};

std::unique_ptr<Preconditioner> make_preconditioner(PreconditionerKind kind,
                                                    const GalerkinOperator& op,
                                                    const PreconditionerSetup& setup);

/// n_b and n_db from the operator's block pattern, n_m and n_ds from
/// n_m = n_b - n_db and n_ds = 2 (n_db - 1) + 1.
WorkCount work_count(const GalerkinOperator& op);
/// The same for the linear (KL) Legendre tensor of (N, P).
WorkCount work_count(int N, int P);

struct SchurSolveResult {
  std::vector<double> solution;  // full global vector
  SolveReport report;            // iterations on the reduced system
};

enum class KrylovKind { Cg, Fcg };
KrylovKind parse_krylov(const std::string& name);
std::string to_string(KrylovKind k);

/// Eliminates the top-level tail with exact D solves, solves
/// S u_head = f_head - B D^-1 f_tail matrix-free with the hierarchical
/// preconditioner restricted to the leading levels, then recovers
/// u_tail = D^-1 (f_tail - C u_head).
SchurSolveResult schur_reduce_and_solve(const GalerkinOperator& op, std::span<const double> f,
                                        const PreconditionerSetup& setup, KrylovKind krylov,
                                        const KrylovOptions& opts);

}  // namespace sgfem
