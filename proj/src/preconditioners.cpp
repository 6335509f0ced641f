#include "sgfem/preconditioners.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgfem {

PreconditionerKind parse_preconditioner(const std::string& name) {
  if (name == "none") return PreconditionerKind::None;
  if (name == "mean" || name == "m") return PreconditionerKind::Mean;
  if (name == "bgs") return PreconditionerKind::BlockSgs;
  if (name == "hs") return PreconditionerKind::HierarchicalSchur;
  throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

std::string to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::None: return "none";
    case PreconditionerKind::Mean: return "mean";
    case PreconditionerKind::BlockSgs: return "bgs";
    case PreconditionerKind::HierarchicalSchur: return "hs";
  }
  return "none";
}

KrylovKind parse_krylov(const std::string& name) {
  if (name == "cg") return KrylovKind::Cg;
  if (name == "fcg") return KrylovKind::Fcg;
  throw std::invalid_argument("unknown krylov method '" + name + "'");
}

std::string to_string(KrylovKind k) { return k == KrylovKind::Cg ? "cg" : "fcg"; }

std::shared_ptr<const SpdBlockSolver> make_k0_solver(const GalerkinOperator& op,
                                                     const InnerSolver& inner) {
  return std::make_shared<SpdBlockSolver>(op.stiffness().front(), inner);
}

namespace {

void scale(std::span<double> v, double s) {
  if (s != 1.0)
    for (auto& a : v) a *= s;
}

}  // namespace

// ---------------------------------------------------------------------------

MeanBasedPreconditioner::MeanBasedPreconditioner(const GalerkinOperator& op,
                                                 const PreconditionerSetup& setup)
    : op_(op),
      k0_(make_k0_solver(op, setup.inner)),
      variable_(setup.inner.kind == InnerSolver::Kind::Cg) {}

void MeanBasedPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = op_.spatial_dim();
  for (std::size_t k = 0; k < op_.block_count(); ++k) {
    auto out = z.subspan(k * n, n);
    try {
      k0_->solve(r.subspan(k * n, n), out);
    } catch (const InnerSolveError& e) {
      throw InnerSolveError(e.what(), -1, k, e.residual);
    }
    scale(out, 1.0 / op_.mean_scale(k));
  }
  record(0, op_.block_count());
}

// ---------------------------------------------------------------------------

BlockSgsPreconditioner::BlockSgsPreconditioner(const GalerkinOperator& op,
                                               const PreconditionerSetup& setup)
    : op_(op),
      k0_(make_k0_solver(op, setup.inner)),
      diag_(op.block_count()),
      variable_(setup.inner.kind == InnerSolver::Kind::Cg) {
  for (std::size_t k = 0; k < op.block_count(); ++k) {
    if (op.diagonal_is_mean_multiple(k)) continue;
    const auto vals = op.block(k, k);
    CsrMatrix Akk(op.stiffness().front().shared_pattern(), std::vector<double>(vals.begin(), vals.end()));
    diag_[k] = std::make_shared<SpdBlockSolver>(Akk, setup.inner);
  }
}

void BlockSgsPreconditioner::solve_diagonal(std::size_t k, std::span<const double> rhs,
                                            std::span<double> out) const {
  try {
    if (diag_[k]) {
      diag_[k]->solve(rhs, out);
    } else {
      k0_->solve(rhs, out);
      scale(out, 1.0 / op_.mean_scale(k));
    }
  } catch (const InnerSolveError& e) {
    throw InnerSolveError(e.what(), -1, k, e.residual);
  }
}

void BlockSgsPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = op_.spatial_dim();
  const std::size_t nb = op_.block_count();
  std::vector<double> rhs(n);
  std::size_t matvecs = 0;
  // Forward sweep from zero: only the already updated lower blocks contribute.
  for (std::size_t k = 0; k < nb; ++k) {
    std::copy_n(r.begin() + static_cast<std::ptrdiff_t>(k * n), n, rhs.begin());
    if (k > 0)
      matvecs += op_.apply_range({k, k + 1}, {0, k}, z.first(k * n), rhs, -1.0, true);
    solve_diagonal(k, rhs, z.subspan(k * n, n));
  }
  // Backward sweep over all off-diagonal blocks.
  for (std::size_t kk = nb; kk-- > 0;) {
    std::copy_n(r.begin() + static_cast<std::ptrdiff_t>(kk * n), n, rhs.begin());
    if (kk > 0) matvecs += op_.apply_range({kk, kk + 1}, {0, kk}, z.first(kk * n), rhs, -1.0, true);
    if (kk + 1 < nb)
      matvecs += op_.apply_range({kk, kk + 1}, {kk + 1, nb}, z.subspan((kk + 1) * n), rhs, -1.0, true);
    solve_diagonal(kk, rhs, z.subspan(kk * n, n));
  }
  record(matvecs, 2 * nb);
}

// ---------------------------------------------------------------------------

HierarchicalSchurPreconditioner::HierarchicalSchurPreconditioner(const GalerkinOperator& op,
                                                                 const PreconditionerSetup& setup,
                                                                 int top_level)
    : op_(op), top_(top_level < 0 ? op.levels() : top_level) {
  if (top_ > op.levels()) throw std::out_of_range("HierarchicalSchurPreconditioner: invalid level");
  auto k0 = make_k0_solver(op, setup.inner);
  variable_ = setup.inner.kind == InnerSolver::Kind::Cg;
  for (int l = 0; l <= top_; ++l) {
    levels_.push_back(std::make_unique<LevelSolver>(op, l, setup.inner, k0, setup.level_policy,
                                                    setup.direct_limit));
    if (!levels_.back()->block_diagonal() && !levels_.back()->direct()) variable_ = true;
  }
}

void HierarchicalSchurPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = op_.spatial_dim();
  if (r.size() != dim() || z.size() != dim())
    throw std::invalid_argument("HierarchicalSchurPreconditioner: dimension mismatch");
  std::vector<double> w(r.begin(), r.end());
  std::vector<double> y;
  std::size_t matvecs = 0, solves = 0;

  for (int l = top_; l >= 1; --l) {
    const BlockRange t = op_.tail(l), h = op_.head(l);
    y.resize(t.size() * n);
    solves += levels_[l]->solve(std::span<const double>(w).subspan(t.begin * n, t.size() * n), y);
    matvecs += op_.apply_part(l, Part::B, y, std::span<double>(w).first(h.size() * n), -1.0, true);
  }

  solves += levels_[0]->solve(std::span<const double>(w).first(n), z.first(n));

  for (int l = 1; l <= top_; ++l) {
    const BlockRange t = op_.tail(l), h = op_.head(l);
    auto wt = std::span<double>(w).subspan(t.begin * n, t.size() * n);
    matvecs += op_.apply_part(l, Part::C, z.first(h.size() * n), wt, -1.0, true);
    solves += levels_[l]->solve(wt, z.subspan(t.begin * n, t.size() * n));
  }
  record(matvecs, solves);
}

// ---------------------------------------------------------------------------

GeneralizedTwoLevelPreconditioner::GeneralizedTwoLevelPreconditioner(const GalerkinOperator& op,
                                                                     LinearMap md1, LinearMap md2,
                                                                     LinearMap md3, LinearMap ms)
    : op_(op), md1_(std::move(md1)), md2_(std::move(md2)), md3_(std::move(md3)), ms_(std::move(ms)) {
  if (op.levels() < 1) throw std::invalid_argument("GeneralizedTwoLevelPreconditioner: need P >= 1");
}

void GeneralizedTwoLevelPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const int P = op_.levels();
  const std::size_t n = op_.spatial_dim();
  const std::size_t nh = op_.head(P).size() * n, nt = op_.tail(P).size() * n;
  auto rh = r.first(nh), rt = r.subspan(nh, nt);
  auto zh = z.first(nh), zt = z.subspan(nh, nt);
  std::size_t matvecs = 0;

  std::vector<double> g(rh.begin(), rh.end()), y(nt), v(nt);
  md1_(rt, y);
  matvecs += op_.apply_part(P, Part::B, y, g, -1.0, true);
  ms_(g, zh);
  md2_(rt, zt);
  std::vector<double> cu(nt);
  matvecs += op_.apply_part(P, Part::C, zh, cu);
  md3_(cu, v);
  for (std::size_t i = 0; i < nt; ++i) zt[i] -= v[i];
  record(matvecs, 0);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Preconditioner> make_preconditioner(PreconditionerKind kind,
                                                    const GalerkinOperator& op,
                                                    const PreconditionerSetup& setup) {
  switch (kind) {
    case PreconditionerKind::None: return nullptr;
    case PreconditionerKind::Mean: return std::make_unique<MeanBasedPreconditioner>(op, setup);
    case PreconditionerKind::BlockSgs: return std::make_unique<BlockSgsPreconditioner>(op, setup);
    case PreconditionerKind::HierarchicalSchur:
      return std::make_unique<HierarchicalSchurPreconditioner>(op, setup);
  }
  return nullptr;
}

namespace {

WorkCount from_counts(std::size_t n_b, std::size_t n_db) {
  return {n_b, n_db, n_b - n_db, 2 * (n_db - 1) + 1};
}

}  // namespace

WorkCount work_count(const GalerkinOperator& op) {
  return from_counts(op.tensor().nonzero_blocks(), op.block_count());
}

WorkCount work_count(int N, int P) {
  const auto tensor = build_kl_tensor(build_multi_index_set(N, P), Family::Legendre);
  return from_counts(tensor.nonzero_blocks(), tensor.size());
}

// ---------------------------------------------------------------------------

SchurSolveResult schur_reduce_and_solve(const GalerkinOperator& op, std::span<const double> f,
                                        const PreconditionerSetup& setup, KrylovKind krylov,
                                        const KrylovOptions& opts) {
  const int P = op.levels();
  if (P < 1) throw std::invalid_argument("schur_reduce_and_solve: need P >= 1");
  if (f.size() != op.dim()) throw std::invalid_argument("schur_reduce_and_solve: dimension mismatch");
  const std::size_t n = op.spatial_dim();
  const BlockRange h = op.head(P), t = op.tail(P);
  const std::size_t nh = h.size() * n, nt = t.size() * n;

  // The reduction needs exact tail solves.
  InnerSolver exact;
  exact.kind = InnerSolver::Kind::Exact;
  LevelSolver D(op, P, exact, make_k0_solver(op, exact), LevelSolvePolicy::Direct,
                std::max(setup.direct_limit, nt));

  auto ft = f.subspan(nh, nt);
  std::vector<double> g(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(nh)), y(nt);
  D.solve(ft, y);
  op.apply_part(P, Part::B, y, g, -1.0, true);

  LinearMap S = [&](std::span<const double> in, std::span<double> out) {
    std::vector<double> c(nt), d(nt);
    op.apply_range(h, h, in, out);
    op.apply_part(P, Part::C, in, c);
    D.solve(c, d);
    op.apply_part(P, Part::B, d, out, -1.0, true);
  };
  HierarchicalSchurPreconditioner M(op, setup, P - 1);

  SchurSolveResult res;
  res.solution.assign(op.dim(), 0.0);
  auto uh = std::span<double>(res.solution).first(nh);
  res.report = krylov == KrylovKind::Cg ? cg(S, M.as_map(), g, uh, opts) : fcg(S, M.as_map(), g, uh, opts);
  res.report.work = {0, 0, M.last_matvecs(), M.last_solves()};

  std::vector<double> rhs(ft.begin(), ft.end());
  op.apply_part(P, Part::C, uh, rhs, -1.0, true);
  D.solve(rhs, std::span<double>(res.solution).subspan(nh, nt));
  return res;
}

}  // namespace sgfem
