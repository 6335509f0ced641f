#pragma once

// Configuration-driven experiment runner: single solves, convergence tables
// with reference comparison, work counts and KL eigenvalue data.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgfem/krylov.hpp"
#include "sgfem/preconditioners.hpp"
#include "sgfem/problem.hpp"
#include "sgfem/reference_data.hpp"

namespace sgfem {

struct ExperimentConfig {
  ProblemConfig problem;
  PreconditionerKind preconditioner = PreconditionerKind::HierarchicalSchur;
  InnerSolver inner;
  LevelSolvePolicy level_solve = LevelSolvePolicy::Direct;
  KrylovKind krylov = KrylovKind::Cg;
  int truncation = 0;
  double tol = 1e-8;
  int max_iter = 0;
  unsigned seed = 12345;
  bool inner_tol_set = false;  // otherwise the inner tolerance follows tol

  /// Applies one `key=value` setting. Throws std::invalid_argument on an
  /// unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  /// Checks cross-field constraints; throws std::invalid_argument.
  void validate() const;

  PreconditionerSetup setup() const;
  KrylovOptions krylov_options() const;
  std::map<std::string, std::string> to_map() const;
};

/// Recognized keys, in documentation order.
const std::vector<std::string>& config_keys();

/// Flat `key = value` lines; `#` starts a comment.
void parse_config(std::istream& is, ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

struct ExperimentResult {
  std::size_t ndof = 0;
  SolveReport report;
  std::vector<double> solution;
  bool failed = false;
  std::string error;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);
/// Reuses an already assembled problem (its config must match cfg.problem).
ExperimentResult run_on_problem(const Problem& pb, const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Tables

struct TableSpec {
  std::string name;
  std::string sweep_key;   // N, P, cov, h
  std::vector<double> sweep;
  ExperimentConfig base;
  int iter_tolerance;      // preconditioned runs, absolute
  double none_tolerance;   // unpreconditioned runs, relative
};

/// T1-T4 (uniform) and T6-T9 (lognormal).
TableSpec table_spec(const std::string& name);
const std::vector<std::string>& convergence_table_names();

struct TableOptions {
  std::vector<PreconditionerKind> kinds = {PreconditionerKind::None, PreconditionerKind::Mean,
                                           PreconditionerKind::BlockSgs,
                                           PreconditionerKind::HierarchicalSchur};
  std::vector<std::size_t> rows;  // 1-based positions; empty = all
  std::optional<ExperimentConfig> overrides;  // solver settings taken from here when set
};

struct TableCell {
  PreconditionerKind kind;
  int iterations = 0;
  double kappa = 0.0;
  bool converged = false;
  bool spd_suspect = false;
  bool failed = false;
  std::optional<ReferenceCell> reference;
  bool within = true;  // iteration count within tolerance of the reference
};

struct TableRowResult {
  double sweep = 0.0;
  std::size_t ndof = 0;
  std::optional<std::size_t> reference_ndof;
  std::vector<TableCell> cells;
};

struct TableResult {
  TableSpec spec;
  std::vector<TableRowResult> rows;
  bool within() const;
  bool failed() const;
};

TableResult run_table(const std::string& name, const TableOptions& options = {});

/// Relative or absolute check used for the `within` flag.
bool iterations_within(const TableSpec& spec, PreconditionerKind kind, int measured, int reference);

void write_table_csv(std::ostream& os, const TableResult& t);
void write_table_markdown(std::ostream& os, const TableResult& t);

struct WorkCountRow {
  int P;
  WorkCount measured;  // from the tensor and a counted preconditioner application
  WorkCount reference;
  bool matches() const { return measured == reference; }
};

/// N = 4, P = 1..8; measured n_m / n_ds come from one instrumented
/// hierarchical preconditioner application.
std::vector<WorkCountRow> run_work_counts();
void write_work_counts_csv(std::ostream& os, const std::vector<WorkCountRow>& rows);
void write_work_counts_markdown(std::ostream& os, const std::vector<WorkCountRow>& rows);

/// Dominant 2D eigenvalues for sigma = 1, L = 0.5 as CSV `index,lambda`.
std::vector<double> dominant_eigenvalues(int count = 15, double sigma = 1.0, double corr_length = 0.5,
                                         int n_quad = 1000);
void write_eigenvalues_csv(std::ostream& os, const std::vector<double>& lambdas);

/// CSV `node_x,node_y,k_i` for one KL mode (1-based i).
void write_field_csv(std::ostream& os, const Problem& pb, int mode);

}  // namespace sgfem
