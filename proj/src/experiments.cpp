#include "sgfem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sgfem/covariance_kl.hpp"

namespace sgfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d;
    // Accept "1/10" for mesh sizes.
    const auto slash = v.find('/');
    if (slash != std::string::npos) {
      const double num = std::stod(v.substr(0, slash));
      const double den = std::stod(v.substr(slash + 1), &pos);
      if (pos != v.size() - slash - 1) throw std::invalid_argument("trailing");
      d = num / den;
    } else {
      d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
    }
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid number for '" + key + "': '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer for '" + key + "': '" + v + "'");
  }
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string level_policy_name(LevelSolvePolicy p) {
  return p == LevelSolvePolicy::Direct ? "direct" : "iterative";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "distribution", "N",       "P",         "h",          "k0",          "sigma",    "cov",
      "corr_length",  "xi_half_width", "n_quad", "source",  "preconditioner", "inner", "inner_tol",
      "level_solve",  "krylov",  "truncation", "tol",       "max_iter",    "seed"};
  return keys;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto& p = problem;
  if (key == "distribution") p.distribution = parse_distribution(v);
  else if (key == "N") p.N = to_int(key, v);
  else if (key == "P") p.P = to_int(key, v);
  else if (key == "h") p.h = to_double(key, v);
  else if (key == "k0") p.k0 = to_double(key, v);
  else if (key == "sigma") p.sigma = to_double(key, v);
  else if (key == "cov") p.cov = to_double(key, v);
  else if (key == "corr_length") p.corr_length = to_double(key, v);
  else if (key == "xi_half_width") p.xi_half_width = to_double(key, v);
  else if (key == "n_quad") p.n_quad = to_int(key, v);
  else if (key == "source") p.source = to_double(key, v);
  else if (key == "preconditioner") preconditioner = parse_preconditioner(v);
  else if (key == "inner") {
    const double t = inner.tol;
    inner = InnerSolver::parse(v);
    inner.tol = t;
  } else if (key == "inner_tol") {
    inner.tol = to_double(key, v);
    inner_tol_set = true;
  } else if (key == "level_solve") {
    if (v == "direct") level_solve = LevelSolvePolicy::Direct;
    else if (v == "iterative") level_solve = LevelSolvePolicy::Iterative;
    else throw std::invalid_argument("unknown level_solve '" + v + "'");
  } else if (key == "krylov") krylov = parse_krylov(v);
  else if (key == "truncation") truncation = to_int(key, v);
  else if (key == "tol") tol = to_double(key, v);
  else if (key == "max_iter") max_iter = to_int(key, v);
  else if (key == "seed") seed = static_cast<unsigned>(to_int(key, v));
  else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

void ExperimentConfig::validate() const {
  const auto& p = problem;
  if (p.N < 1) throw std::invalid_argument("N must be >= 1");
  if (p.P < 0) throw std::invalid_argument("P must be >= 0");
  build_mesh(p.h);
  if (!(p.k0 > 0.0)) throw std::invalid_argument("k0 must be positive");
  if (p.sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  if (p.cov < 0.0) throw std::invalid_argument("cov must be nonnegative");
  if (!(p.corr_length > 0.0)) throw std::invalid_argument("corr_length must be positive");
  if (!(p.xi_half_width > 0.0)) throw std::invalid_argument("xi_half_width must be positive");
  if (p.n_quad < 2) throw std::invalid_argument("n_quad must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (truncation < 0) throw std::invalid_argument("truncation must be >= 0");
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
}

PreconditionerSetup ExperimentConfig::setup() const {
  PreconditionerSetup s;
  s.inner = inner;
  if (!inner_tol_set) s.inner.tol = tol;
  s.level_policy = level_solve;
  return s;
}

KrylovOptions ExperimentConfig::krylov_options() const {
  KrylovOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.truncation = truncation;
  o.seed = seed;
  return o;
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  const auto& p = problem;
  return {{"distribution", to_string(p.distribution)},
          {"N", std::to_string(p.N)},
          {"P", std::to_string(p.P)},
          {"h", fmt(p.h, 17)},
          {"k0", fmt(p.k0, 17)},
          {"sigma", fmt(p.sigma, 17)},
          {"cov", fmt(p.cov, 17)},
          {"corr_length", fmt(p.corr_length, 17)},
          {"xi_half_width", fmt(p.xi_half_width, 17)},
          {"n_quad", std::to_string(p.n_quad)},
          {"source", fmt(p.source, 17)},
          {"preconditioner", to_string(preconditioner)},
          {"inner", inner.name()},
          {"inner_tol", fmt(inner_tol_set ? inner.tol : tol, 17)},
          {"level_solve", level_policy_name(level_solve)},
          {"krylov", to_string(krylov)},
          {"truncation", std::to_string(truncation)},
          {"tol", fmt(tol, 17)},
          {"max_iter", std::to_string(max_iter)},
          {"seed", std::to_string(seed)}};
}

void parse_config(std::istream& is, ExperimentConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  ExperimentConfig cfg;
  parse_config(in, cfg);
  return cfg;
}

// ---------------------------------------------------------------------------

ExperimentResult run_on_problem(const Problem& pb, const ExperimentConfig& cfg) {
  const GalerkinOperator& op = *pb.op;
  ExperimentResult res;
  res.ndof = op.dim();
  res.solution.assign(op.dim(), 0.0);
  try {
    const auto M = make_preconditioner(cfg.preconditioner, op, cfg.setup());
    LinearMap A = [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); };
    const LinearMap Mmap = M ? M->as_map() : LinearMap{};
    const auto opts = cfg.krylov_options();
    res.report = cfg.krylov == KrylovKind::Cg ? cg(A, Mmap, pb.rhs, res.solution, opts)
                                              : fcg(A, Mmap, pb.rhs, res.solution, opts);
    res.report.work = work_count(op);
    if (M) {
      res.report.work.n_m = M->last_matvecs();
      res.report.work.n_ds = M->last_solves();
    } else {
      res.report.work.n_m = res.report.work.n_ds = 0;
    }
  } catch (const InnerSolveError& e) {
    res.failed = true;
    std::ostringstream os;
    os << e.what() << " (level " << e.level << ", block " << e.block << ", residual " << e.residual << ")";
    res.error = os.str();
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem pb = build_problem(cfg.problem);
  return run_on_problem(pb, cfg);
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& convergence_table_names() {
  static const std::vector<std::string> names = {"T1", "T2", "T3", "T4", "T6", "T7", "T8", "T9"};
  return names;
}

TableSpec table_spec(const std::string& name) {
  TableSpec t;
  t.name = name;
  ExperimentConfig& b = t.base;
  b.problem.N = 4;
  b.problem.P = 4;
  b.problem.h = 0.1;
  b.problem.k0 = 1.0;
  b.problem.corr_length = 0.5;
  const bool lognormal = name == "T6" || name == "T7" || name == "T8" || name == "T9";
  if (lognormal) {
    b.problem.distribution = Distribution::Lognormal;
    b.problem.cov = 1.0;
    t.iter_tolerance = 3;
  } else {
    b.problem.distribution = Distribution::Uniform;
    b.problem.sigma = 0.5;
    t.iter_tolerance = 2;
  }
  t.none_tolerance = 0.10;
  const std::vector<double> hs = {1.0 / 5, 1.0 / 10, 1.0 / 15, 1.0 / 20, 1.0 / 25, 1.0 / 30};
  if (name == "T1") {
    t.sweep_key = "N";
    t.sweep = {1, 2, 3, 4, 5, 6, 7, 8};
  } else if (name == "T2") {
    t.sweep_key = "P";
    t.sweep = {1, 2, 3, 4, 5, 6, 7, 8};
  } else if (name == "T3") {
    t.sweep_key = "sigma";
    t.sweep = {0.05, 0.15, 0.25, 0.35, 0.45, 0.55};
  } else if (name == "T4" || name == "T9") {
    t.sweep_key = "h";
    t.sweep = hs;
  } else if (name == "T6") {
    t.sweep_key = "N";
    t.sweep = {1, 2, 3, 4};
  } else if (name == "T7") {
    t.sweep_key = "P";
    t.sweep = {1, 2, 3, 4};
  } else if (name == "T8") {
    t.sweep_key = "cov";
    t.sweep = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  } else {
    throw std::invalid_argument("unknown table '" + name + "'");
  }
  return t;
}

bool iterations_within(const TableSpec& spec, PreconditionerKind kind, int measured, int reference) {
  if (kind == PreconditionerKind::None)
    return std::abs(measured - reference) <= spec.none_tolerance * reference;
  return std::abs(measured - reference) <= spec.iter_tolerance;
}

bool TableResult::within() const {
  for (const auto& r : rows)
    for (const auto& c : r.cells)
      if (!c.within) return false;
  return true;
}

bool TableResult::failed() const {
  for (const auto& r : rows)
    for (const auto& c : r.cells)
      if (c.failed) return true;
  return false;
}

namespace {

void apply_sweep(ExperimentConfig& cfg, const std::string& key, double v) {
  if (key == "N") cfg.problem.N = static_cast<int>(v);
  else if (key == "P") cfg.problem.P = static_cast<int>(v);
  else if (key == "sigma") cfg.problem.sigma = v;
  else if (key == "cov") cfg.problem.cov = v;
  else if (key == "h") cfg.problem.h = v;
}

}  // namespace

TableResult run_table(const std::string& name, const TableOptions& options) {
  TableResult out;
  out.spec = table_spec(name);
  const auto& spec = out.spec;
  const ReferenceTable* ref = reference_table(name);

  ExperimentConfig base = spec.base;
  if (options.overrides) {
    base.inner = options.overrides->inner;
    base.inner_tol_set = options.overrides->inner_tol_set;
    base.level_solve = options.overrides->level_solve;
    base.krylov = options.overrides->krylov;
    base.truncation = options.overrides->truncation;
    base.tol = options.overrides->tol;
    base.max_iter = options.overrides->max_iter;
    base.problem.n_quad = options.overrides->problem.n_quad;
  }

  for (std::size_t r = 0; r < spec.sweep.size(); ++r) {
    if (!options.rows.empty() &&
        std::find(options.rows.begin(), options.rows.end(), r + 1) == options.rows.end())
      continue;
    ExperimentConfig cfg = base;
    apply_sweep(cfg, spec.sweep_key, spec.sweep[r]);
    cfg.validate();
    const Problem pb = build_problem(cfg.problem);

    TableRowResult row;
    row.sweep = spec.sweep[r];
    row.ndof = pb.op->dim();
    if (ref && r < ref->rows.size()) row.reference_ndof = ref->rows[r].ndof;
    for (const auto kind : options.kinds) {
      cfg.preconditioner = kind;
      const auto res = run_on_problem(pb, cfg);
      TableCell cell;
      cell.kind = kind;
      cell.failed = res.failed;
      cell.iterations = res.report.iterations;
      cell.kappa = res.report.kappa_estimate;
      cell.converged = res.report.converged;
      cell.spd_suspect = res.report.spd_suspect;
      if (ref && r < ref->rows.size()) {
        cell.reference = ref->rows[r].cells[static_cast<std::size_t>(kind)];
        cell.within = !res.failed && res.report.converged &&
                      iterations_within(spec, kind, cell.iterations, cell.reference->iterations);
      } else {
        cell.within = !res.failed;
      }
      row.cells.push_back(cell);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_table_csv(std::ostream& os, const TableResult& t) {
  os << t.spec.sweep_key << ",ndof";
  if (!t.rows.empty())
    for (const auto& c : t.rows.front().cells) {
      const auto k = to_string(c.kind);
      os << ",iter_" << k << ",kappa_" << k << ",ref_iter_" << k << ",ref_kappa_" << k << ",diff_iter_" << k
         << ",kappa_rel_diff_" << k << ",converged_" << k << ",spd_suspect_" << k << ",within_" << k;
    }
  os << '\n';
  for (const auto& r : t.rows) {
    os << fmt(r.sweep, 10) << ',' << r.ndof;
    for (const auto& c : r.cells) {
      os << ',' << c.iterations << ',' << fmt(c.kappa, 8);
      if (c.reference) {
        os << ',' << c.reference->iterations << ',' << fmt(c.reference->kappa, 8) << ','
           << (c.iterations - c.reference->iterations) << ','
           << fmt((c.kappa - c.reference->kappa) / c.reference->kappa, 4);
      } else {
        os << ",,,,";
      }
      os << ',' << (c.converged ? 1 : 0) << ',' << (c.spd_suspect ? 1 : 0) << ',' << (c.within ? 1 : 0);
    }
    os << '\n';
  }
}

void write_table_markdown(std::ostream& os, const TableResult& t) {
  os << "## " << t.spec.name << " (sweep over " << t.spec.sweep_key << ")\n\n";
  os << "Entries are `measured (reference)`; `!` marks an iteration count outside tolerance "
     << "(preconditioned: +-" << t.spec.iter_tolerance << ", unpreconditioned: +-"
     << fmt(100 * t.spec.none_tolerance, 3) << "%).\n\n";
  os << "| " << t.spec.sweep_key << " | ndof |";
  if (!t.rows.empty())
    for (const auto& c : t.rows.front().cells) os << ' ' << to_string(c.kind) << " iter | " << to_string(c.kind) << " kappa |";
  os << "\n|---|---|";
  if (!t.rows.empty())
    for (std::size_t i = 0; i < t.rows.front().cells.size(); ++i) os << "---|---|";
  os << '\n';
  for (const auto& r : t.rows) {
    os << "| " << fmt(r.sweep, 6) << " | " << r.ndof << " |";
    for (const auto& c : r.cells) {
      os << ' ' << c.iterations;
      if (c.reference) os << " (" << c.reference->iterations << ")";
      if (!c.within) os << " !";
      if (c.failed) os << " failed";
      else if (!c.converged) os << " no-conv";
      os << " | " << fmt(c.kappa, 6);
      if (c.reference) os << " (" << fmt(c.reference->kappa, 6) << ")";
      os << " |";
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

std::vector<WorkCountRow> run_work_counts() {
  std::vector<WorkCountRow> rows;
  const auto& ref = reference_work_counts();
  for (int P = 1; P <= 8; ++P) {
    ProblemConfig pc;
    pc.N = 4;
    pc.P = P;
    pc.h = 0.5;
    const Problem pb = build_problem(pc);
    WorkCount w = work_count(*pb.op);
    HierarchicalSchurPreconditioner M(*pb.op, PreconditionerSetup{});
    std::vector<double> r(pb.op->dim(), 1.0), z(pb.op->dim());
    M.apply(r, z);
    w.n_m = M.last_matvecs();
    w.n_ds = M.last_solves();
    rows.push_back({P, w, ref[static_cast<std::size_t>(P - 1)]});
  }
  return rows;
}

void write_work_counts_csv(std::ostream& os, const std::vector<WorkCountRow>& rows) {
  os << "P,n_b,n_db,n_m,n_ds,ref_n_b,ref_n_db,ref_n_m,ref_n_ds,match\n";
  for (const auto& r : rows)
    os << r.P << ',' << r.measured.n_b << ',' << r.measured.n_db << ',' << r.measured.n_m << ','
       << r.measured.n_ds << ',' << r.reference.n_b << ',' << r.reference.n_db << ',' << r.reference.n_m
       << ',' << r.reference.n_ds << ',' << (r.matches() ? 1 : 0) << '\n';
}

void write_work_counts_markdown(std::ostream& os, const std::vector<WorkCountRow>& rows) {
  os << "## Work counts (N = 4)\n\n| P | n_b | n_db | n_m | n_ds | match |\n|---|---|---|---|---|---|\n";
  for (const auto& r : rows)
    os << "| " << r.P << " | " << r.measured.n_b << " | " << r.measured.n_db << " | " << r.measured.n_m
       << " | " << r.measured.n_ds << " | " << (r.matches() ? "yes" : "NO") << " |\n";
}

std::vector<double> dominant_eigenvalues(int count, double sigma, double corr_length, int n_quad) {
  const auto e1 = eig_1d_exponential(corr_length, n_quad, count);
  const auto modes = eig_2d_separable({sigma, corr_length}, e1, count);
  std::vector<double> out;
  for (const auto& m : modes) out.push_back(m.lambda);
  return out;
}

void write_eigenvalues_csv(std::ostream& os, const std::vector<double>& lambdas) {
  os << "index,lambda\n" << std::setprecision(17);
  for (std::size_t i = 0; i < lambdas.size(); ++i) os << (i + 1) << ',' << lambdas[i] << '\n';
}

void write_field_csv(std::ostream& os, const Problem& pb, int mode) {
  if (mode < 1 || mode > pb.kl.N) throw std::invalid_argument("write_field_csv: mode out of range");
  os << "node_x,node_y,k_" << mode << '\n' << std::setprecision(17);
  const auto& f = pb.kl.fields[static_cast<std::size_t>(mode - 1)];
  for (std::size_t n = 0; n < f.size(); ++n) os << pb.mesh.x[n] << ',' << pb.mesh.y[n] << ',' << f[n] << '\n';
}

}  // namespace sgfem
