// Command-line front end: convergence tables, single runs, the spectral
// diagnostic and data exports.
//
// Exit codes: 0 success, 1 solver or input error, 2 reference mismatch.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgfem/experiments.hpp"
#include "sgfem/preconditioners.hpp"
#include "sgfem/simd/kernels.hpp"
#include "sgfem/spectral_diagnostic.hpp"

namespace fs = std::filesystem;
using namespace sgfem;

namespace {

constexpr int kOk = 0;
constexpr int kSolverError = 1;
constexpr int kReferenceMismatch = 2;

struct KeyFlags {
  std::map<std::string, std::string> values;
  std::string config_file;

  void attach(CLI::App* app) {
    app->set_help_flag("--help", "Print this help message and exit");  // -h is the mesh width
    app->add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
    for (const auto& key : config_keys())
      app->add_option("--" + key, values[key], "override '" + key + "'")->group("Configuration");
  }

  ExperimentConfig build(ExperimentConfig cfg = {}) const {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      parse_config(in, cfg);
    }
    for (const auto& [k, v] : values)
      if (!v.empty()) cfg.set(k, v);
    cfg.validate();
    return cfg;
  }
};

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
  return os;
}

std::vector<std::size_t> parse_rows(const std::string& s) {
  std::vector<std::size_t> rows;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) rows.push_back(static_cast<std::size_t>(std::stoul(item)));
  return rows;
}

std::vector<PreconditionerKind> parse_kinds(const std::string& s) {
  std::vector<PreconditionerKind> kinds;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) kinds.push_back(parse_preconditioner(item));
  return kinds;
}

int run_table_command(const std::string& name, const fs::path& out, const TableOptions& opts) {
  if (name == "T5" || name == "work_counts") {
    const auto rows = run_work_counts();
    write_work_counts_markdown(std::cout, rows);
    if (!out.empty()) {
      auto csv = open_out(out / "work_counts.csv");
      write_work_counts_csv(csv, rows);
      auto md = open_out(out / "work_counts.md");
      write_work_counts_markdown(md, rows);
    }
    for (const auto& r : rows)
      if (!r.matches()) return kReferenceMismatch;
    return kOk;
  }
  if (name == "eigs") {
    const auto lambdas = dominant_eigenvalues();
    write_eigenvalues_csv(std::cout, lambdas);
    if (!out.empty()) {
      auto csv = open_out(out / "eigs.csv");
      write_eigenvalues_csv(csv, lambdas);
    }
    return kOk;
  }
  const TableResult t = run_table(name, opts);
  write_table_markdown(std::cout, t);
  if (!out.empty()) {
    auto csv = open_out(out / (name + ".csv"));
    write_table_csv(csv, t);
    auto md = open_out(out / (name + ".md"));
    write_table_markdown(md, t);
  }
  if (t.failed()) return kSolverError;
  return t.within() ? kOk : kReferenceMismatch;
}

int run_single(const ExperimentConfig& cfg, const fs::path& out) {
  const ExperimentResult res = run_experiment(cfg);
  if (res.failed) {
    std::cerr << "solver error: " << res.error << '\n';
    return kSolverError;
  }
  const auto& r = res.report;
  std::cout << "ndof " << res.ndof << "\npreconditioner " << to_string(cfg.preconditioner)
            << "\nkrylov " << to_string(cfg.krylov) << "\niterations " << r.iterations << "\nkappa "
            << r.kappa_estimate << "\nrelres " << r.final_relres << "\nconverged " << r.converged
            << "\nspd_suspect " << r.spd_suspect << "\nn_b " << r.work.n_b << "\nn_db " << r.work.n_db
            << "\nn_m " << r.work.n_m << "\nn_ds " << r.work.n_ds << '\n';
  if (!out.empty()) {
    auto hist = open_out(out / "residuals.csv");
    write_residual_history(hist, r);
    auto summary = open_out(out / "result.csv");
    summary << "ndof,preconditioner,krylov,iterations,kappa,relres,converged,spd_suspect,n_b,n_db,n_m,n_ds\n"
            << std::setprecision(10) << res.ndof << ',' << to_string(cfg.preconditioner) << ','
            << to_string(cfg.krylov) << ',' << r.iterations << ',' << r.kappa_estimate << ','
            << r.final_relres << ',' << r.converged << ',' << r.spd_suspect << ',' << r.work.n_b << ','
            << r.work.n_db << ',' << r.work.n_m << ',' << r.work.n_ds << '\n';
    auto used = open_out(out / "config.txt");
    for (const auto& [k, v] : cfg.to_map()) used << k << " = " << v << '\n';
  }
  return r.converged ? kOk : kSolverError;
}

int run_diag(const ExperimentConfig& cfg) {
  const Problem pb = build_problem(cfg.problem);
  const SpectralReport rep = spectral_diagnostic(*pb.op, cfg.setup());
  std::cout << "level,c1,c2,ratio\n" << std::setprecision(10);
  for (const auto& l : rep.levels) std::cout << l.level << ',' << l.c1 << ',' << l.c2 << ',' << l.c2 / l.c1 << '\n';
  std::cout << "bound " << rep.bound << "\nkappa " << rep.kappa << "\nholds " << rep.holds << '\n';
  return rep.holds ? kOk : kReferenceMismatch;
}

int run_export(const ExperimentConfig& cfg, const std::string& what, int mode, int block,
               const fs::path& out) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    file = open_out(out);
    os = &file;
  }
  if (what == "eigs") {
    write_eigenvalues_csv(*os, dominant_eigenvalues(15, cfg.problem.sigma > 0 ? cfg.problem.sigma : 1.0,
                                                    cfg.problem.corr_length, cfg.problem.n_quad));
    return kOk;
  }
  const Problem pb = build_problem(cfg.problem);
  if (what == "tensor") {
    pb.op->tensor().write_entries(*os);
  } else if (what == "pattern") {
    pb.op->tensor().write_block_pattern(*os);
  } else if (what == "fields") {
    write_field_csv(*os, pb, mode);
  } else if (what == "matrix") {
    if (block < 0 || static_cast<std::size_t>(block) >= pb.op->stiffness().size())
      throw std::invalid_argument("--block out of range");
    pb.op->stiffness()[static_cast<std::size_t>(block)].write_coordinate(*os);
  } else {
    throw std::invalid_argument("unknown export '" + what + "'");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Galerkin FEM solver with hierarchical Schur complement preconditioning"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a table or a single configured solve");
  KeyFlags run_flags;
  run_flags.attach(run);
  std::string table, rows, kinds, out;
  run->add_option("--table", table, "T1-T4, T5 (work counts), T6-T9, eigs, or all");
  run->add_option("--out", out, "output directory");
  run->add_option("--rows", rows, "comma-separated 1-based row positions of the table");
  run->add_option("--preconditioners", kinds, "comma-separated subset of none,mean,bgs,hs");

  auto* diag = app.add_subcommand("diag", "Dense spectral-equivalence diagnostic (small problems)");
  KeyFlags diag_flags;
  diag_flags.attach(diag);
  bool spectral = false;
  diag->add_flag("--spectral", spectral, "level constants and condition bound");

  auto* exp = app.add_subcommand("export", "Export tensor, block pattern, eigenvalues, fields or matrices");
  KeyFlags exp_flags;
  exp_flags.attach(exp);
  std::string what, exp_out;
  int mode = 1, block = 0;
  exp->add_option("--what", what, "tensor | pattern | eigs | fields | matrix")->required();
  exp->add_option("--mode", mode, "KL mode for fields (1-based)");
  exp->add_option("--block", block, "stiffness index for matrix");
  exp->add_option("--out", exp_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::cerr << "kernels: " << simd::active().name << '\n';
    if (*run) {
      if (table.empty()) return run_single(run_flags.build(), out);
      TableOptions opts;
      if (!rows.empty()) opts.rows = parse_rows(rows);
      if (!kinds.empty()) opts.kinds = parse_kinds(kinds);
      opts.overrides = run_flags.build();
      if (table != "all") return run_table_command(table, out, opts);
      int code = kOk;
      for (const std::string t : {"T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "eigs"}) {
        const int c = run_table_command(t, out, opts);
        if (c == kSolverError) code = kSolverError;
        else if (c == kReferenceMismatch && code == kOk) code = kReferenceMismatch;
      }
      return code;
    }
    if (*diag) {
      ExperimentConfig base;
      base.problem.N = 2;
      base.problem.P = 2;
      base.problem.h = 0.25;
      if (!spectral) throw std::invalid_argument("diag: only --spectral is available");
      return run_diag(diag_flags.build(base));
    }
    if (*exp) return run_export(exp_flags.build(), what, mode, block, exp_out);
  } catch (const InnerSolveError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
  return kOk;
}
