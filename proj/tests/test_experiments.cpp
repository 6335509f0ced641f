#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "sgfem/experiments.hpp"

using namespace sgfem;

TEST_CASE("configuration parsing and overrides") {
  std::istringstream in(
      "# uniform run\n"
      "distribution = uniform\n"
      "N = 3   # modes\n"
      "P=2\n"
      "h = 1/8\n"
      "preconditioner = bgs\n"
      "inner = cg-diag\n"
      "krylov = fcg\n"
      "\n");
  ExperimentConfig cfg;
  parse_config(in, cfg);
  CHECK(cfg.problem.N == 3);
  CHECK(cfg.problem.P == 2);
  CHECK(cfg.problem.h == doctest::Approx(0.125));
  CHECK(cfg.preconditioner == PreconditionerKind::BlockSgs);
  CHECK(cfg.inner.m0 == InnerSolver::Precond::Diagonal);
  CHECK(cfg.krylov == KrylovKind::Fcg);
  CHECK(cfg.setup().inner.tol == cfg.tol);

  cfg.set("N", "5");
  cfg.set("inner_tol", "1e-12");
  CHECK(cfg.problem.N == 5);
  CHECK(cfg.setup().inner.tol == 1e-12);
  CHECK(cfg.to_map().at("N") == "5");
  for (const auto& key : config_keys()) CHECK(cfg.to_map().count(key) == 1);

  CHECK_THROWS_AS(cfg.set("frobnicate", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("N", "four"), std::invalid_argument);
  std::istringstream bad("N 4\n");
  CHECK_THROWS_AS(parse_config(bad, cfg), std::invalid_argument);

  cfg.set("N", "0");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.set("N", "2");
  cfg.set("h", "0.3");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("degrees of freedom") {
  CHECK(global_dofs(4, 4, 0.2) == 2520);
  CHECK(global_dofs(4, 4, 0.1) == 8470);
  ExperimentConfig cfg;
  cfg.problem.h = 0.2;
  cfg.problem.N = 4;
  cfg.problem.P = 4;
  const auto res = run_experiment(cfg);
  CHECK(res.ndof == 2520);
  CHECK_FALSE(res.failed);
  CHECK(res.report.converged);
}

TEST_CASE("table rows are reproducible") {
  TableOptions opts;
  opts.rows = {1};
  opts.kinds = {PreconditionerKind::Mean, PreconditionerKind::HierarchicalSchur};
  const auto a = run_table("T1", opts), b = run_table("T1", opts);
  std::ostringstream sa, sb;
  write_table_csv(sa, a);
  write_table_csv(sb, b);
  CHECK(sa.str() == sb.str());
  REQUIRE(a.rows.size() == 1);
  CHECK(a.rows[0].reference_ndof.has_value());
  CHECK(a.rows[0].ndof == *a.rows[0].reference_ndof);
  CHECK_FALSE(a.failed());

  std::ostringstream md;
  write_table_markdown(md, a);
  CHECK(md.str().find('|') != std::string::npos);
  CHECK_THROWS(table_spec("T42"));
}

TEST_CASE("tolerance rules") {
  const auto t1 = table_spec("T1"), t6 = table_spec("T6");
  CHECK(iterations_within(t1, PreconditionerKind::Mean, 17, 15));
  CHECK_FALSE(iterations_within(t1, PreconditionerKind::Mean, 18, 15));
  CHECK(iterations_within(t6, PreconditionerKind::HierarchicalSchur, 18, 15));
  CHECK_FALSE(iterations_within(t6, PreconditionerKind::HierarchicalSchur, 19, 15));
  CHECK(iterations_within(t1, PreconditionerKind::None, 110, 100));
  CHECK_FALSE(iterations_within(t1, PreconditionerKind::None, 111, 100));
}

TEST_CASE("work counts and eigenvalue export") {
  const auto rows = run_work_counts();
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) CHECK(r.matches());
  std::ostringstream csv;
  write_work_counts_csv(csv, rows);
  CHECK(csv.str().rfind("P,", 0) == 0);

  const auto l = dominant_eigenvalues();
  REQUIRE(l.size() == 15);
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] <= l[i - 1]);
  std::ostringstream e;
  write_eigenvalues_csv(e, l);
  CHECK(e.str().rfind("index,lambda\n1,", 0) == 0);
}
