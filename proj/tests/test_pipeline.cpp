#include <doctest.h>

#include "opus/pipeline.hpp"
#include "support/generators.hpp"

using namespace opus;

TEST_CASE("solver configuration rejects nonsense") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SolverConfig bad = cfg;
  bad.theta_step_deg = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.r_step = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.n_partitions = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.backend = TspBackend::Qaoa;
  bad.n_max = 5;  // 25 qubits over the simulator cap
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("cluster size caps default by backend") {
  SolverConfig cfg;
  CHECK(cfg.effective_n_max() == 8);
  cfg.backend = TspBackend::Qaoa;
  CHECK(cfg.effective_n_max() == 4);
  cfg.n_max = 3;
  CHECK(cfg.effective_n_max() == 3);
}

TEST_CASE("a single piece packs at its best orientation") {
  std::vector<Polygon> pieces{testsupport::rectangle(0, 0, 10, 4)};
  SolverConfig cfg;
  cfg.rotation_step_deg = 90.0;
  cfg.r_step = 0.5;
  cfg.theta_step_deg = 45.0;

  // too low to stand the piece upright: length stays 10
  SolveResult flat = solve(pieces, 4.5, cfg);
  CHECK(flat.layout.length() == doctest::Approx(10.0));
  CHECK(flat.report.waste_ratio < 0.15);

  // a tall strip admits the rotated piece: length 4
  SolveResult tall = solve(pieces, 10.0, cfg);
  CHECK(tall.layout.length() == doctest::Approx(4.0));
}

TEST_CASE("two unit squares tile a unit strip") {
  std::vector<Polygon> pieces{testsupport::unit_square(),
                              testsupport::rectangle(4, 4, 1, 1)};
  SolverConfig cfg;
  cfg.r_step = 0.05;
  cfg.theta_step_deg = 45.0;
  SolveResult r = solve(pieces, 1.0, cfg);
  CHECK(r.layout.length() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(r.report.waste_ratio == doctest::Approx(0.0).epsilon(0.01));
  CHECK(r.report.pieces == 2);
  CHECK(r.report.shape_classes == 1);
  CHECK(validate_layout(r.layout, 1e-9).empty());
}

TEST_CASE("solving is deterministic for a fixed seed") {
  std::vector<Polygon> pieces{testsupport::rectangle(0, 0, 2, 1),
                              testsupport::unit_square(),
                              Polygon({{0, 0}, {2, 0}, {1, 1}})};
  SolverConfig cfg;
  cfg.r_step = 0.25;
  cfg.theta_step_deg = 30.0;
  cfg.seed = 42;
  SolveResult a = solve(pieces, 2.0, cfg);
  SolveResult b = solve(pieces, 2.0, cfg);
  CHECK(a.layout.length() == b.layout.length());
  REQUIRE(a.layout.size() == b.layout.size());
  for (size_t i = 0; i < a.layout.size(); ++i) {
    CHECK(a.layout.pose(i).x == b.layout.pose(i).x);
    CHECK(a.layout.pose(i).y == b.layout.pose(i).y);
    CHECK(a.layout.pose(i).angle_deg == b.layout.pose(i).angle_deg);
  }
}

TEST_CASE("the qaoa backend produces a valid layout on a small instance") {
  std::vector<Polygon> pieces{testsupport::unit_square(),
                              testsupport::rectangle(3, 0, 1, 1),
                              testsupport::rectangle(0, 3, 1, 2)};
  SolverConfig cfg;
  cfg.backend = TspBackend::Qaoa;
  cfg.r_step = 0.2;
  cfg.theta_step_deg = 45.0;
  cfg.qaoa.reps = 2;
  cfg.qaoa.shots = 200;
  cfg.qaoa.max_evals = 60;
  SolveResult r = solve(pieces, 2.0, cfg);
  CHECK(validate_layout(r.layout, 1e-9).empty());
  CHECK(r.report.backend == "qaoa");
  CHECK(r.report.tsp_calls_qaoa + r.report.tsp_calls_brute > 0);
}

TEST_CASE("an oversized piece is infeasible") {
  std::vector<Polygon> pieces{testsupport::rectangle(0, 0, 3, 3)};
  SolverConfig cfg;
  CHECK_THROWS_AS(solve(pieces, 2.0, cfg), InfeasibleError);
}

TEST_CASE("the tuning study emits one row per optimizer with sane numbers") {
  TuneOptions opt;
  opt.instances = 3;
  opt.nodes = 3;
  opt.reps_min = 1;
  opt.reps_max = 2;
  opt.shots = 200;
  opt.max_evals = 50;
  opt.seed = 7;
  opt.baseline_samples = 200;
  opt.optimizers = {QaoaOptimizer::Coordinate, QaoaOptimizer::Spsa};
  std::vector<TuneRow> rows = tune_qaoa(opt);
  REQUIRE(rows.size() == 4);  // 2 optimizers x reps 1..2
  for (const TuneRow& r : rows) {
    CHECK(r.mean_optimality >= 0.0);
    CHECK(r.mean_optimality <= 1.0);
    CHECK(r.baseline_optimality > 0.0);
    CHECK(r.baseline_optimality < 1.0);
    CHECK(r.wall_s >= 0.0);
  }
  CHECK(rows[0].optimizer == "coordinate");
  CHECK(rows[0].reps == 1);
  CHECK(rows[1].reps == 2);
  CHECK(rows[2].optimizer == "spsa");
  // the baseline is seed-determined, identical across rows
  CHECK(rows[0].baseline_optimality == rows[3].baseline_optimality);
}
