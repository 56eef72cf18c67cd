#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "opus_incertum.h"

namespace {

constexpr size_t kErrLen = 1024;

void print_error(oi_status s, const char* msg) {
  std::string m = msg ? msg : "";
  std::string escaped;
  for (char c : m) {
    switch (c) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      default: escaped += c;
    }
  }
  std::fprintf(stderr, "{\"category\": \"%s\", \"message\": \"%s\"}\n", oi_status_name(s),
               escaped.c_str());
}

struct InstanceHandle {
  oi_instance* p = nullptr;
  ~InstanceHandle() { oi_instance_free(p); }
};

struct SolutionHandle {
  oi_solution* p = nullptr;
  ~SolutionHandle() { oi_solution_free(p); }
};

struct StringHandle {
  char* p = nullptr;
  ~StringHandle() { oi_string_free(p); }
};

struct SolveArgs {
  std::string instance;
  std::string tsp = "brute";
  std::string optimizer = "coordinate";
  std::string out_svg;
  std::string out_report;
  std::string cache_dir;
  oi_solve_options opt{};
};

int run_solve(const SolveArgs& a) {
  char err[kErrLen] = {0};

  InstanceHandle inst;
  oi_status s = oi_instance_from_file(a.instance.c_str(), &inst.p, err, kErrLen);
  if (s != OI_OK) {
    print_error(s, err);
    return 2;
  }

  oi_solve_options opt = a.opt;
  opt.use_qaoa = a.tsp == "qaoa" ? 1 : 0;
  opt.qaoa_optimizer = a.optimizer == "nelder-mead" ? 1 : a.optimizer == "spsa" ? 2 : 0;
  std::string cache = a.cache_dir;
  if (cache.empty()) {
    const char* env = std::getenv("OPUS_CACHE_DIR");
    if (env) cache = env;
  }
  opt.cache_dir = cache.empty() ? nullptr : cache.c_str();

  SolutionHandle sol;
  s = oi_solve(inst.p, &opt, &sol.p, err, kErrLen);
  if (s != OI_OK) {
    print_error(s, err);
    return 2;
  }

  if (!a.out_svg.empty()) {
    s = oi_solution_write_svg(sol.p, a.out_svg.c_str(), err, kErrLen);
    if (s != OI_OK) {
      print_error(s, err);
      return 2;
    }
  }
  if (!a.out_report.empty()) {
    s = oi_solution_write_report(sol.p, a.out_report.c_str(), err, kErrLen);
    if (s != OI_OK) {
      print_error(s, err);
      return 2;
    }
  }

  int violations = oi_solution_violations(sol.p);
  std::printf("instance=%s pieces=%d length=%.3f height=%.3f waste=%.4f%% valid=%s\n",
              oi_instance_name(inst.p), oi_solution_piece_count(sol.p),
              oi_solution_length(sol.p), oi_solution_height(sol.p),
              oi_solution_waste_ratio(sol.p) * 100.0, violations == 0 ? "yes" : "no");
  return violations == 0 ? 0 : 1;
}

struct TuneArgs {
  std::string out;
  std::string optimizer = "coordinate";
  oi_tune_options opt{};
};

int run_tune(const TuneArgs& a) {
  char err[kErrLen] = {0};
  oi_tune_options opt = a.opt;
  if (a.optimizer == "coordinate") opt.optimizer = 0;
  else if (a.optimizer == "nelder-mead") opt.optimizer = 1;
  else if (a.optimizer == "spsa") opt.optimizer = 2;
  else opt.optimizer = 3;

  StringHandle json;
  oi_status s = oi_tune_qaoa(&opt, &json.p, err, kErrLen);
  if (s != OI_OK) {
    print_error(s, err);
    return 2;
  }
  std::printf("%s", json.p);
  if (!a.out.empty()) {
    std::FILE* f = std::fopen(a.out.c_str(), "w");
    if (!f) {
      print_error(OI_ERR_IO, ("cannot write " + a.out).c_str());
      return 2;
    }
    std::fputs(json.p, f);
    std::fclose(f);
  }
  return 0;
}

struct NffArgs {
  std::string instance;
  std::string pair;
  std::string out;
  oi_solve_options opt{};
};

int run_nff(const NffArgs& a) {
  char err[kErrLen] = {0};
  int pa = -1, pb = -1;
  if (std::sscanf(a.pair.c_str(), "%d,%d", &pa, &pb) != 2) {
    print_error(OI_ERR_INVALID_ARGUMENT, "--pair expects two indices as i,j");
    return 2;
  }

  InstanceHandle inst;
  oi_status s = oi_instance_from_file(a.instance.c_str(), &inst.p, err, kErrLen);
  if (s != OI_OK) {
    print_error(s, err);
    return 2;
  }

  StringHandle json;
  s = oi_nff_table_json(inst.p, pa, pb, &a.opt, &json.p, err, kErrLen);
  if (s != OI_OK) {
    print_error(s, err);
    return 2;
  }
  if (a.out.empty()) {
    std::printf("%s", json.p);
  } else {
    std::FILE* f = std::fopen(a.out.c_str(), "w");
    if (!f) {
      print_error(OI_ERR_IO, ("cannot write " + a.out).c_str());
      return 2;
    }
    std::fputs(json.p, f);
    std::fclose(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strip packing of irregular polygons"};
  app.require_subcommand(1);

  SolveArgs sa;
  oi_solve_options_init(&sa.opt);
  CLI::App* solve = app.add_subcommand("solve", "Pack an instance into its strip");
  solve->add_option("--instance", sa.instance, "Instance JSON file")->required();
  solve->add_option("--tsp", sa.tsp, "Path search backend")
      ->check(CLI::IsMember({"brute", "qaoa"}));
  solve->add_option("--reps", sa.opt.qaoa_reps, "QAOA layer count");
  solve->add_option("--shots", sa.opt.qaoa_shots, "QAOA samples");
  solve->add_option("--rotation-step", sa.opt.rotation_step_deg,
                    "Orientation step in degrees (default: instance value)");
  solve->add_option("--delta-r", sa.opt.delta_r, "Radial step");
  solve->add_option("--max-cluster", sa.opt.max_cluster, "Cluster size cap (0 = default)");
  solve->add_option("--partitions", sa.opt.n_partitions, "Partitions kept");
  solve->add_option("--seed", sa.opt.seed, "Random seed");
  solve->add_option("--workers", sa.opt.workers, "Worker threads");
  solve->add_option("--out-svg", sa.out_svg, "Write the layout as SVG");
  solve->add_option("--out-report", sa.out_report, "Write the result JSON");
  solve->add_option("--theta-step", sa.opt.theta_step_deg, "Orbit angle step");
  solve->add_option("--grid", sa.opt.grid_divisions, "Relocation grid divisions");
  solve->add_option("--max-evals", sa.opt.qaoa_max_evals, "Optimizer evaluation cap");
  solve->add_option("--optimizer", sa.optimizer, "QAOA optimizer")
      ->check(CLI::IsMember({"coordinate", "nelder-mead", "spsa"}));
  solve->add_option("--qaoa-min-size", sa.opt.qaoa_min_size,
                    "Smallest cluster handled by QAOA");
  solve->add_option("--relax-cap", sa.opt.relaxation_cap, "Max relaxation steps");
  solve->add_option("--r-max", sa.opt.r_max, "Orbit radius cap (0 = automatic)");
  solve->add_option("--cache-dir", sa.cache_dir,
                    "No-fit table cache directory (default: $OPUS_CACHE_DIR)");
  solve->add_flag("--literal-stop", sa.opt.literal_stop_clustering,
                  "Stop clustering at the first inadmissible merge");

  TuneArgs ta;
  oi_tune_options_init(&ta.opt);
  CLI::App* tune = app.add_subcommand("tune-qaoa", "QAOA parameter study on random instances");
  tune->add_option("--instances", ta.opt.instances, "Random instances");
  tune->add_option("--nodes", ta.opt.nodes, "Nodes per instance");
  tune->add_option("--reps-min", ta.opt.reps_min, "Smallest layer count");
  tune->add_option("--reps-max", ta.opt.reps_max, "Largest layer count");
  tune->add_option("--shots", ta.opt.shots, "Samples per round");
  tune->add_option("--max-evals", ta.opt.max_evals, "Optimizer evaluation cap");
  tune->add_option("--seed", ta.opt.seed, "Random seed");
  tune->add_option("--optimizer", ta.optimizer, "Optimizer to study")
      ->check(CLI::IsMember({"coordinate", "nelder-mead", "spsa", "all"}));
  tune->add_option("--out", ta.out, "Write the table as JSON");

  NffArgs na;
  oi_solve_options_init(&na.opt);
  CLI::App* nff = app.add_subcommand("nff", "Dump the no-fit table of a piece pair");
  nff->add_option("--instance", na.instance, "Instance JSON file")->required();
  nff->add_option("--pair", na.pair, "Piece indices as i,j")->required();
  nff->add_option("--theta-step", na.opt.theta_step_deg, "Orbit angle step");
  nff->add_option("--rotation-step", na.opt.rotation_step_deg,
                  "Orientation step in degrees (default: instance value)");
  nff->add_option("--delta-r", na.opt.delta_r, "Radial step");
  nff->add_option("--r-max", na.opt.r_max, "Orbit radius cap (0 = automatic)");
  nff->add_option("--out", na.out, "Write the table as JSON");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return run_solve(sa);
  if (tune->parsed()) return run_tune(ta);
  return run_nff(na);
}
