#include "opus_incertum.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "opus/errors.hpp"
#include "opus/instance.hpp"
#include "opus/pipeline.hpp"
#include "opus/report.hpp"
#include "opus/svg.hpp"

struct oi_instance {
  opus::Instance inst;
};

struct oi_solution {
  opus::SolveResult result;
  opus::SolverConfig cfg;
  std::string instance_name;
  int violation_count = 0;
};

namespace {

void fill_err(char* errbuf, size_t errlen, const std::string& msg) {
  if (!errbuf || errlen == 0) return;
  size_t n = std::min(msg.size(), errlen - 1);
  std::memcpy(errbuf, msg.data(), n);
  errbuf[n] = '\0';
}

oi_status status_of(opus::ErrorCategory c) {
  using opus::ErrorCategory;
  switch (c) {
    case ErrorCategory::InvalidArgument: return OI_ERR_INVALID_ARGUMENT;
    case ErrorCategory::Parse: return OI_ERR_PARSE;
    case ErrorCategory::Geometry: return OI_ERR_GEOMETRY;
    case ErrorCategory::Config: return OI_ERR_CONFIG;
    case ErrorCategory::Infeasible: return OI_ERR_INFEASIBLE;
    case ErrorCategory::Limit: return OI_ERR_LIMIT;
    case ErrorCategory::Io: return OI_ERR_IO;
    case ErrorCategory::Internal: return OI_ERR_INTERNAL;
  }
  return OI_ERR_INTERNAL;
}

template <typename Fn>
oi_status guarded(char* errbuf, size_t errlen, Fn&& fn) {
  try {
    return fn();
  } catch (const opus::Error& e) {
    fill_err(errbuf, errlen, e.what());
    return status_of(e.category());
  } catch (const std::exception& e) {
    fill_err(errbuf, errlen, e.what());
    return OI_ERR_INTERNAL;
  } catch (...) {
    fill_err(errbuf, errlen, "unknown error");
    return OI_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

opus::SolverConfig to_config(const oi_solve_options& o, const opus::Instance& inst) {
  opus::SolverConfig cfg;
  cfg.theta_step_deg = o.theta_step_deg;
  cfg.rotation_step_deg =
      o.rotation_step_deg > 0.0 ? o.rotation_step_deg : inst.rotation_step_deg.value_or(90.0);
  cfg.r_step = o.delta_r;
  cfg.r_max = o.r_max;
  cfg.n_max = o.max_cluster;
  cfg.n_partitions = o.n_partitions;
  cfg.literal_stop_clustering = o.literal_stop_clustering != 0;
  cfg.backend = o.use_qaoa ? opus::TspBackend::Qaoa : opus::TspBackend::Brute;
  cfg.qaoa.reps = o.qaoa_reps;
  cfg.qaoa.shots = o.qaoa_shots;
  cfg.qaoa.max_evals = o.qaoa_max_evals;
  cfg.qaoa.optimizer = o.qaoa_optimizer == 1   ? opus::QaoaOptimizer::NelderMead
                       : o.qaoa_optimizer == 2 ? opus::QaoaOptimizer::Spsa
                                               : opus::QaoaOptimizer::Coordinate;
  cfg.qaoa.seed = o.seed;
  cfg.qaoa_min_size = o.qaoa_min_size;
  cfg.grid_divisions = o.grid_divisions;
  cfg.relaxation_cap = o.relaxation_cap;
  cfg.workers = o.workers;
  cfg.seed = o.seed;
  if (o.cache_dir) cfg.cache_dir = o.cache_dir;
  return cfg;
}

}  // namespace

extern "C" {

const char* oi_status_name(oi_status s) {
  switch (s) {
    case OI_OK: return "ok";
    case OI_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case OI_ERR_PARSE: return "parse";
    case OI_ERR_GEOMETRY: return "geometry";
    case OI_ERR_CONFIG: return "config";
    case OI_ERR_INFEASIBLE: return "infeasible";
    case OI_ERR_LIMIT: return "limit";
    case OI_ERR_IO: return "io";
    case OI_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* oi_version(void) { return "0.1.0"; }

oi_status oi_instance_from_json(const char* json_text, oi_instance** out, char* errbuf,
                                size_t errlen) {
  if (!json_text || !out) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errlen, [&] {
    auto inst = std::make_unique<oi_instance>();
    inst->inst = opus::parse_instance(json_text);
    *out = inst.release();
    return OI_OK;
  });
}

oi_status oi_instance_from_file(const char* path, oi_instance** out, char* errbuf, size_t errlen) {
  if (!path || !out) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errlen, [&] {
    auto inst = std::make_unique<oi_instance>();
    inst->inst = opus::load_instance(path);
    *out = inst.release();
    return OI_OK;
  });
}

void oi_instance_free(oi_instance* inst) { delete inst; }

int oi_instance_piece_count(const oi_instance* inst) {
  if (!inst) return 0;
  int n = 0;
  for (const auto& p : inst->inst.pieces) n += p.count;
  return n;
}

double oi_instance_height(const oi_instance* inst) { return inst ? inst->inst.height : 0.0; }

double oi_instance_rotation_step(const oi_instance* inst) {
  return inst && inst->inst.rotation_step_deg ? *inst->inst.rotation_step_deg : 0.0;
}

const char* oi_instance_name(const oi_instance* inst) {
  return inst ? inst->inst.name.c_str() : "";
}

void oi_solve_options_init(oi_solve_options* opt) {
  if (!opt) return;
  opus::SolverConfig d;
  opt->theta_step_deg = d.theta_step_deg;
  opt->rotation_step_deg = 0.0;
  opt->delta_r = d.r_step;
  opt->r_max = d.r_max;
  opt->max_cluster = 0;
  opt->n_partitions = d.n_partitions;
  opt->use_qaoa = 0;
  opt->qaoa_reps = d.qaoa.reps;
  opt->qaoa_shots = d.qaoa.shots;
  opt->qaoa_max_evals = d.qaoa.max_evals;
  opt->qaoa_optimizer = 0;
  opt->qaoa_min_size = d.qaoa_min_size;
  opt->grid_divisions = d.grid_divisions;
  opt->relaxation_cap = d.relaxation_cap;
  opt->workers = d.workers;
  opt->literal_stop_clustering = 0;
  opt->seed = d.seed;
  opt->cache_dir = nullptr;
}

oi_status oi_solve(const oi_instance* inst, const oi_solve_options* opt, oi_solution** out,
                   char* errbuf, size_t errlen) {
  if (!inst || !opt || !out) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errlen, [&] {
    opus::SolverConfig cfg = to_config(*opt, inst->inst);
    std::vector<opus::Polygon> pieces = inst->inst.expand();
    opus::SolveResult result = opus::solve(pieces, inst->inst.height, cfg);

    auto sol = std::make_unique<oi_solution>(
        oi_solution{std::move(result), cfg, inst->inst.name, 0});
    double min_area = pieces[0].area();
    for (const auto& p : pieces) min_area = std::min(min_area, p.area());
    sol->violation_count = static_cast<int>(
        opus::validate_layout(sol->result.layout, cfg.eps_scale * min_area).size());
    *out = sol.release();
    return OI_OK;
  });
}

double oi_solution_length(const oi_solution* sol) {
  return sol ? sol->result.report.best_length : 0.0;
}

double oi_solution_height(const oi_solution* sol) { return sol ? sol->result.report.height : 0.0; }

double oi_solution_waste_ratio(const oi_solution* sol) {
  return sol ? sol->result.report.waste_ratio : 0.0;
}

int oi_solution_piece_count(const oi_solution* sol) {
  return sol ? static_cast<int>(sol->result.layout.size()) : 0;
}

oi_status oi_solution_pose(const oi_solution* sol, int piece, double* x, double* y,
                           double* angle_deg) {
  if (!sol || piece < 0 || piece >= static_cast<int>(sol->result.layout.size()))
    return OI_ERR_INVALID_ARGUMENT;
  const opus::Pose& p = sol->result.layout.pose(static_cast<size_t>(piece));
  if (x) *x = p.x;
  if (y) *y = p.y;
  if (angle_deg) *angle_deg = p.angle_deg;
  return OI_OK;
}

int oi_solution_violations(const oi_solution* sol) { return sol ? sol->violation_count : -1; }

oi_status oi_solution_write_svg(const oi_solution* sol, const char* path, char* errbuf,
                                size_t errlen) {
  if (!sol || !path) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errlen, [&] {
    opus::write_svg(path, sol->result.layout, sol->result.report.waste_ratio);
    return OI_OK;
  });
}

oi_status oi_solution_write_report(const oi_solution* sol, const char* path, char* errbuf,
                                   size_t errlen) {
  if (!sol || !path) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errlen, [&] {
    opus::write_text_file(path,
                          opus::report_to_json(sol->result, sol->cfg, sol->instance_name));
    return OI_OK;
  });
}

oi_status oi_solution_report_json(const oi_solution* sol, char** out_json, char* errbuf,
                                  size_t errlen) {
  if (!sol || !out_json) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  *out_json = nullptr;
  return guarded(errbuf, errlen, [&] {
    std::string text = opus::report_to_json(sol->result, sol->cfg, sol->instance_name);
    *out_json = dup_string(text);
    if (!*out_json) {
      fill_err(errbuf, errlen, "out of memory");
      return OI_ERR_INTERNAL;
    }
    return OI_OK;
  });
}

void oi_solution_free(oi_solution* sol) { delete sol; }

void oi_tune_options_init(oi_tune_options* opt) {
  if (!opt) return;
  opus::TuneOptions d;
  opt->instances = d.instances;
  opt->nodes = d.nodes;
  opt->reps_min = d.reps_min;
  opt->reps_max = d.reps_max;
  opt->shots = d.shots;
  opt->max_evals = d.max_evals;
  opt->seed = d.seed;
  opt->optimizer = 0;
}

oi_status oi_tune_qaoa(const oi_tune_options* opt, char** out_json, char* errbuf, size_t errlen) {
  if (!opt || !out_json) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  *out_json = nullptr;
  return guarded(errbuf, errlen, [&] {
    opus::TuneOptions topt;
    topt.instances = opt->instances;
    topt.nodes = opt->nodes;
    topt.reps_min = opt->reps_min;
    topt.reps_max = opt->reps_max;
    topt.shots = opt->shots;
    topt.max_evals = opt->max_evals;
    topt.seed = opt->seed;
    switch (opt->optimizer) {
      case 0: topt.optimizers = {opus::QaoaOptimizer::Coordinate}; break;
      case 1: topt.optimizers = {opus::QaoaOptimizer::NelderMead}; break;
      case 2: topt.optimizers = {opus::QaoaOptimizer::Spsa}; break;
      case 3:
        topt.optimizers = {opus::QaoaOptimizer::Coordinate, opus::QaoaOptimizer::NelderMead,
                           opus::QaoaOptimizer::Spsa};
        break;
      default: throw opus::ConfigError("optimizer must be 0, 1, 2 or 3");
    }
    std::vector<opus::TuneRow> rows = opus::tune_qaoa(topt);
    *out_json = dup_string(opus::tune_rows_to_json(rows, topt));
    if (!*out_json) {
      fill_err(errbuf, errlen, "out of memory");
      return OI_ERR_INTERNAL;
    }
    return OI_OK;
  });
}

oi_status oi_nff_table_json(const oi_instance* inst, int piece_a, int piece_b,
                            const oi_solve_options* opt, char** out_json, char* errbuf,
                            size_t errlen) {
  if (!inst || !opt || !out_json) {
    fill_err(errbuf, errlen, "null argument");
    return OI_ERR_INVALID_ARGUMENT;
  }
  *out_json = nullptr;
  {
    int n = static_cast<int>(inst->inst.expand().size());
    if (piece_a < 0 || piece_a >= n || piece_b < 0 || piece_b >= n) {
      fill_err(errbuf, errlen, "piece index out of range");
      return OI_ERR_INVALID_ARGUMENT;
    }
  }
  return guarded(errbuf, errlen, [&] {
    std::vector<opus::Polygon> pieces = inst->inst.expand();
    opus::SolverConfig cfg = to_config(*opt, inst->inst);
    double min_area = pieces[0].area();
    for (const auto& p : pieces) min_area = std::min(min_area, p.area());
    opus::DiscretizationConfig disc = cfg.discretization(min_area);
    disc.validate();
    opus::NoFitTable table = opus::compute_nff(pieces[static_cast<size_t>(piece_a)],
                                               pieces[static_cast<size_t>(piece_b)], disc);

    nlohmann::json root;
    root["piece_a"] = piece_a;
    root["piece_b"] = piece_b;
    root["theta_step_deg"] = cfg.theta_step_deg;
    root["rotation_step_deg"] = cfg.rotation_step_deg;
    root["delta_r"] = cfg.r_step;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : table.entries) {
      entries.push_back({{"theta_deg", e.theta_deg},
                         {"r", e.r},
                         {"phi_deg", e.phi_deg},
                         {"hull_area", e.hull_area}});
    }
    root["entries"] = std::move(entries);
    *out_json = dup_string(root.dump(2) + "\n");
    if (!*out_json) {
      fill_err(errbuf, errlen, "out of memory");
      return OI_ERR_INTERNAL;
    }
    return OI_OK;
  });
}

void oi_string_free(char* s) { std::free(s); }

}  // extern "C"
