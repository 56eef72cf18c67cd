#include "opus/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opus/errors.hpp"

namespace opus {

using nlohmann::json;

namespace {
constexpr int kSchemaVersion = 1;
}

std::string report_to_json(const SolveResult& result, const SolverConfig& cfg,
                           const std::string& instance_name) {
  const SolveReport& r = result.report;
  json root;
  root["schema_version"] = kSchemaVersion;
  root["instance"] = instance_name;
  root["best_length"] = r.best_length;
  root["height"] = r.height;
  root["waste_area"] = r.waste_area;
  root["waste_ratio"] = r.waste_ratio;
  root["waste_percent"] = r.waste_ratio * 100.0;
  root["pieces"] = r.pieces;
  root["shape_classes"] = r.shape_classes;
  root["backend"] = r.backend;
  root["seed"] = r.seed;

  json counters;
  counters["partitions_generated"] = r.partitions_generated;
  counters["partitions_kept"] = r.partitions_kept;
  counters["partitions_improved"] = r.partitions_improved;
  counters["tsp_calls_brute"] = r.tsp_calls_brute;
  counters["tsp_calls_qaoa"] = r.tsp_calls_qaoa;
  counters["nff_cache_hits"] = r.nff_cache_hits;
  counters["nff_cache_misses"] = r.nff_cache_misses;
  counters["mirror_fallbacks"] = r.mirror_fallbacks;
  root["counters"] = std::move(counters);

  json times;
  times["nff_s"] = r.times.nff_s;
  times["clustering_s"] = r.times.clustering_s;
  times["tsp_s"] = r.times.tsp_s;
  times["cluster_pack_s"] = r.times.cluster_pack_s;
  times["strip_s"] = r.times.strip_s;
  times["global_s"] = r.times.global_s;
  times["total_s"] = r.times.total_s;
  root["times"] = std::move(times);

  root["length_trace"] = r.length_trace;

  json config;
  config["theta_step_deg"] = cfg.theta_step_deg;
  config["rotation_step_deg"] = cfg.rotation_step_deg;
  config["delta_r"] = cfg.r_step;
  config["r_max"] = cfg.r_max;
  config["eps_scale"] = cfg.eps_scale;
  config["max_cluster"] = cfg.effective_n_max();
  config["n_partitions"] = cfg.n_partitions;
  config["grid_divisions"] = cfg.grid_divisions;
  config["relaxation_cap"] = cfg.relaxation_cap;
  config["workers"] = cfg.workers;
  if (cfg.backend == TspBackend::Qaoa) {
    json q;
    q["reps"] = cfg.qaoa.reps;
    q["shots"] = cfg.qaoa.shots;
    q["max_evals"] = cfg.qaoa.max_evals;
    q["optimizer"] = optimizer_name(cfg.qaoa.optimizer);
    q["min_cluster"] = cfg.qaoa_min_size;
    config["qaoa"] = std::move(q);
  }
  root["config"] = std::move(config);

  json poses = json::array();
  for (size_t i = 0; i < result.layout.size(); ++i) {
    const Pose& p = result.layout.pose(i);
    poses.push_back({{"x", p.x}, {"y", p.y}, {"angle_deg", p.angle_deg}});
  }
  root["poses"] = std::move(poses);

  return root.dump(2) + "\n";
}

ParsedReport parse_report(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
  try {
    ParsedReport out;
    out.schema_version = root.at("schema_version").get<int>();
    if (out.schema_version != kSchemaVersion)
      throw ParseError("unsupported report schema version " +
                       std::to_string(out.schema_version));
    out.instance_name = root.at("instance").get<std::string>();
    out.best_length = root.at("best_length").get<double>();
    out.height = root.at("height").get<double>();
    out.waste_ratio = root.at("waste_ratio").get<double>();
    out.seed = root.at("seed").get<uint64_t>();
    out.backend = root.at("backend").get<std::string>();
    for (const json& jp : root.at("poses"))
      out.poses.push_back({jp.at("x").get<double>(), jp.at("y").get<double>(),
                           jp.at("angle_deg").get<double>()});
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string tune_rows_to_json(const std::vector<TuneRow>& rows, const TuneOptions& opt) {
  json root;
  root["schema_version"] = kSchemaVersion;
  json jopt;
  jopt["instances"] = opt.instances;
  jopt["nodes"] = opt.nodes;
  jopt["reps_min"] = opt.reps_min;
  jopt["reps_max"] = opt.reps_max;
  jopt["shots"] = opt.shots;
  jopt["max_evals"] = opt.max_evals;
  jopt["seed"] = opt.seed;
  jopt["baseline_samples"] = opt.baseline_samples;
  root["options"] = std::move(jopt);
  json jrows = json::array();
  for (const TuneRow& r : rows) {
    jrows.push_back({{"optimizer", r.optimizer},
                     {"reps", r.reps},
                     {"mean_optimality", r.mean_optimality},
                     {"baseline_optimality", r.baseline_optimality},
                     {"wall_s", r.wall_s}});
  }
  root["rows"] = std::move(jrows);
  return root.dump(2) + "\n";
}

}  // namespace opus
