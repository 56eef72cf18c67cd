#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opus/clustering.hpp"
#include "opus/packing.hpp"
#include "opus/qaoa.hpp"

namespace opus {

enum class TspBackend { Brute, Qaoa };

struct SolverConfig {
  double theta_step_deg = 5.0;     // orbit resolution
  double rotation_step_deg = 90.0; // orientation resolution
  double r_step = 5.0;
  double r_max = 0.0;              // 0 = automatic per pair
  double eps_scale = 1e-6;         // overlap tolerance = eps_scale * min piece area

  int n_max = 0;                   // max cluster size; 0 = backend default (brute 8, qaoa 4)
  int n_partitions = 20;           // partitions kept after the penalty filter
  bool literal_stop_clustering = false;

  TspBackend backend = TspBackend::Brute;
  int brute_limit = 10;
  int qaoa_min_size = 3;           // smaller clusters always use brute force
  QaoaConfig qaoa;

  int grid_divisions = 100;
  int relaxation_cap = 64;
  uint64_t seed = 1;
  int workers = 1;
  std::string cache_dir;           // empty disables the table cache

  DiscretizationConfig discretization(double min_piece_area) const;
  int effective_n_max() const;
  void validate() const;
};

struct StageTimes {
  double nff_s = 0.0;
  double clustering_s = 0.0;
  double tsp_s = 0.0;
  double cluster_pack_s = 0.0;
  double strip_s = 0.0;    // rectangle packing + substitution + slide passes
  double global_s = 0.0;
  double total_s = 0.0;
};

struct SolveReport {
  double best_length = 0.0;
  double height = 0.0;
  double waste_area = 0.0;
  double waste_ratio = 0.0;
  int pieces = 0;
  int shape_classes = 0;
  int partitions_generated = 0;
  int partitions_kept = 0;
  int partitions_improved = 0;
  int tsp_calls_brute = 0;
  int tsp_calls_qaoa = 0;
  int nff_cache_hits = 0;
  int nff_cache_misses = 0;
  int mirror_fallbacks = 0;
  std::string backend;
  uint64_t seed = 0;
  StageTimes times;
  std::vector<double> length_trace;  // successive accepted lengths
};

struct SolveResult {
  Layout layout;
  SolveReport report;
};

SolveResult solve(const std::vector<Polygon>& pieces, double height, const SolverConfig& cfg);

struct TuneRow {
  std::string optimizer;
  int reps = 0;
  double mean_optimality = 0.0;
  double baseline_optimality = 0.0;  // uniform random paths on the same instances
  double wall_s = 0.0;
};

struct TuneOptions {
  int instances = 30;
  int nodes = 4;
  int reps_min = 1;
  int reps_max = 5;
  int shots = 1000;
  int max_evals = 400;
  uint64_t seed = 1;
  std::vector<QaoaOptimizer> optimizers = {QaoaOptimizer::Coordinate};
  int baseline_samples = 1000;
};

// Random symmetric distance matrices, one QAOA round per (optimizer, reps),
// averaged path optimality plus a uniform-random-path baseline.
std::vector<TuneRow> tune_qaoa(const TuneOptions& opt);

const char* optimizer_name(QaoaOptimizer o);

}  // namespace opus
