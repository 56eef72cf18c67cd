#include "opus/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "opus/rng.hpp"

namespace opus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

uint64_t hash_ints(const std::vector<int>& v) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (int x : v) {
    h ^= static_cast<uint64_t>(x) + 0x9e37;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double norm_deg(double a) {
  double r = std::fmod(a, 360.0);
  if (r < 0.0) r += 360.0;
  return r;
}

void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  size_t nthreads = std::min<size_t>(static_cast<size_t>(workers), count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

const char* optimizer_name(QaoaOptimizer o) {
  switch (o) {
    case QaoaOptimizer::NelderMead: return "nelder-mead";
    case QaoaOptimizer::Spsa: return "spsa";
    default: return "coordinate";
  }
}

DiscretizationConfig SolverConfig::discretization(double min_piece_area) const {
  DiscretizationConfig d;
  d.theta_deg = DiscretizationConfig::uniform_angles(theta_step_deg);
  d.phi_deg = DiscretizationConfig::uniform_angles(rotation_step_deg);
  d.r_step = r_step;
  d.r_max = r_max;
  d.eps_area = eps_scale * min_piece_area;
  return d;
}

int SolverConfig::effective_n_max() const {
  if (n_max > 0) return n_max;
  return backend == TspBackend::Qaoa ? 4 : 8;
}

void SolverConfig::validate() const {
  if (theta_step_deg <= 0.0 || rotation_step_deg <= 0.0)
    throw ConfigError("angle steps must be positive");
  if (r_step <= 0.0) throw ConfigError("delta_r must be positive");
  if (n_partitions < 1) throw ConfigError("must keep at least one partition");
  if (grid_divisions < 2) throw ConfigError("grid needs at least 2 divisions");
  if (relaxation_cap < 0) throw ConfigError("relaxation cap must be non-negative");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (eps_scale <= 0.0) throw ConfigError("overlap tolerance scale must be positive");
  if (backend == TspBackend::Qaoa) {
    int m = effective_n_max();
    if (m * m > qaoa.qubit_cap)
      throw ConfigError("cluster cap " + std::to_string(m) + " needs " + std::to_string(m * m) +
                        " qubits, the simulator cap is " + std::to_string(qaoa.qubit_cap));
  } else {
    if (effective_n_max() > brute_limit)
      throw ConfigError("cluster cap exceeds the exhaustive search limit");
  }
}

SolveResult solve(const std::vector<Polygon>& pieces, double height, const SolverConfig& cfg) {
  cfg.validate();
  if (pieces.empty()) throw ConfigError("no pieces to pack");
  if (height <= 0.0) throw ConfigError("strip height must be positive");
  const auto t_total = Clock::now();
  const int n = static_cast<int>(pieces.size());

  double min_area = pieces[0].area();
  for (const Polygon& p : pieces) min_area = std::min(min_area, p.area());
  DiscretizationConfig disc = cfg.discretization(min_area);

  SolveReport rep;
  rep.pieces = n;
  rep.seed = cfg.seed;
  rep.backend = cfg.backend == TspBackend::Qaoa ? "qaoa" : "brute";
  rep.height = height;

  auto t0 = Clock::now();
  NffCacheOptions cache{cfg.cache_dir};
  CompatResult compat = distance_matrices(pieces, disc, cache, cfg.workers);
  rep.times.nff_s = seconds_since(t0);
  rep.shape_classes = static_cast<int>(compat.class_shapes.size());
  rep.nff_cache_hits = compat.cache_hits;
  rep.nff_cache_misses = compat.cache_misses;

  t0 = Clock::now();
  std::vector<double> thresholds = candidate_thresholds(compat.incompat);
  int n_max_hi = std::min(n, cfg.effective_n_max());
  std::vector<Partition> partitions = enumerate_partitions(
      compat.incompat, thresholds, 1, n_max_hi, cfg.literal_stop_clustering);
  rep.partitions_generated = static_cast<int>(partitions.size());
  rep.times.clustering_s = seconds_since(t0);

  NffTableProvider provider(compat.class_shapes, compat.tables, disc);

  // Visiting order and packed box per distinct cluster, shared by all
  // partitions containing it.
  t0 = Clock::now();
  std::vector<std::vector<int>> distinct;
  for (const Partition& p : partitions)
    for (const auto& c : p.clusters)
      if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(c);

  std::map<std::vector<int>, ClusterPacking> packs;
  std::atomic<int> calls_brute{0}, calls_qaoa{0};
  std::atomic<double> tsp_seconds{0.0};
  std::vector<ClusterPacking> pack_slots(distinct.size());
  parallel_for(distinct.size(), cfg.workers, [&](size_t k) {
    const std::vector<int>& cluster = distinct[k];
    const int m = static_cast<int>(cluster.size());
    std::vector<int> sigma(static_cast<size_t>(m));
    auto t_tsp = Clock::now();
    if (m <= 2) {
      for (int i = 0; i < m; ++i) sigma[static_cast<size_t>(i)] = i;
    } else {
      SymMatrix sub = compat.distance.submatrix(cluster);
      if (cfg.backend == TspBackend::Qaoa && m >= cfg.qaoa_min_size) {
        QaoaConfig qc = cfg.qaoa;
        qc.seed = mix_seed(cfg.seed, hash_ints(cluster));
        sigma = solve_tsp_qaoa(sub, qc).order;
        calls_qaoa.fetch_add(1);
      } else {
        sigma = brute_force(sub, cfg.brute_limit).order;
        calls_brute.fetch_add(1);
      }
    }
    double dt = seconds_since(t_tsp);
    double cur = tsp_seconds.load();
    while (!tsp_seconds.compare_exchange_weak(cur, cur + dt)) {
    }
    pack_slots[k] = pack_cluster_best(cluster, sigma, pieces, compat.shape_class, provider);
  });
  for (size_t k = 0; k < distinct.size(); ++k) packs[distinct[k]] = std::move(pack_slots[k]);
  rep.tsp_calls_brute = calls_brute.load();
  rep.tsp_calls_qaoa = calls_qaoa.load();
  rep.times.tsp_s = tsp_seconds.load();
  rep.times.cluster_pack_s = seconds_since(t0) - rep.times.tsp_s;

  const bool allow_rotate =
      std::any_of(disc.phi_deg.begin(), disc.phi_deg.end(),
                  [](double a) { return std::abs(a - 90.0) <= 1e-6; });

  // Penalty per partition; partitions whose boxes cannot fit the strip height
  // in any allowed orientation are unusable.
  std::vector<double> penalties(partitions.size(), 0.0);
  double tol = 1e-9 * std::max(1.0, height);
  for (size_t pi = 0; pi < partitions.size(); ++pi) {
    double sum = 0.0;
    bool ok = true;
    for (const auto& c : partitions[pi].clusters) {
      const Rect& box = packs[c].box;
      sum += box.area();
      bool fits = box.height <= height + tol || (allow_rotate && box.length <= height + tol);
      ok = ok && fits;
    }
    penalties[pi] = ok ? sum : std::numeric_limits<double>::infinity();
  }
  std::vector<size_t> kept = filter_partitions(penalties, cfg.n_partitions);
  rep.partitions_kept = static_cast<int>(kept.size());

  t0 = Clock::now();
  double best_len = std::numeric_limits<double>::infinity();
  std::optional<Layout> best;
  for (size_t idx : kept) {
    if (std::isinf(penalties[idx])) continue;
    const Partition& part = partitions[idx];
    std::vector<Rect> boxes;
    boxes.reserve(part.clusters.size());
    for (const auto& c : part.clusters) boxes.push_back(packs[c].box);

    // Seed the bin sweep at the areal lower bound so the packer is forced to
    // nest the boxes instead of lining them up.
    double area_sum = 0.0, widest = 0.0;
    for (const Rect& b : boxes) {
      area_sum += b.area();
      double wmin = std::numeric_limits<double>::infinity();
      if (b.height <= height + tol) wmin = b.length;
      if (allow_rotate && b.length <= height + tol) wmin = std::min(wmin, b.height);
      widest = std::max(widest, wmin);
    }
    double lower_bound = std::max(area_sum / height, widest);
    auto rr = relax_and_pack(boxes, height, lower_bound, allow_rotate, 1.05, cfg.relaxation_cap);
    if (!rr)
      rr = relax_and_pack(boxes, height, std::numeric_limits<double>::infinity(), allow_rotate,
                          1.05, cfg.relaxation_cap);
    if (!rr) continue;

    std::vector<Pose> poses(pieces.size());
    for (size_t ci = 0; ci < part.clusters.size(); ++ci) {
      const ClusterPacking& pk = packs[part.clusters[ci]];
      const RectPlacement& rp = rr->placements[ci];
      for (size_t m = 0; m < pk.piece_indices.size(); ++m) {
        const Pose& lp = pk.poses[m];
        Pose world;
        if (!rp.rotated) {
          world = {rp.x + lp.x, rp.y + lp.y, norm_deg(lp.angle_deg)};
        } else {
          world = {rp.x + (pk.box.height - lp.y), rp.y + lp.x, norm_deg(lp.angle_deg + 90.0)};
        }
        poses[static_cast<size_t>(pk.piece_indices[m])] = world;
      }
    }
    Layout layout(pieces, poses, height);
    layout = local_optimize(std::move(layout), disc.r_step, disc.eps_area);
    double h_used = 0.0;
    for (size_t i = 0; i < layout.size(); ++i)
      h_used = std::max(h_used, layout.placed(i).bounding_box().y_max());
    if (h_used > height + tol) continue;
    if (layout.length() < best_len) {
      best_len = layout.length();
      rep.length_trace.push_back(best_len);
      best = std::move(layout);
      ++rep.partitions_improved;
    }
  }
  rep.times.strip_s = seconds_since(t0);

  if (!best)
    throw InfeasibleError("no partition fits the strip height " + std::to_string(height));

  t0 = Clock::now();
  Layout final_layout =
      global_optimize(std::move(*best), cfg.grid_divisions, disc.phi_deg, disc.r_step,
                      disc.eps_area);
  rep.times.global_s = seconds_since(t0);

  auto problems = validate_layout(final_layout, disc.eps_area);
  if (!problems.empty())
    throw Error(ErrorCategory::Internal, "solver produced an invalid layout: " + problems[0]);

  LayoutMetrics metrics = layout_metrics(final_layout);
  rep.best_length = metrics.length;
  rep.waste_area = metrics.waste_area;
  rep.waste_ratio = metrics.waste_ratio;
  rep.mirror_fallbacks = provider.mirror_fallbacks();
  rep.times.total_s = seconds_since(t_total);
  return SolveResult{std::move(final_layout), std::move(rep)};
}

std::vector<TuneRow> tune_qaoa(const TuneOptions& opt) {
  if (opt.instances < 1 || opt.nodes < 2) throw ConfigError("need instances and at least 2 nodes");
  if (opt.reps_min < 1 || opt.reps_max < opt.reps_min) throw ConfigError("bad reps range");

  // Shared across rows: instances, exact extremes and the random-path baseline.
  std::vector<SymMatrix> instances;
  std::vector<std::pair<double, double>> extremes;
  double baseline = 0.0;
  for (int k = 0; k < opt.instances; ++k) {
    std::mt19937_64 rng = make_rng(opt.seed, 0x1000 + static_cast<uint64_t>(k));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SymMatrix d(opt.nodes);
    for (int i = 0; i < opt.nodes; ++i)
      for (int j = i + 1; j < opt.nodes; ++j) d.set(i, j, u(rng));
    instances.push_back(d);
    extremes.push_back(path_extremes(d, std::max(opt.nodes, 10)));

    std::mt19937_64 brng = make_rng(opt.seed, 0xba5e + static_cast<uint64_t>(k));
    std::vector<int> perm(static_cast<size_t>(opt.nodes));
    std::iota(perm.begin(), perm.end(), 0);
    double acc = 0.0;
    for (int s = 0; s < opt.baseline_samples; ++s) {
      std::shuffle(perm.begin(), perm.end(), brng);
      acc += path_optimality(path_length(d, perm), extremes.back().first,
                             extremes.back().second);
    }
    baseline += acc / opt.baseline_samples;
  }
  baseline /= opt.instances;

  std::vector<TuneRow> rows;
  for (QaoaOptimizer o : opt.optimizers) {
    for (int p = opt.reps_min; p <= opt.reps_max; ++p) {
      auto t0 = Clock::now();
      double acc = 0.0;
      for (int k = 0; k < opt.instances; ++k) {
        QaoaConfig qc;
        qc.reps = p;
        qc.shots = opt.shots;
        qc.max_evals = opt.max_evals;
        qc.optimizer = o;
        qc.seed = mix_seed(opt.seed, 0x2000 + static_cast<uint64_t>(k));
        HamiltonianPath path = solve_tsp_qaoa(instances[static_cast<size_t>(k)], qc);
        acc += path_optimality(path.total, extremes[static_cast<size_t>(k)].first,
                               extremes[static_cast<size_t>(k)].second);
      }
      TuneRow row;
      row.optimizer = optimizer_name(o);
      row.reps = p;
      row.mean_optimality = acc / opt.instances;
      row.baseline_optimality = baseline;
      row.wall_s = seconds_since(t0);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace opus
