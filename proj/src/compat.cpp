#include "opus/compat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "opus/nff_cache.hpp"

namespace opus {

std::vector<double> DiscretizationConfig::uniform_angles(double step_deg) {
  if (step_deg <= 0.0 || step_deg > 360.0)
    throw ConfigError("angle step must be in (0, 360], got " + std::to_string(step_deg));
  std::vector<double> out;
  for (double a = 0.0; a < 360.0 - 1e-9; a += step_deg) out.push_back(a);
  return out;
}

void DiscretizationConfig::validate() const {
  auto check_set = [](const std::vector<double>& v, const char* what) {
    if (v.empty()) throw ConfigError(std::string(what) + " set is empty");
    if (std::abs(v.front()) > 1e-9) throw ConfigError(std::string(what) + " set must contain 0");
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0.0 || v[i] >= 360.0)
        throw ConfigError(std::string(what) + " angles must lie in [0, 360)");
      if (i > 0 && v[i] <= v[i - 1])
        throw ConfigError(std::string(what) + " angles must be strictly increasing");
    }
  };
  check_set(theta_deg, "theta");
  check_set(phi_deg, "phi");
  if (r_step <= 0.0) throw ConfigError("r_step must be positive");
  if (r_max < 0.0) throw ConfigError("r_max must be non-negative");
  if (eps_area <= 0.0) throw ConfigError("overlap tolerance must be positive");
}

double DiscretizationConfig::pair_r_max(const Polygon& a, const Polygon& b) const {
  if (r_max > 0.0) return r_max;
  return a.circumradius() + b.circumradius() + 2.0 * r_step;
}

Polygon polar_place(const Polygon& fixed, const Polygon& moving, double r, double theta_deg,
                    double phi_deg) {
  double rad = theta_deg * std::numbers::pi / 180.0;
  Point fc = fixed.centroid();
  return transform(moving, Pose{fc.x + r * std::cos(rad), fc.y + r * std::sin(rad), phi_deg});
}

namespace {

double hull_area_of_pair(const Polygon& a, const Polygon& b) {
  std::vector<Point> pts;
  pts.reserve(a.vertices().size() + b.vertices().size());
  pts.insert(pts.end(), a.vertices().begin(), a.vertices().end());
  pts.insert(pts.end(), b.vertices().begin(), b.vertices().end());
  return convex_hull(pts).area();
}

// Best (r, phi) for one polar angle: per phi the first non-overlapping radius
// scanning outward from 0, then the smallest combined hull over phis.
std::optional<NffEntry> nff_entry_for_theta(const Polygon& fixed, const Polygon& moving,
                                            double theta, const DiscretizationConfig& cfg) {
  double ceiling = cfg.pair_r_max(fixed, moving);
  std::optional<NffEntry> best;
  for (double phi : cfg.phi_deg) {
    for (double r = 0.0; r <= ceiling + 1e-9; r += cfg.r_step) {
      Polygon placed = polar_place(fixed, moving, r, theta, phi);
      if (overlap(fixed, placed, cfg.eps_area)) continue;
      double hull = hull_area_of_pair(fixed, placed);
      if (!best || hull < best->hull_area)
        best = NffEntry{theta, r, phi, hull, false, false};
      break;
    }
  }
  return best;
}

double norm_angle(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a < 0.0) a += 360.0;
  if (a > 360.0 - 1e-9) a = 0.0;
  return a;
}

// Index in `grid` matching `deg` within tolerance, or -1.
int angle_index(const std::vector<double>& grid, double deg) {
  for (size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - deg) <= 1e-6) return static_cast<int>(i);
  return -1;
}

}  // namespace

NoFitTable compute_nff(const Polygon& fixed, const Polygon& moving,
                       const DiscretizationConfig& cfg) {
  cfg.validate();
  NoFitTable table;
  table.entries.reserve(cfg.theta_deg.size());
  for (double theta : cfg.theta_deg) {
    auto entry = nff_entry_for_theta(fixed, moving, theta, cfg);
    if (!entry)
      throw ConfigError("no non-overlapping radius within r_max at angle " +
                        std::to_string(theta));
    table.entries.push_back(*entry);
  }
  return table;
}

NoFitTable mirror_nff(const NoFitTable& table, const Polygon& fixed, const Polygon& moving,
                      const DiscretizationConfig& cfg) {
  cfg.validate();
  std::vector<std::optional<NffEntry>> slots(cfg.theta_deg.size());
  for (const NffEntry& e : table.entries) {
    double theta_m = norm_angle(e.theta_deg + 180.0 - e.phi_deg);
    double phi_m = norm_angle(-e.phi_deg);
    int ti = angle_index(cfg.theta_deg, theta_m);
    if (ti < 0) continue;
    if (angle_index(cfg.phi_deg, phi_m) < 0) continue;
    NffEntry m{theta_m, e.r, phi_m, e.hull_area, true, false};
    auto& slot = slots[static_cast<size_t>(ti)];
    if (!slot || m.hull_area < slot->hull_area) slot = m;
  }
  NoFitTable out;
  out.entries.reserve(cfg.theta_deg.size());
  for (size_t i = 0; i < cfg.theta_deg.size(); ++i) {
    if (slots[i]) {
      out.entries.push_back(*slots[i]);
      continue;
    }
    auto direct = nff_entry_for_theta(moving, fixed, cfg.theta_deg[i], cfg);
    if (!direct)
      throw ConfigError("no non-overlapping radius within r_max at angle " +
                        std::to_string(cfg.theta_deg[i]));
    direct->fallback = true;
    out.entries.push_back(*direct);
  }
  return out;
}

PairPlacement pair_distance(const Polygon& a, const Polygon& b, const NoFitTable& table) {
  if (table.entries.empty()) throw ConfigError("empty no-fit table");
  const NffEntry* best = &table.entries[0];
  for (const NffEntry& e : table.entries)
    if (e.hull_area < best->hull_area) best = &e;
  PairPlacement p;
  p.theta_deg = best->theta_deg;
  p.r = best->r;
  p.phi_deg = best->phi_deg;
  p.hull_area = best->hull_area;
  p.distance = std::max(0.0, best->hull_area - a.area() - b.area());
  return p;
}

double incompatibility(const PairPlacement& p) {
  if (p.hull_area <= 0.0) throw ConfigError("hull area must be positive");
  double gi = p.distance / p.hull_area;
  return std::clamp(gi, 0.0, 1.0);
}

std::vector<int> shape_classes(const std::vector<Polygon>& pieces, double tol) {
  std::vector<int> cls(pieces.size(), -1);
  std::vector<std::vector<Point>> reps;  // centroid-centered vertex lists
  auto centered = [](const Polygon& p) {
    Point c = p.centroid();
    std::vector<Point> v = p.vertices();
    for (Point& q : v) {
      q.x -= c.x;
      q.y -= c.y;
    }
    return v;
  };
  auto congruent = [tol](const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.size() != b.size()) return false;
    const size_t m = a.size();
    for (size_t shift = 0; shift < m; ++shift) {
      bool ok = true;
      for (size_t i = 0; i < m && ok; ++i) {
        const Point& p = a[(i + shift) % m];
        ok = std::abs(p.x - b[i].x) <= tol && std::abs(p.y - b[i].y) <= tol;
      }
      if (ok) return true;
    }
    return false;
  };
  for (size_t i = 0; i < pieces.size(); ++i) {
    std::vector<Point> v = centered(pieces[i]);
    for (size_t c = 0; c < reps.size(); ++c) {
      if (congruent(v, reps[c])) {
        cls[i] = static_cast<int>(c);
        break;
      }
    }
    if (cls[i] < 0) {
      cls[i] = static_cast<int>(reps.size());
      reps.push_back(std::move(v));
    }
  }
  return cls;
}

namespace {

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

CompatResult distance_matrices(const std::vector<Polygon>& pieces,
                               const DiscretizationConfig& cfg, const NffCacheOptions& cache,
                               int workers) {
  cfg.validate();
  const int n = static_cast<int>(pieces.size());
  if (n == 0) throw ConfigError("no pieces");
  CompatResult res;
  res.distance = SymMatrix(n);
  res.incompat = SymMatrix(n);
  res.shape_class = shape_classes(pieces);
  int num_classes = 0;
  for (int c : res.shape_class) num_classes = std::max(num_classes, c + 1);
  res.class_shapes.reserve(static_cast<size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (res.shape_class[i] == c) {
        res.class_shapes.push_back(pieces[i]);
        break;
      }
    }
  }

  // Class pairs actually required by some piece pair.
  std::vector<std::pair<int, int>> needed;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int a = res.shape_class[static_cast<size_t>(i)];
      int b = res.shape_class[static_cast<size_t>(j)];
      std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      if (std::find(needed.begin(), needed.end(), key) == needed.end()) needed.push_back(key);
    }
  }

  std::vector<NoFitTable> computed(needed.size());
  std::atomic<int> hits{0}, misses{0};
  parallel_for(needed.size(), workers, [&](size_t k) {
    auto [a, b] = needed[k];
    const Polygon& pa = res.class_shapes[static_cast<size_t>(a)];
    const Polygon& pb = res.class_shapes[static_cast<size_t>(b)];
    if (!cache.dir.empty()) {
      if (auto loaded = nff_cache_load(cache.dir, pa, pb, cfg)) {
        computed[k] = std::move(*loaded);
        hits.fetch_add(1);
        return;
      }
    }
    computed[k] = compute_nff(pa, pb, cfg);
    misses.fetch_add(1);
    if (!cache.dir.empty()) nff_cache_store(cache.dir, pa, pb, cfg, computed[k]);
  });
  res.cache_hits = hits.load();
  res.cache_misses = misses.load();
  for (size_t k = 0; k < needed.size(); ++k) res.tables[needed[k]] = std::move(computed[k]);

  std::map<std::pair<int, int>, PairPlacement> best;
  for (const auto& [key, table] : res.tables) {
    const Polygon& pa = res.class_shapes[static_cast<size_t>(key.first)];
    const Polygon& pb = res.class_shapes[static_cast<size_t>(key.second)];
    best[key] = pair_distance(pa, pb, table);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int a = res.shape_class[static_cast<size_t>(i)];
      int b = res.shape_class[static_cast<size_t>(j)];
      const PairPlacement& p = best[{std::min(a, b), std::max(a, b)}];
      res.distance.set(i, j, p.distance);
      res.incompat.set(i, j, incompatibility(p));
    }
  }
  return res;
}

}  // namespace opus
