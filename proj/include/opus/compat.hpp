#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opus/geometry.hpp"
#include "opus/matrix.hpp"

namespace opus {

// Angular and radial discretization shared by the no-fit search and the
// packing passes.  Angles are degrees in [0, 360); both sets must contain 0
// and be strictly increasing.
struct DiscretizationConfig {
  std::vector<double> theta_deg;  // polar angles scanned when orbiting a piece
  std::vector<double> phi_deg;    // allowed piece orientations
  double r_step = 5.0;
  // Radial search ceiling; 0 means per-pair automatic
  // (sum of circumradii + 2 * r_step).
  double r_max = 0.0;
  // Overlap tolerance as an area; callers derive it from the instance scale.
  double eps_area = 1e-9;

  static std::vector<double> uniform_angles(double step_deg);
  void validate() const;
  double pair_r_max(const Polygon& a, const Polygon& b) const;
};

// Place `moving` rotated by phi with its centroid at
// centroid(fixed) + r * (cos theta, sin theta).
Polygon polar_place(const Polygon& fixed, const Polygon& moving, double r, double theta_deg,
                    double phi_deg);

struct NffEntry {
  double theta_deg = 0.0;
  double r = 0.0;
  double phi_deg = 0.0;
  double hull_area = 0.0;
  bool mirrored = false;  // derived from the reverse-direction table
  bool fallback = false;  // mirror derivation had no matching angle, recomputed directly
};

// One entry per theta in the configured set, ascending.
struct NoFitTable {
  std::vector<NffEntry> entries;
};

// For each theta: scan r outward from 0 in r_step increments for every phi,
// take the first non-overlapping radius, and keep the (r, phi) whose combined
// convex hull has the smallest area.
NoFitTable compute_nff(const Polygon& fixed, const Polygon& moving,
                       const DiscretizationConfig& cfg);

// Derive the reverse-direction table from `table` (computed with `fixed`
// fixed and `moving` orbiting): the same relative arrangement seen from the
// other piece lands at theta + 180 - phi with orientation -phi.  Angles that
// no source entry maps onto are recomputed directly and flagged.
NoFitTable mirror_nff(const NoFitTable& table, const Polygon& fixed, const Polygon& moving,
                      const DiscretizationConfig& cfg);

struct PairPlacement {
  double theta_deg = 0.0;
  double r = 0.0;
  double phi_deg = 0.0;
  double hull_area = 0.0;
  double distance = 0.0;  // hull area minus both piece areas, clamped at 0
};

// Globally best table entry (smallest hull area, ties to the smaller theta)
// and the waste-derived distance for the pair.
PairPlacement pair_distance(const Polygon& a, const Polygon& b, const NoFitTable& table);

// Normalized geometrical incompatibility in [0, 1]; 0 means the pair tiles
// its hull perfectly.
double incompatibility(const PairPlacement& p);

struct NffCacheOptions {
  std::string dir;  // empty disables caching
};

struct CompatResult {
  SymMatrix distance;                              // pairwise hull-waste areas
  SymMatrix incompat;                              // normalized to [0, 1]
  std::vector<int> shape_class;                    // piece index -> class id
  std::vector<Polygon> class_shapes;               // representative per class
  std::map<std::pair<int, int>, NoFitTable> tables;  // unordered class pairs (a <= b)
  int cache_hits = 0;
  int cache_misses = 0;
};

// Pairwise tables and matrices for all pieces.  Congruent pieces share one
// shape class so each geometric pair is computed once; `workers` > 1 spreads
// the per-pair computations across threads (results are merge-ordered, so the
// output is identical either way).
CompatResult distance_matrices(const std::vector<Polygon>& pieces,
                               const DiscretizationConfig& cfg,
                               const NffCacheOptions& cache = {}, int workers = 1);

// Congruence grouping used by distance_matrices: same vertex list after
// winding normalization, cyclic shift and translation to the centroid.
std::vector<int> shape_classes(const std::vector<Polygon>& pieces, double tol = 1e-9);

}  // namespace opus
