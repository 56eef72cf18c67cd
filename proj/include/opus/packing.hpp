#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "opus/compat.hpp"
#include "opus/geometry.hpp"

namespace opus {

// Serves the no-fit table for an ordered shape-class pair.  Direct tables
// exist per unordered pair; the reverse direction is derived by mirroring
// with per-angle direct fallback, computed lazily and memoized.
class NffTableProvider {
 public:
  NffTableProvider(const std::vector<Polygon>& class_shapes,
                   std::map<std::pair<int, int>, NoFitTable> unordered_tables,
                   DiscretizationConfig cfg);

  const NoFitTable& get(int class_fixed, int class_moving);
  int mirror_fallbacks() const { return mirror_fallbacks_; }
  const DiscretizationConfig& config() const { return cfg_; }

 private:
  const std::vector<Polygon>& shapes_;
  std::map<std::pair<int, int>, NoFitTable> tables_;
  DiscretizationConfig cfg_;
  int mirror_fallbacks_ = 0;
};

struct ClusterPacking {
  std::vector<int> piece_indices;  // in packing order
  std::vector<Pose> poses;         // aligned with piece_indices, box-local
  Rect box;                        // anchored at (0, 0)
};

// Chain the pieces in the given order: first at pose (0,0,0), each next piece
// orbits its predecessor over all polar angles, taking (r, phi) from the
// no-fit table in the predecessor's frame, growing r until clear of every
// placed piece, and keeping the angle that minimizes the running bounding-box
// area (ties to the smaller angle).
ClusterPacking greedy_pack(std::span<const int> piece_order, const std::vector<Polygon>& pieces,
                           const std::vector<int>& shape_class, NffTableProvider& tables);

// Pack the visiting order forward and reversed, keep the smaller box
// (ties prefer forward).
ClusterPacking pack_cluster_best(std::span<const int> cluster_pieces,
                                 std::span<const int> sigma_local,
                                 const std::vector<Polygon>& pieces,
                                 const std::vector<int>& shape_class, NffTableProvider& tables);

struct RectPlacement {
  double x = 0.0;
  double y = 0.0;
  bool rotated = false;  // 90 degrees counter-clockwise
};

// Maximal-free-rectangle packing with bottom-left scoring, items taken in
// decreasing area (stable).  nullopt if any item cannot be placed.
std::optional<std::vector<RectPlacement>> pack_rectangles(std::span<const Rect> items,
                                                          double bin_length, double bin_height,
                                                          bool allow_rotate);

// Two placed rectangles are disjoint when separated along at least one axis;
// violations are returned as index pairs (empty means valid).
std::vector<std::pair<size_t, size_t>> rectangle_violations(std::span<const Rect> items,
                                                            std::span<const RectPlacement> placed,
                                                            double bin_length, double bin_height,
                                                            double tol = 1e-9);

struct RelaxResult {
  std::vector<RectPlacement> placements;
  double bin_length = 0.0;
  double length_used = 0.0;
  double height_used = 0.0;
  int relax_steps = 0;
};

// Try bins of height H and length L_target * 1.05^k, k = 0.., first success
// wins.  An infinite L_target starts from the sum of the H-feasible item
// widths, which a side-by-side row always fits.
std::optional<RelaxResult> relax_and_pack(std::span<const Rect> items, double height,
                                          double length_target, bool allow_rotate,
                                          double growth = 1.05, int max_steps = 64);

// A strip layout: pieces with absolute poses inside a container of fixed
// height and reported (used) length.
class Layout {
 public:
  Layout(std::vector<Polygon> base_pieces, std::vector<Pose> poses, double height);

  double height() const { return height_; }
  double length() const { return length_; }
  size_t size() const { return base_.size(); }
  const std::vector<Pose>& poses() const { return poses_; }
  const Pose& pose(size_t i) const { return poses_[i]; }
  const Polygon& placed(size_t i) const { return placed_[i]; }
  const Polygon& base(size_t i) const { return base_[i]; }
  void set_pose(size_t i, const Pose& p);
  double piece_area_sum() const;
  void refresh_length();  // length = max piece x extent

 private:
  std::vector<Polygon> base_;
  std::vector<Pose> poses_;
  std::vector<Polygon> placed_;
  double height_ = 0.0;
  double length_ = 0.0;
};

struct LayoutMetrics {
  double length = 0.0;
  double waste_area = 0.0;
  double waste_ratio = 0.0;  // waste / (height * length)
};

LayoutMetrics layout_metrics(const Layout& layout);

// Human-readable containment / overlap violations; empty means valid.
std::vector<std::string> validate_layout(const Layout& layout, double eps_area,
                                         double eps_len = 1e-6);

// Slide pieces left/down: for each piece (sorted by x_min + y_min) apply the
// first move of step delta_r among left, down-left, up-left, down that keeps
// the layout valid; repeat until a full pass changes nothing.  The used
// length never increases.
Layout local_optimize(Layout layout, double delta_r, double eps_area);

// Repeatedly take the piece that bounds the used length and re-place it on a
// uniform grid over the current strip (columns left to right, bottom to top,
// every allowed orientation); accept only strict length decreases, re-running
// the slide pass after each success.
Layout global_optimize(Layout layout, int grid_divisions, std::span<const double> phi_deg,
                       double delta_r, double eps_area);

}  // namespace opus
