#include "opus/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <numbers>

namespace opus {

namespace {
std::mutex provider_mutex;
constexpr double kRectTol = 1e-7;
}

NffTableProvider::NffTableProvider(const std::vector<Polygon>& class_shapes,
                                   std::map<std::pair<int, int>, NoFitTable> unordered_tables,
                                   DiscretizationConfig cfg)
    : shapes_(class_shapes), tables_(std::move(unordered_tables)), cfg_(std::move(cfg)) {
  cfg_.validate();
}

const NoFitTable& NffTableProvider::get(int class_fixed, int class_moving) {
  std::scoped_lock lock(provider_mutex);
  auto key = std::make_pair(class_fixed, class_moving);
  if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  const Polygon& pf = shapes_.at(static_cast<size_t>(class_fixed));
  const Polygon& pm = shapes_.at(static_cast<size_t>(class_moving));
  NoFitTable table;
  auto rev = tables_.find(std::make_pair(class_moving, class_fixed));
  if (rev != tables_.end()) {
    table = mirror_nff(rev->second, pm, pf, cfg_);
    for (const NffEntry& e : table.entries)
      if (e.fallback) ++mirror_fallbacks_;
  } else {
    table = compute_nff(pf, pm, cfg_);
  }
  auto [it, inserted] = tables_.emplace(key, std::move(table));
  (void)inserted;
  return it->second;
}

namespace {

Rect bbox_union(const Rect& a, const Rect& b) {
  double x0 = std::min(a.x, b.x);
  double y0 = std::min(a.y, b.y);
  double x1 = std::max(a.x_max(), b.x_max());
  double y1 = std::max(a.y_max(), b.y_max());
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

ClusterPacking greedy_pack(std::span<const int> piece_order, const std::vector<Polygon>& pieces,
                           const std::vector<int>& shape_class, NffTableProvider& tables) {
  if (piece_order.empty()) throw ConfigError("cannot pack an empty piece order");
  const DiscretizationConfig& cfg = tables.config();
  ClusterPacking out;
  out.piece_indices.assign(piece_order.begin(), piece_order.end());
  out.poses.reserve(piece_order.size());

  std::vector<Polygon> placed;
  placed.reserve(piece_order.size());
  out.poses.push_back(Pose{0.0, 0.0, 0.0});
  placed.push_back(transform(pieces.at(static_cast<size_t>(piece_order[0])), out.poses[0]));
  Rect running = placed[0].bounding_box();

  for (size_t k = 1; k < piece_order.size(); ++k) {
    int prev = piece_order[k - 1];
    int cur = piece_order[k];
    const Polygon& cur_shape = pieces.at(static_cast<size_t>(cur));
    const NoFitTable& table = tables.get(shape_class.at(static_cast<size_t>(prev)),
                                         shape_class.at(static_cast<size_t>(cur)));
    const Pose& prev_pose = out.poses[k - 1];
    const Polygon& prev_poly = placed[k - 1];

    // Outgrowing the whole placed set from the predecessor clears everything.
    double cap = cur_shape.circumradius() + 2.0 * cfg.r_step;
    {
      double reach = 0.0;
      for (const Polygon& q : placed) {
        Point c = q.centroid();
        reach = std::max(reach, std::hypot(c.x - prev_pose.x, c.y - prev_pose.y) +
                                    q.circumradius());
      }
      cap += reach;
    }
    cap = std::max(cap, cfg.pair_r_max(prev_poly, cur_shape));

    bool have = false;
    double best_area = std::numeric_limits<double>::infinity();
    Pose best_pose;
    Polygon best_poly = cur_shape;
    for (const NffEntry& e : table.entries) {
      // Table angles live in the predecessor's frame; compose with its
      // current orientation.
      double theta_world = (e.theta_deg + prev_pose.angle_deg) * std::numbers::pi / 180.0;
      double phi_world = e.phi_deg + prev_pose.angle_deg;
      double ct = std::cos(theta_world), st = std::sin(theta_world);
      bool feasible = false;
      Pose pose;
      Polygon cand = cur_shape;
      for (double r = e.r; r <= cap + 1e-9; r += cfg.r_step) {
        pose = Pose{prev_pose.x + r * ct, prev_pose.y + r * st, phi_world};
        cand = transform(cur_shape, pose);
        bool clear = true;
        for (const Polygon& q : placed) {
          if (overlap(cand, q, cfg.eps_area)) {
            clear = false;
            break;
          }
        }
        if (clear) {
          feasible = true;
          break;
        }
      }
      if (!feasible) continue;
      double area = bbox_union(running, cand.bounding_box()).area();
      if (area < best_area) {
        best_area = area;
        best_pose = pose;
        best_poly = cand;
        have = true;
      }
    }
    if (!have)
      throw InfeasibleError("no clear placement around piece " + std::to_string(prev) +
                            " for piece " + std::to_string(cur));
    out.poses.push_back(best_pose);
    placed.push_back(best_poly);
    running = bbox_union(running, best_poly.bounding_box());
  }

  for (Pose& p : out.poses) {
    p.x -= running.x;
    p.y -= running.y;
  }
  out.box = Rect{0.0, 0.0, running.length, running.height};
  return out;
}

ClusterPacking pack_cluster_best(std::span<const int> cluster_pieces,
                                 std::span<const int> sigma_local,
                                 const std::vector<Polygon>& pieces,
                                 const std::vector<int>& shape_class, NffTableProvider& tables) {
  if (cluster_pieces.size() != sigma_local.size())
    throw ConfigError("sigma does not match the cluster size");
  std::vector<int> fwd(cluster_pieces.size());
  for (size_t i = 0; i < sigma_local.size(); ++i)
    fwd[i] = cluster_pieces[static_cast<size_t>(sigma_local[i])];
  ClusterPacking best = greedy_pack(fwd, pieces, shape_class, tables);
  if (fwd.size() > 1) {
    std::vector<int> rev(fwd.rbegin(), fwd.rend());
    ClusterPacking r = greedy_pack(rev, pieces, shape_class, tables);
    if (r.box.area() < best.box.area()) best = std::move(r);
  }
  return best;
}

namespace {

struct FreeRect {
  double x, y, l, h;
  double x2() const { return x + l; }
  double y2() const { return y + h; }
};

bool fits(double w, double h, const FreeRect& f) {
  return w <= f.l + kRectTol && h <= f.h + kRectTol;
}

}  // namespace

std::optional<std::vector<RectPlacement>> pack_rectangles(std::span<const Rect> items,
                                                          double bin_length, double bin_height,
                                                          bool allow_rotate) {
  if (bin_length <= 0.0 || bin_height <= 0.0) throw ConfigError("bin must have positive size");
  std::vector<size_t> order(items.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&items](size_t a, size_t b) {
    return items[a].area() > items[b].area();
  });

  std::vector<FreeRect> free_rects{{0.0, 0.0, bin_length, bin_height}};
  std::vector<RectPlacement> placed(items.size());

  for (size_t idx : order) {
    double w = items[idx].length, h = items[idx].height;
    // Bottom-left-lowest position; ties go to the snugger orientation
    // (smaller leftover on the short side), then to unrotated.
    bool have = false, best_rot = false;
    double bx = 0.0, by = 0.0, bs = 0.0;
    auto consider = [&](const FreeRect& f, double pw, double ph, bool rot) {
      if (!fits(pw, ph, f)) return;
      double s = std::min(f.l - pw, f.h - ph);
      bool better;
      if (!have) {
        better = true;
      } else if (std::abs(f.y - by) > kRectTol) {
        better = f.y < by;
      } else if (std::abs(f.x - bx) > kRectTol) {
        better = f.x < bx;
      } else if (std::abs(s - bs) > kRectTol) {
        better = s < bs;
      } else {
        better = best_rot && !rot;
      }
      if (better) {
        have = true;
        best_rot = rot;
        bx = f.x;
        by = f.y;
        bs = s;
      }
    };
    for (const FreeRect& f : free_rects) {
      consider(f, w, h, false);
      if (allow_rotate) consider(f, h, w, true);
    }
    if (!have) return std::nullopt;
    double pw = best_rot ? h : w, ph = best_rot ? w : h;
    placed[idx] = {bx, by, best_rot};

    std::vector<FreeRect> next;
    next.reserve(free_rects.size() + 4);
    for (const FreeRect& f : free_rects) {
      bool intersects = bx < f.x2() - kRectTol && bx + pw > f.x + kRectTol &&
                        by < f.y2() - kRectTol && by + ph > f.y + kRectTol;
      if (!intersects) {
        next.push_back(f);
        continue;
      }
      if (bx - f.x > kRectTol) next.push_back({f.x, f.y, bx - f.x, f.h});
      if (f.x2() - (bx + pw) > kRectTol) next.push_back({bx + pw, f.y, f.x2() - (bx + pw), f.h});
      if (by - f.y > kRectTol) next.push_back({f.x, f.y, f.l, by - f.y});
      if (f.y2() - (by + ph) > kRectTol) next.push_back({f.x, by + ph, f.l, f.y2() - (by + ph)});
    }
    // Drop free rectangles contained in another.
    free_rects.clear();
    for (size_t i = 0; i < next.size(); ++i) {
      bool contained = false;
      for (size_t j = 0; j < next.size() && !contained; ++j) {
        if (i == j) continue;
        contained = next[i].x >= next[j].x - kRectTol && next[i].y >= next[j].y - kRectTol &&
                    next[i].x2() <= next[j].x2() + kRectTol &&
                    next[i].y2() <= next[j].y2() + kRectTol &&
                    (next[i].l < next[j].l - kRectTol || next[i].h < next[j].h - kRectTol ||
                     (i > j));
      }
      if (!contained) free_rects.push_back(next[i]);
    }
  }
  return placed;
}

std::vector<std::pair<size_t, size_t>> rectangle_violations(std::span<const Rect> items,
                                                            std::span<const RectPlacement> placed,
                                                            double bin_length, double bin_height,
                                                            double tol) {
  if (items.size() != placed.size()) throw ConfigError("placement count mismatch");
  std::vector<std::pair<size_t, size_t>> out;
  std::vector<Rect> world(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    double w = placed[i].rotated ? items[i].height : items[i].length;
    double h = placed[i].rotated ? items[i].length : items[i].height;
    world[i] = {placed[i].x, placed[i].y, w, h};
    bool inside = world[i].x >= -tol && world[i].y >= -tol &&
                  world[i].x_max() <= bin_length + tol && world[i].y_max() <= bin_height + tol;
    if (!inside) out.emplace_back(i, i);  // container violation
  }
  for (size_t i = 0; i < world.size(); ++i) {
    for (size_t j = i + 1; j < world.size(); ++j) {
      bool disjoint = world[i].x_max() <= world[j].x + tol ||
                      world[j].x_max() <= world[i].x + tol ||
                      world[i].y_max() <= world[j].y + tol ||
                      world[j].y_max() <= world[i].y + tol;
      if (!disjoint) out.emplace_back(i, j);
    }
  }
  return out;
}

std::optional<RelaxResult> relax_and_pack(std::span<const Rect> items, double height,
                                          double length_target, bool allow_rotate, double growth,
                                          int max_steps) {
  if (height <= 0.0) throw ConfigError("strip height must be positive");
  if (growth <= 1.0) throw ConfigError("relaxation growth must exceed 1");
  double start = length_target;
  if (std::isinf(length_target)) {
    // Sum of H-feasible widths: a single row always fits.
    start = 0.0;
    for (const Rect& r : items) {
      if (r.height <= height + kRectTol)
        start += r.length;
      else if (allow_rotate && r.length <= height + kRectTol)
        start += r.height;
      else
        return std::nullopt;
    }
  } else {
    for (const Rect& r : items) {
      bool ok = r.height <= height + kRectTol ||
                (allow_rotate && r.length <= height + kRectTol);
      if (!ok) return std::nullopt;
    }
  }
  if (start <= 0.0) return std::nullopt;

  for (int k = 0; k <= max_steps; ++k) {
    double bin_l = start * std::pow(growth, k);
    auto placed = pack_rectangles(items, bin_l, height, allow_rotate);
    if (!placed) continue;
    RelaxResult res;
    res.placements = std::move(*placed);
    res.bin_length = bin_l;
    res.relax_steps = k;
    for (size_t i = 0; i < items.size(); ++i) {
      double w = res.placements[i].rotated ? items[i].height : items[i].length;
      double h = res.placements[i].rotated ? items[i].length : items[i].height;
      res.length_used = std::max(res.length_used, res.placements[i].x + w);
      res.height_used = std::max(res.height_used, res.placements[i].y + h);
    }
    return res;
  }
  return std::nullopt;
}

Layout::Layout(std::vector<Polygon> base_pieces, std::vector<Pose> poses, double height)
    : base_(std::move(base_pieces)), poses_(std::move(poses)), height_(height) {
  if (base_.size() != poses_.size()) throw ConfigError("pose count mismatch");
  if (base_.empty()) throw ConfigError("layout needs at least one piece");
  if (height_ <= 0.0) throw ConfigError("strip height must be positive");
  placed_.reserve(base_.size());
  for (size_t i = 0; i < base_.size(); ++i) placed_.push_back(transform(base_[i], poses_[i]));
  refresh_length();
}

void Layout::set_pose(size_t i, const Pose& p) {
  poses_.at(i) = p;
  placed_.at(i) = transform(base_.at(i), p);
}

double Layout::piece_area_sum() const {
  double s = 0.0;
  for (const Polygon& p : base_) s += p.area();
  return s;
}

void Layout::refresh_length() {
  double l = 0.0;
  for (const Polygon& p : placed_) l = std::max(l, p.bounding_box().x_max());
  length_ = l;
}

LayoutMetrics layout_metrics(const Layout& layout) {
  LayoutMetrics m;
  m.length = layout.length();
  double box = layout.height() * layout.length();
  m.waste_area = box - layout.piece_area_sum();
  m.waste_ratio = box > 0.0 ? m.waste_area / box : 0.0;
  return m;
}

std::vector<std::string> validate_layout(const Layout& layout, double eps_area, double eps_len) {
  std::vector<std::string> problems;
  double eps = eps_len * std::max({1.0, layout.length(), layout.height()});
  Rect container{0.0, 0.0, layout.length(), layout.height()};
  for (size_t i = 0; i < layout.size(); ++i) {
    if (!contains(container, layout.placed(i), eps))
      problems.push_back("piece " + std::to_string(i) + " leaves the strip");
  }
  for (size_t i = 0; i < layout.size(); ++i) {
    for (size_t j = i + 1; j < layout.size(); ++j) {
      if (overlap(layout.placed(i), layout.placed(j), eps_area))
        problems.push_back("pieces " + std::to_string(i) + " and " + std::to_string(j) +
                           " overlap");
    }
  }
  return problems;
}

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
// Slide directions in priority order: left, down-left, up-left, down.
constexpr double kDirs[4][2] = {
    {-1.0, 0.0}, {-kInvSqrt2, -kInvSqrt2}, {-kInvSqrt2, kInvSqrt2}, {0.0, -1.0}};

bool placement_ok(const Layout& layout, size_t i, const Polygon& cand, const Rect& container,
                  double eps_area) {
  if (!contains(container, cand, 1e-9)) return false;
  for (size_t j = 0; j < layout.size(); ++j) {
    if (j == i) continue;
    if (overlap(cand, layout.placed(j), eps_area)) return false;
  }
  return true;
}

}  // namespace

Layout local_optimize(Layout layout, double delta_r, double eps_area) {
  if (delta_r <= 0.0) throw ConfigError("slide step must be positive");
  Rect container{0.0, 0.0, layout.length(), layout.height()};
  std::vector<size_t> order(layout.size());
  bool moved_any = true;
  while (moved_any) {
    moved_any = false;
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&layout](size_t a, size_t b) {
      Rect ra = layout.placed(a).bounding_box();
      Rect rb = layout.placed(b).bounding_box();
      return ra.x + ra.y < rb.x + rb.y;
    });
    for (size_t i : order) {
      for (bool moving = true; moving;) {
        moving = false;
        for (const auto& dir : kDirs) {
          Pose cand_pose = layout.pose(i);
          cand_pose.x += delta_r * dir[0];
          cand_pose.y += delta_r * dir[1];
          Polygon cand = transform(layout.base(i), cand_pose);
          if (!placement_ok(layout, i, cand, container, eps_area)) continue;
          layout.set_pose(i, cand_pose);
          moving = true;
          moved_any = true;
          break;
        }
      }
    }
  }
  layout.refresh_length();
  return layout;
}

Layout global_optimize(Layout layout, int grid_divisions, std::span<const double> phi_deg,
                       double delta_r, double eps_area) {
  if (grid_divisions < 2) throw ConfigError("grid needs at least 2 divisions");
  if (phi_deg.empty()) throw ConfigError("empty orientation set");
  const int guard_limit = 10000;
  for (int guard = 0; guard < guard_limit; ++guard) {
    layout.refresh_length();
    double len = layout.length();
    double strict = len - 1e-9 * std::max(1.0, len);

    size_t rightmost = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < layout.size(); ++i) {
      double xm = layout.placed(i).bounding_box().x_max();
      if (xm > worst) {
        worst = xm;
        rightmost = i;
      }
    }
    double others_max = 0.0;
    for (size_t i = 0; i < layout.size(); ++i)
      if (i != rightmost)
        others_max = std::max(others_max, layout.placed(i).bounding_box().x_max());
    if (layout.size() > 1 && others_max >= strict) break;  // tied rightmost pieces

    Rect container{0.0, 0.0, len, layout.height()};
    bool accepted = false;
    for (int gx = 0; gx < grid_divisions && !accepted; ++gx) {
      double x = len * gx / (grid_divisions - 1);
      for (int gy = 0; gy < grid_divisions && !accepted; ++gy) {
        double y = layout.height() * gy / (grid_divisions - 1);
        for (double phi : phi_deg) {
          Pose cand_pose{x, y, phi};
          Polygon cand = transform(layout.base(rightmost), cand_pose);
          if (cand.bounding_box().x_max() >= strict) continue;
          if (!placement_ok(layout, rightmost, cand, container, eps_area)) continue;
          layout.set_pose(rightmost, cand_pose);
          layout.refresh_length();
          layout = local_optimize(std::move(layout), delta_r, eps_area);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
  }
  layout.refresh_length();
  return layout;
}

}  // namespace opus
