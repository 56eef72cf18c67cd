#include "opus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace opus {

const char* error_category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::InvalidArgument: return "invalid_argument";
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Geometry: return "geometry";
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Infeasible: return "infeasible";
    case ErrorCategory::Limit: return "limit";
    case ErrorCategory::Io: return "io";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(std::span<const Point> ring) {
  double s = 0.0;
  const size_t m = ring.size();
  for (size_t i = 0; i < m; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % m];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

namespace {

constexpr double kCollinearTol = 1e-9;

bool points_equal(const Point& a, const Point& b, double tol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

int orient_sign(const Point& o, const Point& a, const Point& b) {
  double c = cross(o, a, b);
  if (c > kCollinearTol) return 1;
  if (c < -kCollinearTol) return -1;
  return 0;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return std::min(a.x, b.x) - kCollinearTol <= p.x && p.x <= std::max(a.x, b.x) + kCollinearTol &&
         std::min(a.y, b.y) - kCollinearTol <= p.y && p.y <= std::max(a.y, b.y) + kCollinearTol;
}

// Any shared point counts as an intersection.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  int d1 = orient_sign(a, b, c);
  int d2 = orient_sign(a, b, d);
  int d3 = orient_sign(c, d, a);
  int d4 = orient_sign(c, d, b);
  if (d1 != d2 && d3 != d4 && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) return true;
  if (d1 == 0 && on_segment(c, a, b)) return true;
  if (d2 == 0 && on_segment(d, a, b)) return true;
  if (d3 == 0 && on_segment(a, c, d)) return true;
  if (d4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

void check_simple(const std::vector<Point>& v) {
  const size_t m = v.size();
  for (size_t i = 0; i < m; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % m];
    // Adjacent edge (i, i+1): reject a fold-back onto the incoming edge.
    const Point& c2 = v[(i + 2) % m];
    if (orient_sign(a, b, c2) == 0) {
      double dot = (b.x - a.x) * (c2.x - b.x) + (b.y - a.y) * (c2.y - b.y);
      if (dot < 0.0)
        throw ValidationError("polygon edge folds back onto itself at vertex " +
                              std::to_string((i + 1) % m));
    }
    for (size_t j = i + 1; j < m; ++j) {
      size_t jn = (j + 1) % m;
      if (j == i || jn == i || j == (i + 1) % m) continue;  // adjacent pairs
      if (segments_intersect(a, b, v[j], v[jn]))
        throw ValidationError("polygon is self-intersecting (edges " + std::to_string(i) + " and " +
                              std::to_string(j) + ")");
    }
  }
}

bool point_in_triangle_closed(const Point& p, const Point& a, const Point& b, const Point& c) {
  double c1 = cross(a, b, p);
  double c2 = cross(b, c, p);
  double c3 = cross(c, a, p);
  return c1 >= -kCollinearTol && c2 >= -kCollinearTol && c3 >= -kCollinearTol;
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Point>& v) {
  std::vector<int> idx(v.size());
  for (size_t i = 0; i < v.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> tris;
  tris.reserve(v.size() - 2);

  while (idx.size() > 3) {
    bool clipped = false;
    for (size_t k = 0; k < idx.size(); ++k) {
      int ip = idx[(k + idx.size() - 1) % idx.size()];
      int ic = idx[k];
      int in = idx[(k + 1) % idx.size()];
      double c = cross(v[ip], v[ic], v[in]);
      if (c <= kCollinearTol) {
        if (std::abs(c) <= kCollinearTol) {
          // Collinear vertex: zero-area ear, drop without emitting a triangle.
          idx.erase(idx.begin() + static_cast<long>(k));
          clipped = true;
          break;
        }
        continue;  // reflex
      }
      bool blocked = false;
      for (int other : idx) {
        if (other == ip || other == ic || other == in) continue;
        if (point_in_triangle_closed(v[other], v[ip], v[ic], v[in])) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        tris.push_back({ip, ic, in});
        idx.erase(idx.begin() + static_cast<long>(k));
        clipped = true;
        break;
      }
    }
    if (!clipped) {
      // Numeric corner case: clip the most convex remaining vertex.
      size_t best = 0;
      double best_c = -std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < idx.size(); ++k) {
        int ip = idx[(k + idx.size() - 1) % idx.size()];
        int ic = idx[k];
        int in = idx[(k + 1) % idx.size()];
        double c = cross(v[ip], v[ic], v[in]);
        if (c > best_c) {
          best_c = c;
          best = k;
        }
      }
      int ip = idx[(best + idx.size() - 1) % idx.size()];
      int ic = idx[best];
      int in = idx[(best + 1) % idx.size()];
      if (best_c > kCollinearTol) tris.push_back({ip, ic, in});
      idx.erase(idx.begin() + static_cast<long>(best));
    }
  }
  if (idx.size() == 3 && cross(v[idx[0]], v[idx[1]], v[idx[2]]) > kCollinearTol)
    tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3)
    throw ValidationError("polygon needs at least 3 vertices, got " +
                          std::to_string(vertices_.size()));
  for (size_t i = 0; i < vertices_.size(); ++i) {
    if (points_equal(vertices_[i], vertices_[(i + 1) % vertices_.size()], 1e-9))
      throw ValidationError("consecutive duplicate vertex at index " + std::to_string(i));
    if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y))
      throw ValidationError("non-finite vertex coordinate at index " + std::to_string(i));
  }
  double sa = signed_area(vertices_);
  if (std::abs(sa) <= 1e-9) throw ValidationError("degenerate polygon: area is zero");
  if (sa < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  check_simple(vertices_);
  tri_ = ear_clip(vertices_);
  compute_derived();
}

void Polygon::compute_derived() {
  area_ = signed_area(vertices_);
  double cx = 0.0, cy = 0.0;
  const size_t m = vertices_.size();
  for (size_t i = 0; i < m; ++i) {
    const Point& p = vertices_[i];
    const Point& q = vertices_[(i + 1) % m];
    double w = p.x * q.y - q.x * p.y;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  centroid_ = {cx / (6.0 * area_), cy / (6.0 * area_)};
  double x0 = vertices_[0].x, x1 = x0, y0 = vertices_[0].y, y1 = y0;
  for (const Point& p : vertices_) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  bbox_ = {x0, y0, x1 - x0, y1 - y0};
  circumradius_ = 0.0;
  for (const Point& p : vertices_)
    circumradius_ = std::max(circumradius_, std::hypot(p.x - centroid_.x, p.y - centroid_.y));
}

double Polygon::perimeter() const {
  double s = 0.0;
  const size_t m = vertices_.size();
  for (size_t i = 0; i < m; ++i) {
    const Point& p = vertices_[i];
    const Point& q = vertices_[(i + 1) % m];
    s += std::hypot(q.x - p.x, q.y - p.y);
  }
  return s;
}

Polygon transform(const Polygon& p, const Pose& pose) {
  double rad = pose.angle_deg * std::numbers::pi / 180.0;
  double c = std::cos(rad), s = std::sin(rad);
  Point ctr = p.centroid();
  Polygon out;
  out.vertices_.reserve(p.vertices_.size());
  for (const Point& v : p.vertices_) {
    double dx = v.x - ctr.x, dy = v.y - ctr.y;
    out.vertices_.push_back({pose.x + c * dx - s * dy, pose.y + s * dx + c * dy});
  }
  out.tri_ = p.tri_;  // rigid motion preserves the triangulation
  out.compute_derived();
  return out;
}

Polygon convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  if (pts.size() < 3) throw ValidationError("convex hull needs at least 3 points");
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) { return points_equal(a, b, 0.0); }),
            pts.end());
  std::vector<Point> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearTol) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearTol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw ValidationError("degenerate convex hull: points are collinear");
  return Polygon(std::move(hull));
}

namespace {

struct Tri {
  std::array<Point, 3> v;
  double minx, miny, maxx, maxy;
};

Tri make_tri(const Polygon& p, const std::array<int, 3>& idx) {
  Tri t;
  for (int k = 0; k < 3; ++k) t.v[static_cast<size_t>(k)] = p.vertices()[static_cast<size_t>(idx[static_cast<size_t>(k)])];
  t.minx = std::min({t.v[0].x, t.v[1].x, t.v[2].x});
  t.maxx = std::max({t.v[0].x, t.v[1].x, t.v[2].x});
  t.miny = std::min({t.v[0].y, t.v[1].y, t.v[2].y});
  t.maxy = std::max({t.v[0].y, t.v[1].y, t.v[2].y});
  return t;
}

// Clip triangle `a` against the CCW triangle `b` (Sutherland-Hodgman) and
// return the area of the remainder.
double clip_area(const Tri& a, const Tri& b) {
  std::array<Point, 16> buf_a;
  std::array<Point, 16> buf_b;
  size_t n_in = 3;
  buf_a[0] = a.v[0];
  buf_a[1] = a.v[1];
  buf_a[2] = a.v[2];
  Point* in = buf_a.data();
  Point* out = buf_b.data();
  for (int e = 0; e < 3 && n_in >= 3; ++e) {
    const Point& ca = b.v[static_cast<size_t>(e)];
    const Point& cb = b.v[static_cast<size_t>((e + 1) % 3)];
    double ex = cb.x - ca.x, ey = cb.y - ca.y;
    size_t n_out = 0;
    for (size_t i = 0; i < n_in; ++i) {
      const Point& p = in[i];
      const Point& q = in[(i + 1) % n_in];
      double dp = ex * (p.y - ca.y) - ey * (p.x - ca.x);  // >= 0 is left of the CCW edge
      double dq = ex * (q.y - ca.y) - ey * (q.x - ca.x);
      bool p_in = dp >= 0.0, q_in = dq >= 0.0;
      if (p_in) out[n_out++] = p;
      if (p_in != q_in) {
        double t = dp / (dp - dq);
        out[n_out++] = {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
      }
    }
    std::swap(in, out);
    n_in = n_out;
  }
  if (n_in < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < n_in; ++i) {
    const Point& p = in[i];
    const Point& q = in[(i + 1) % n_in];
    s += p.x * q.y - q.x * p.y;
  }
  return std::abs(0.5 * s);
}

}  // namespace

double intersection_area(const Polygon& a, const Polygon& b, double early_out) {
  Rect ra = a.bounding_box(), rb = b.bounding_box();
  if (ra.x_max() <= rb.x || rb.x_max() <= ra.x || ra.y_max() <= rb.y || rb.y_max() <= ra.y)
    return 0.0;
  std::vector<Tri> ta, tb;
  ta.reserve(a.triangle_indices().size());
  tb.reserve(b.triangle_indices().size());
  for (const auto& idx : a.triangle_indices()) ta.push_back(make_tri(a, idx));
  for (const auto& idx : b.triangle_indices()) tb.push_back(make_tri(b, idx));
  double total = 0.0;
  for (const Tri& x : ta) {
    for (const Tri& y : tb) {
      if (x.maxx <= y.minx || y.maxx <= x.minx || x.maxy <= y.miny || y.maxy <= x.miny) continue;
      total += clip_area(x, y);
      if (early_out >= 0.0 && total > early_out) return total;
    }
  }
  return total;
}

bool overlap(const Polygon& a, const Polygon& b, double eps_area) {
  if (eps_area < 0.0) throw ConfigError("overlap tolerance must be non-negative");
  return intersection_area(a, b, eps_area) > eps_area;
}

bool contains(const Rect& container, const Polygon& p, double eps) {
  for (const Point& v : p.vertices()) {
    if (v.x < container.x - eps || v.x > container.x_max() + eps || v.y < container.y - eps ||
        v.y > container.y_max() + eps)
      return false;
  }
  return true;
}

Rect bounding_box(std::span<const Polygon> polys) {
  if (polys.empty()) throw ValidationError("bounding box of an empty set");
  Rect r = polys[0].bounding_box();
  double x0 = r.x, x1 = r.x_max(), y0 = r.y, y1 = r.y_max();
  for (const Polygon& p : polys.subspan(1)) {
    Rect b = p.bounding_box();
    x0 = std::min(x0, b.x);
    x1 = std::max(x1, b.x_max());
    y0 = std::min(y0, b.y);
    y1 = std::max(y1, b.y_max());
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace opus
