#pragma once

#include <array>
#include <span>
#include <vector>

#include "opus/errors.hpp"

namespace opus {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Rigid placement: rotate by angle_deg about the piece centroid, then move
// the centroid to (x, y).  Reflections are never applied.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double angle_deg = 0.0;
};

// Axis-aligned rectangle anchored at its bottom-left corner.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double length = 0.0;  // extent along x
  double height = 0.0;  // extent along y
  double area() const { return length * height; }
  double x_max() const { return x + length; }
  double y_max() const { return y + height; }
};

double cross(const Point& o, const Point& a, const Point& b);
double signed_area(std::span<const Point> ring);

// Simple polygon kept in counter-clockwise order.  Area, centroid, bounding
// box, circumradius and an ear-clip triangulation are computed once at
// construction; transformed copies reuse the triangulation indices so the
// expensive part runs once per shape.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  double area() const { return area_; }
  Point centroid() const { return centroid_; }
  Rect bounding_box() const { return bbox_; }
  double circumradius() const { return circumradius_; }
  double perimeter() const;

  const std::vector<std::array<int, 3>>& triangle_indices() const { return tri_; }

 private:
  friend Polygon transform(const Polygon&, const Pose&);
  Polygon() = default;
  void compute_derived();  // area, centroid, bbox, circumradius from vertices_

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> tri_;
  double area_ = 0.0;
  Point centroid_;
  Rect bbox_;
  double circumradius_ = 0.0;
};

Polygon transform(const Polygon& p, const Pose& pose);

// Convex hull (monotone chain), counter-clockwise, strictly convex: collinear
// points are dropped, every hull vertex is one of the inputs.
Polygon convex_hull(std::span<const Point> points);

// Area of the intersection of two simple polygons, computed as the sum of
// pairwise triangle-triangle clip areas over the cached triangulations.
// If early_out >= 0 the accumulation stops once the total exceeds it.
double intersection_area(const Polygon& a, const Polygon& b, double early_out = -1.0);

// Interiors intersect with intersection area strictly greater than eps_area.
// Boundary contact alone does not count as overlap.
bool overlap(const Polygon& a, const Polygon& b, double eps_area);

// Every vertex of p inside container inflated by eps on each side.
bool contains(const Rect& container, const Polygon& p, double eps);

Rect bounding_box(std::span<const Polygon> polys);

}  // namespace opus
