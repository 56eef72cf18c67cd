#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "opus/geometry.hpp"

namespace testsupport {

// Star-shaped simple polygon around (cx, cy): strictly increasing vertex
// angles keep the boundary non-self-intersecting, radius oscillation makes
// most instances concave.
inline opus::Polygon random_polygon(std::mt19937_64& rng, int min_v = 4, int max_v = 9,
                                    double scale = 1.0, double cx = 0.0, double cy = 0.0) {
  std::uniform_int_distribution<int> nv(min_v, max_v);
  std::uniform_real_distribution<double> jitter(0.0, 0.8);
  std::uniform_real_distribution<double> radius(0.3, 1.0);
  int n = nv(rng);
  std::vector<opus::Point> pts;
  pts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double ang = 2.0 * std::numbers::pi * (static_cast<double>(i) + jitter(rng)) / n;
    double r = radius(rng) * scale;
    pts.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
  }
  return opus::Polygon(pts);
}

inline opus::Polygon unit_square() {
  return opus::Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

inline opus::Polygon rectangle(double x, double y, double l, double h) {
  return opus::Polygon({{x, y}, {x + l, y}, {x + l, y + h}, {x, y + h}});
}

}  // namespace testsupport
