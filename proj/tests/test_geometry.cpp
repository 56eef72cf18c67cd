#include <doctest.h>

#include <cmath>
#include <random>

#include "opus/geometry.hpp"
#include "support/generators.hpp"

using namespace opus;

TEST_CASE("area and centroid of the unit square") {
  Polygon sq = testsupport::unit_square();
  CHECK(sq.area() == doctest::Approx(1.0));
  CHECK(sq.centroid().x == doctest::Approx(0.5));
  CHECK(sq.centroid().y == doctest::Approx(0.5));
  Rect bb = sq.bounding_box();
  CHECK(bb.x == doctest::Approx(0.0));
  CHECK(bb.length == doctest::Approx(1.0));
  CHECK(bb.height == doctest::Approx(1.0));
}

TEST_CASE("clockwise input is normalized to counter-clockwise") {
  Polygon sq({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(sq.area() > 0.0);
  CHECK(signed_area(sq.vertices()) > 0.0);
}

TEST_CASE("degenerate and self-intersecting polygons are rejected") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {2, 2}}), ValidationError);           // collinear
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ValidationError);   // bowtie
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 0}, {1, 1}}), ValidationError);   // dup vertex
}

TEST_CASE("transform rotates about the centroid and moves it to the target") {
  Polygon sq = testsupport::rectangle(10, 10, 1, 1);
  CHECK(sq.centroid().x == doctest::Approx(10.5));
  CHECK(sq.centroid().y == doctest::Approx(10.5));

  Polygon moved = transform(testsupport::unit_square(), Pose{10.0, 10.0, 90.0});
  CHECK(moved.area() == doctest::Approx(1.0));
  CHECK(moved.centroid().x == doctest::Approx(10.0));
  CHECK(moved.centroid().y == doctest::Approx(10.0));

  Polygon rect = testsupport::rectangle(0, 0, 4, 2);
  Polygon rot = transform(rect, Pose{0.0, 0.0, 90.0});
  Rect bb = rot.bounding_box();
  CHECK(bb.length == doctest::Approx(2.0));
  CHECK(bb.height == doctest::Approx(4.0));
}

TEST_CASE("transform preserves area and perimeter under fuzz") {
  std::mt19937_64 rng(20250815);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> ang(0.0, 360.0);
  for (int i = 0; i < 200; ++i) {
    Polygon p = testsupport::random_polygon(rng, 4, 10, 5.0);
    Pose pose{coord(rng), coord(rng), ang(rng)};
    Polygon q = transform(p, pose);
    CHECK(q.area() == doctest::Approx(p.area()).epsilon(1e-6));
    CHECK(q.perimeter() == doctest::Approx(p.perimeter()).epsilon(1e-6));
    CHECK(q.centroid().x == doctest::Approx(pose.x).epsilon(1e-6));
    CHECK(q.centroid().y == doctest::Approx(pose.y).epsilon(1e-6));
  }
}

TEST_CASE("convex hull of an L-shape") {
  Polygon l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(l.area() == doctest::Approx(3.0));
  Polygon hull = convex_hull(l.vertices());
  CHECK(hull.area() == doctest::Approx(3.5));
  CHECK(hull.vertices().size() == 5);
  // Idempotent and contains the input.
  Polygon hull2 = convex_hull(hull.vertices());
  CHECK(hull2.area() == doctest::Approx(hull.area()));
  CHECK(hull2.vertices().size() == hull.vertices().size());
  CHECK(hull.area() >= l.area());
}

TEST_CASE("convex hull is the convexity fixpoint under fuzz") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Polygon p = testsupport::random_polygon(rng, 5, 12, 3.0);
    Polygon hull = convex_hull(p.vertices());
    CHECK(hull.area() >= p.area() - 1e-9);
    Polygon hull2 = convex_hull(hull.vertices());
    CHECK(hull2.area() == doctest::Approx(hull.area()).epsilon(1e-9));
  }
}

TEST_CASE("collinear points have no hull") {
  std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(convex_hull(pts), ValidationError);
}

TEST_CASE("edge contact is not overlap") {
  Polygon a = testsupport::unit_square();
  Polygon b = testsupport::rectangle(1.0, 0.0, 1.0, 1.0);
  CHECK_FALSE(overlap(a, b, 1e-9));
  CHECK(intersection_area(a, b) == doctest::Approx(0.0));
}

TEST_CASE("half-shifted squares overlap with area one half") {
  Polygon a = testsupport::unit_square();
  Polygon b = testsupport::rectangle(0.5, 0.0, 1.0, 1.0);
  CHECK(overlap(a, b, 1e-9));
  CHECK(intersection_area(a, b) == doctest::Approx(0.5));
  CHECK(overlap(b, a, 1e-9));
  CHECK(intersection_area(b, a) == doctest::Approx(0.5));
}

TEST_CASE("intersection area handles concave pieces") {
  // Small square inside the notch of a C shape: zero intersection.
  Polygon c({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 2}, {3, 2}, {3, 3}, {0, 3}});
  Polygon probe = testsupport::rectangle(1.8, 1.2, 0.6, 0.6);
  CHECK_FALSE(overlap(c, probe, 1e-9));
  // Shift left so it pokes into the solid part.
  Polygon probe2 = testsupport::rectangle(0.5, 1.2, 0.6, 0.6);
  CHECK(overlap(c, probe2, 1e-9));
  CHECK(intersection_area(c, probe2) == doctest::Approx(0.3));
}

TEST_CASE("overlap is symmetric under fuzz") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> shift(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    Polygon a = testsupport::random_polygon(rng, 4, 9);
    Polygon b = testsupport::random_polygon(rng, 4, 9, 1.0, shift(rng), shift(rng));
    double ab = intersection_area(a, b);
    double ba = intersection_area(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-7));
    CHECK(overlap(a, b, 1e-9) == overlap(b, a, 1e-9));
    CHECK(ab <= std::min(a.area(), b.area()) + 1e-7);
  }
}

TEST_CASE("a polygon fully overlaps itself") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Polygon p = testsupport::random_polygon(rng);
    CHECK(intersection_area(p, p) == doctest::Approx(p.area()).epsilon(1e-7));
  }
}

TEST_CASE("containment uses the inflated rectangle") {
  Rect box{0, 0, 10, 10};
  CHECK(contains(box, testsupport::unit_square(), 1e-9));
  CHECK_FALSE(contains(box, testsupport::rectangle(9.5, 0, 1, 1), 1e-9));
  CHECK(contains(box, testsupport::rectangle(9.5, 0, 1, 1), 0.6));
  CHECK_FALSE(contains(box, testsupport::rectangle(-0.001, 0, 1, 1), 1e-9));
}

TEST_CASE("bounding box of a set of polygons") {
  std::vector<Polygon> ps{testsupport::unit_square(), testsupport::rectangle(4, -1, 2, 1)};
  Rect bb = bounding_box(ps);
  CHECK(bb.x == doctest::Approx(0.0));
  CHECK(bb.y == doctest::Approx(-1.0));
  CHECK(bb.length == doctest::Approx(6.0));
  CHECK(bb.height == doctest::Approx(2.0));
}
