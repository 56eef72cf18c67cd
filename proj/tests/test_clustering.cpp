#include <doctest.h>

#include <random>

#include "opus/clustering.hpp"

using namespace opus;

namespace {

SymMatrix gi3() {
  SymMatrix m(3);
  m.set(0, 1, 0.1);
  m.set(0, 2, 0.5);
  m.set(1, 2, 0.6);
  return m;
}

bool is_valid_partition(const Partition& p, int n) {
  std::vector<int> seen(static_cast<size_t>(n), 0);
  for (const auto& c : p.clusters) {
    if (c.empty()) return false;
    if (static_cast<int>(c.size()) > p.n_max) return false;
    for (int i : c) {
      if (i < 0 || i >= n || seen[static_cast<size_t>(i)]) return false;
      seen[static_cast<size_t>(i)] = 1;
    }
  }
  for (int s : seen)
    if (!s) return false;
  return true;
}

}  // namespace

TEST_CASE("a threshold below every linkage keeps singletons") {
  Partition p = single_linkage(gi3(), 0.05, 4);
  CHECK(p.clusters.size() == 3);
  for (const auto& c : p.clusters) CHECK(c.size() == 1);
}

TEST_CASE("a size cap of one keeps singletons at any threshold") {
  Partition p = single_linkage(gi3(), 10.0, 1);
  CHECK(p.clusters.size() == 3);
}

TEST_CASE("two-step agglomeration stops at the threshold") {
  // 0-1 merge at 0.1; the cluster-to-2 linkage is min(0.5, 0.6) > d_max.
  Partition p = single_linkage(gi3(), 0.2, 4);
  REQUIRE(p.clusters.size() == 2);
  CHECK(p.clusters[0] == std::vector<int>{0, 1});
  CHECK(p.clusters[1] == std::vector<int>{2});
}

TEST_CASE("high threshold merges everything under the size cap") {
  Partition p = single_linkage(gi3(), 1.0, 3);
  REQUIRE(p.clusters.size() == 1);
  CHECK(p.clusters[0] == std::vector<int>{0, 1, 2});

  // cap 2 blocks the second merge; skip mode continues past it, nothing else
  // is admissible, so {0,1},{2} remains
  Partition capped = single_linkage(gi3(), 1.0, 2);
  CHECK(capped.clusters.size() == 2);
}

TEST_CASE("literal stop can leave admissible merges on the table") {
  // closest pair joins 0-1; the next closest linkage (0.5 via piece 0) is
  // over the cap, so literal mode stops even though 2-3 at 0.55 fits
  SymMatrix m(4);
  m.set(0, 1, 0.1);
  m.set(0, 2, 0.5);
  m.set(1, 2, 0.52);
  m.set(0, 3, 0.51);
  m.set(1, 3, 0.53);
  m.set(2, 3, 0.55);
  Partition skip = single_linkage(m, 1.0, 2, false);
  Partition literal = single_linkage(m, 1.0, 2, true);
  CHECK(skip.clusters.size() == 2);    // {0,1} and {2,3}
  CHECK(literal.clusters.size() == 3); // {0,1}, {2}, {3}
}

TEST_CASE("candidate thresholds are the distinct linkages, ascending") {
  auto t = candidate_thresholds(gi3());
  CHECK(t == std::vector<double>{0.1, 0.5, 0.6});
  SymMatrix dup(3);
  dup.set(0, 1, 0.3);
  dup.set(0, 2, 0.3);
  dup.set(1, 2, 0.7);
  CHECK(candidate_thresholds(dup) == std::vector<double>{0.3, 0.7});
}

TEST_CASE("a single piece enumerates exactly one partition") {
  SymMatrix one(1);
  auto ps = enumerate_partitions(one, candidate_thresholds(one), 1, 4);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].clusters == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("identical pieces enumerate the size-capped agglomerations once each") {
  SymMatrix zero(3);  // all gi = 0
  auto ps = enumerate_partitions(zero, candidate_thresholds(zero), 1, 3);
  // distinct outcomes: singletons (cap 1), one pair (cap 2), one triple (cap 3)
  REQUIRE(ps.size() == 3);
  CHECK(ps[0].clusters.size() == 3);
  CHECK(ps[1].clusters.size() == 2);
  CHECK(ps[2].clusters.size() == 1);
}

TEST_CASE("every enumerated partition is a valid cover under fuzz") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    int n = 2 + static_cast<int>(rng() % 7);
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m.set(i, j, u(rng));
    auto ps = enumerate_partitions(m, candidate_thresholds(m), 1, 4);
    CHECK(!ps.empty());
    for (const Partition& p : ps) CHECK(is_valid_partition(p, n));
    // raising d_max never increases the cluster count at fixed n_max
    auto ts = candidate_thresholds(m);
    size_t prev = SIZE_MAX;
    for (double t : ts) {
      Partition p = single_linkage(m, t, n);
      CHECK(p.clusters.size() <= prev);
      prev = p.clusters.size();
    }
  }
}

TEST_CASE("partition penalty sums the box areas") {
  std::vector<Rect> one{{0, 0, 2, 3}};
  CHECK(partition_penalty(one) == doctest::Approx(6.0));
  std::vector<Rect> two{{0, 0, 1, 1}, {0, 0, 2, 2}};
  CHECK(partition_penalty(two) == doctest::Approx(5.0));
}

TEST_CASE("filter keeps the n smallest penalties in ascending order") {
  std::vector<double> pen{5.0, 3.0, 9.0};
  auto one = filter_partitions(pen, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 1);
  auto all = filter_partitions(pen, 10);
  REQUIRE(all.size() == 3);
  CHECK(all == std::vector<size_t>{1, 0, 2});
  // ties keep input order
  std::vector<double> tied{4.0, 2.0, 4.0, 2.0};
  CHECK(filter_partitions(tied, 3) == std::vector<size_t>{1, 3, 0});
}
