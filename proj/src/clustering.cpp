#include "opus/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace opus {

namespace {

// Single-linkage distance: minimum pairwise incompatibility across clusters.
double linkage(const SymMatrix& m, const std::vector<int>& a, const std::vector<int>& b) {
  double d = std::numeric_limits<double>::infinity();
  for (int i : a)
    for (int j : b) d = std::min(d, m.at(i, j));
  return d;
}

void canonicalize(Partition& p) {
  for (auto& c : p.clusters) std::sort(c.begin(), c.end());
  std::sort(p.clusters.begin(), p.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

Partition single_linkage(const SymMatrix& incompat, double d_max, int n_max, bool literal_stop) {
  const int n = incompat.size();
  if (n <= 0) throw ConfigError("clustering needs at least one item");
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  if (d_max < 0.0) throw ConfigError("d_max must be non-negative");

  std::vector<std::vector<int>> clusters(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) clusters[static_cast<size_t>(i)] = {i};

  for (;;) {
    // Candidate merges ordered by (linkage, min-index pair).
    double best_d = std::numeric_limits<double>::infinity();
    size_t best_a = 0, best_b = 0;
    bool found = false;
    for (size_t a = 0; a < clusters.size(); ++a) {
      for (size_t b = a + 1; b < clusters.size(); ++b) {
        if (!literal_stop &&
            static_cast<int>(clusters[a].size() + clusters[b].size()) > n_max)
          continue;
        // The cluster list stays ordered by smallest member, so scanning
        // (a, b) lexicographically breaks linkage ties toward the lowest
        // index pair.
        double d = linkage(incompat, clusters[a], clusters[b]);
        if (d < best_d) {
          best_d = d;
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    if (!found || best_d > d_max) break;
    if (literal_stop &&
        static_cast<int>(clusters[best_a].size() + clusters[best_b].size()) > n_max)
      break;
    auto merged = clusters[best_a];
    merged.insert(merged.end(), clusters[best_b].begin(), clusters[best_b].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<long>(best_b));
    clusters[best_a] = std::move(merged);
  }

  Partition p;
  p.clusters = std::move(clusters);
  p.d_max = d_max;
  p.n_max = n_max;
  canonicalize(p);
  return p;
}

std::vector<double> candidate_thresholds(const SymMatrix& incompat) {
  std::vector<double> vals;
  for (int i = 0; i < incompat.size(); ++i)
    for (int j = i + 1; j < incompat.size(); ++j) vals.push_back(incompat.at(i, j));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             vals.end());
  return vals;
}

std::vector<Partition> enumerate_partitions(const SymMatrix& incompat,
                                            std::span<const double> thresholds, int n_max_lo,
                                            int n_max_hi, bool literal_stop) {
  if (n_max_lo < 1 || n_max_hi < n_max_lo) throw ConfigError("bad n_max range");
  // No admissible linkage (single piece, or all-identical values filtered
  // out) still has to produce the trivial clustering.
  static constexpr double kZero[] = {0.0};
  if (thresholds.empty()) thresholds = kZero;
  std::vector<Partition> out;
  auto seen = [&out](const Partition& p) {
    return std::any_of(out.begin(), out.end(),
                       [&p](const Partition& q) { return q.clusters == p.clusters; });
  };
  for (double t : thresholds) {
    for (int k = n_max_lo; k <= n_max_hi; ++k) {
      Partition p = single_linkage(incompat, t, k, literal_stop);
      if (!seen(p)) out.push_back(std::move(p));
    }
  }
  return out;
}

double partition_penalty(std::span<const Rect> cluster_boxes) {
  double s = 0.0;
  for (const Rect& r : cluster_boxes) s += r.area();
  return s;
}

std::vector<size_t> filter_partitions(std::span<const double> penalties, int n_keep) {
  if (n_keep < 1) throw ConfigError("must keep at least one partition");
  std::vector<size_t> idx(penalties.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&penalties](size_t a, size_t b) { return penalties[a] < penalties[b]; });
  if (idx.size() > static_cast<size_t>(n_keep)) idx.resize(static_cast<size_t>(n_keep));
  return idx;
}

}  // namespace opus
