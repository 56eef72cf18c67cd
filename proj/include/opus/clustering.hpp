#pragma once

#include <span>
#include <vector>

#include "opus/geometry.hpp"
#include "opus/matrix.hpp"

namespace opus {

struct Partition {
  std::vector<std::vector<int>> clusters;  // sorted members, clusters sorted by first member
  double d_max = 0.0;
  int n_max = 0;
};

// Single-linkage agglomeration over the incompatibility matrix.  A merge is
// admissible when the linkage is <= d_max and the merged size is <= n_max.
// By default inadmissible merges are skipped and the search continues with
// the next-closest pair; with literal_stop the first inadmissible closest
// pair ends clustering (which can leave mergeable clusters apart).
Partition single_linkage(const SymMatrix& incompat, double d_max, int n_max,
                         bool literal_stop = false);

// Sweep thresholds x cluster-size caps, deduplicate the resulting partitions,
// keep encounter order (thresholds ascending, then n_max ascending).
std::vector<Partition> enumerate_partitions(const SymMatrix& incompat,
                                            std::span<const double> thresholds, int n_max_lo,
                                            int n_max_hi, bool literal_stop = false);

// All distinct off-diagonal values, sorted ascending.
std::vector<double> candidate_thresholds(const SymMatrix& incompat);

// Sum of cluster-box areas; lower means denser clusters.
double partition_penalty(std::span<const Rect> cluster_boxes);

// Indices of the n_keep smallest penalties, output sorted ascending by
// penalty with ties kept in input order.
std::vector<size_t> filter_partitions(std::span<const double> penalties, int n_keep);

}  // namespace opus
