#pragma once

#include <span>
#include <vector>

#include "opus/errors.hpp"

namespace opus {

// Dense symmetric matrix with zero diagonal, used for pairwise distance and
// incompatibility tables.  Writes mirror automatically.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0) {
    if (n < 0) throw ConfigError("matrix size must be non-negative");
  }

  int size() const { return n_; }

  double at(int i, int j) const { return d_[idx(i, j)]; }

  void set(int i, int j, double v) {
    d_[idx(i, j)] = v;
    d_[idx(j, i)] = v;
  }

  // Off-diagonal maximum of |value|.
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) m = std::max(m, std::abs(at(i, j)));
    return m;
  }

  SymMatrix submatrix(std::span<const int> rows) const {
    SymMatrix s(static_cast<int>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = i + 1; j < rows.size(); ++j)
        s.set(static_cast<int>(i), static_cast<int>(j), at(rows[i], rows[j]));
    return s;
  }

 private:
  size_t idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ConfigError("matrix index out of range");
    return static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j);
  }

  int n_ = 0;
  std::vector<double> d_;
};

}  // namespace opus
