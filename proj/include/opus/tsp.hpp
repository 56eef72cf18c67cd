#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "opus/matrix.hpp"

namespace opus {

struct HamiltonianPath {
  std::vector<int> order;  // visiting order, open path
  double total = 0.0;
};

// Sum of consecutive-step distances along sigma (open path, no return edge).
double path_length(const SymMatrix& dist, std::span<const int> sigma);

// Exhaustive search; among all optimal orders the lexicographically smallest
// is returned, so a path and its reverse resolve deterministically.
HamiltonianPath brute_force(const SymMatrix& dist, int limit = 10);

// (shortest, longest) open-path totals by the same enumeration.
std::pair<double, double> path_extremes(const SymMatrix& dist, int limit = 10);

// 1 - (total - best) / (worst - best); 1.0 when every path has equal length.
double path_optimality(const SymMatrix& dist, std::span<const int> sigma, int limit = 10);
double path_optimality(double total, double best, double worst);

// Binary model for the open-path problem on n nodes with one variable per
// (node, step) pair, index = node * n + step.  Bit b of a packed bitstring k
// is variable b, i.e. (k >> b) & 1.
//
// Energy = sum_ij d_ij sum_p x[i,p] x[j,p+1]
//        + A sum_p (1 - sum_i x[i,p])^2 + A sum_i (1 - sum_p x[i,p])^2.
// Expanded: offset 2An, linear -2A per variable, +2A per same-row and
// same-column variable pair, d_ij on each (i,p),(j,p+1) pair.  The evaluator
// accumulates the A-part in integer units so the penalty cancels exactly on
// permutation bitstrings and the remaining energy equals path_length bit for
// bit.
struct QuboModel {
  struct QuadTerm {
    int a = 0;
    int b = 0;
    double coeff = 0.0;
    int penalty_units = 0;  // integer multiple of A carried by this term
  };

  int n = 0;
  double penalty_a = 0.0;
  double offset = 0.0;             // 2An
  std::vector<double> linear;      // -2A each
  std::vector<QuadTerm> quadratic; // penalty pairs first, then step pairs ordered by step

  int num_vars() const { return n * n; }
};

// A must exceed max |d|; by default A = 2 * max|d| + 1.
QuboModel build_qubo(const SymMatrix& dist, std::optional<double> penalty_a = std::nullopt);

double qubo_energy(const QuboModel& q, uint32_t bits);
double qubo_energy(const QuboModel& q, std::span<const uint8_t> bits);

// Permutation bitstring for sigma: x[sigma(p), p] = 1.
uint32_t encode_path(std::span<const int> sigma, int n);

// Inverse of encode_path; nullopt when bits is not a permutation matrix.
std::optional<std::vector<int>> decode_path(uint32_t bits, int n);

}  // namespace opus
