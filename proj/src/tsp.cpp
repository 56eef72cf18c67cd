#include "opus/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opus {

double path_length(const SymMatrix& dist, std::span<const int> sigma) {
  const int n = dist.size();
  if (sigma.size() != static_cast<size_t>(n)) throw ConfigError("path length mismatch");
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (int v : sigma) {
    if (v < 0 || v >= n || used[static_cast<size_t>(v)])
      throw ConfigError("sigma is not a permutation");
    used[static_cast<size_t>(v)] = true;
  }
  double s = 0.0;
  for (size_t k = 0; k + 1 < sigma.size(); ++k) s += dist.at(sigma[k], sigma[k + 1]);
  return s;
}

HamiltonianPath brute_force(const SymMatrix& dist, int limit) {
  const int n = dist.size();
  if (n < 1) throw ConfigError("empty distance matrix");
  if (n > limit)
    throw LimitError("exhaustive path search limited to " + std::to_string(limit) +
                     " nodes, got " + std::to_string(n));
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  HamiltonianPath best{perm, path_length(dist, perm)};
  // Lexicographic enumeration with strict improvement keeps the
  // lexicographically smallest optimal order.
  while (std::next_permutation(perm.begin(), perm.end())) {
    double t = path_length(dist, perm);
    if (t < best.total) best = {perm, t};
  }
  return best;
}

std::pair<double, double> path_extremes(const SymMatrix& dist, int limit) {
  const int n = dist.size();
  if (n < 1) throw ConfigError("empty distance matrix");
  if (n > limit)
    throw LimitError("exhaustive path search limited to " + std::to_string(limit) + " nodes");
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double lo = path_length(dist, perm), hi = lo;
  while (std::next_permutation(perm.begin(), perm.end())) {
    double t = path_length(dist, perm);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {lo, hi};
}

double path_optimality(double total, double best, double worst) {
  if (worst <= best) return 1.0;
  return 1.0 - (total - best) / (worst - best);
}

double path_optimality(const SymMatrix& dist, std::span<const int> sigma, int limit) {
  auto [lo, hi] = path_extremes(dist, limit);
  return path_optimality(path_length(dist, sigma), lo, hi);
}

QuboModel build_qubo(const SymMatrix& dist, std::optional<double> penalty_a) {
  const int n = dist.size();
  if (n < 1) throw ConfigError("empty distance matrix");
  double maxd = dist.max_abs();
  double a = penalty_a.value_or(2.0 * maxd + 1.0);
  if (a <= maxd)
    throw ConfigError("penalty A must exceed the largest distance (A=" + std::to_string(a) +
                      ", max=" + std::to_string(maxd) + ")");
  QuboModel q;
  q.n = n;
  q.penalty_a = a;
  q.offset = 2.0 * a * static_cast<double>(n);
  q.linear.assign(static_cast<size_t>(n) * static_cast<size_t>(n), -2.0 * a);
  auto var = [n](int node, int step) { return node * n + step; };

  // One-hot penalties: every unordered pair within a step column and within a
  // node row carries +2A.
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        q.quadratic.push_back({var(i, p), var(j, p), 2.0 * a, 2});
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int s = p + 1; s < n; ++s)
        q.quadratic.push_back({var(i, p), var(i, s), 2.0 * a, 2});

  // Path cost: consecutive steps, kept in step order so a valid assignment
  // accumulates its edges exactly like path_length does.
  for (int p = 0; p + 1 < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        q.quadratic.push_back({var(i, p), var(j, p + 1), dist.at(i, j), 0});
      }
  return q;
}

namespace {

double energy_impl(const QuboModel& q, auto bit_at) {
  const int nv = q.num_vars();
  // The A-multiples are tracked in integer units so they cancel exactly on
  // permutation bitstrings; only the distance part stays in floating point.
  long units = 2 * q.n;
  for (int v = 0; v < nv; ++v)
    if (bit_at(v)) units -= 2;
  double cost = 0.0;
  for (const QuboModel::QuadTerm& t : q.quadratic) {
    if (!(bit_at(t.a) && bit_at(t.b))) continue;
    if (t.penalty_units != 0)
      units += t.penalty_units;
    else
      cost += t.coeff;
  }
  return cost + q.penalty_a * static_cast<double>(units);
}

}  // namespace

double qubo_energy(const QuboModel& q, uint32_t bits) {
  if (q.num_vars() > 32) throw ConfigError("packed bitstring supports at most 32 variables");
  return energy_impl(q, [bits](int v) { return (bits >> v) & 1u; });
}

double qubo_energy(const QuboModel& q, std::span<const uint8_t> bits) {
  if (bits.size() != static_cast<size_t>(q.num_vars()))
    throw ConfigError("bit vector size mismatch");
  return energy_impl(q, [bits](int v) { return bits[static_cast<size_t>(v)] != 0; });
}

uint32_t encode_path(std::span<const int> sigma, int n) {
  if (sigma.size() != static_cast<size_t>(n)) throw ConfigError("sigma size mismatch");
  if (n * n > 32) throw ConfigError("packed bitstring supports at most 32 variables");
  uint32_t bits = 0;
  for (int p = 0; p < n; ++p) {
    int node = sigma[static_cast<size_t>(p)];
    if (node < 0 || node >= n) throw ConfigError("sigma entry out of range");
    bits |= 1u << (node * n + p);
  }
  return bits;
}

std::optional<std::vector<int>> decode_path(uint32_t bits, int n) {
  std::vector<int> sigma(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (int p = 0; p < n; ++p) {
    int hit = -1;
    for (int i = 0; i < n; ++i) {
      if ((bits >> (i * n + p)) & 1u) {
        if (hit >= 0) return std::nullopt;
        hit = i;
      }
    }
    if (hit < 0 || used[static_cast<size_t>(hit)]) return std::nullopt;
    sigma[static_cast<size_t>(p)] = hit;
    used[static_cast<size_t>(hit)] = true;
  }
  return sigma;
}

}  // namespace opus
