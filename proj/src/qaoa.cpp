#include "opus/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opus/rng.hpp"

namespace opus {

CostDiagonal cost_diagonal(const QuboModel& q, int qubit_cap) {
  CostDiagonal d;
  d.n = q.n;
  d.num_qubits = q.num_vars();
  if (d.num_qubits > qubit_cap)
    throw LimitError("problem needs " + std::to_string(d.num_qubits) +
                     " qubits, the simulator cap is " + std::to_string(qubit_cap));
  size_t dim = size_t{1} << d.num_qubits;
  d.values.resize(dim);
  for (size_t k = 0; k < dim; ++k) d.values[k] = qubo_energy(q, static_cast<uint32_t>(k));
  return d;
}

StateVector uniform_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 24) throw ConfigError("unsupported qubit count");
  size_t dim = size_t{1} << num_qubits;
  return StateVector(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

void apply_cost_phase(StateVector& state, double gamma, const CostDiagonal& cost) {
  if (state.size() != cost.values.size()) throw ConfigError("state size mismatch");
  for (size_t z = 0; z < state.size(); ++z) {
    double ang = -gamma * cost.values[z];
    state[z] *= std::complex<double>(std::cos(ang), std::sin(ang));
  }
}

void apply_mixer(StateVector& state, int num_qubits, double beta) {
  if (state.size() != (size_t{1} << num_qubits)) throw ConfigError("state size mismatch");
  double c = std::cos(beta);
  std::complex<double> ms(0.0, -std::sin(beta));
  for (int b = 0; b < num_qubits; ++b) {
    size_t stride = size_t{1} << b;
    for (size_t base = 0; base < state.size(); base += 2 * stride) {
      for (size_t off = 0; off < stride; ++off) {
        size_t z0 = base + off;
        size_t z1 = z0 + stride;
        std::complex<double> a0 = state[z0];
        std::complex<double> a1 = state[z1];
        state[z0] = c * a0 + ms * a1;
        state[z1] = ms * a0 + c * a1;
      }
    }
  }
}

StateVector evolve(std::span<const double> gamma, std::span<const double> beta,
                   const CostDiagonal& cost) {
  if (gamma.size() != beta.size()) throw ConfigError("gamma/beta length mismatch");
  StateVector state = uniform_state(cost.num_qubits);
  for (size_t k = 0; k < gamma.size(); ++k) {
    apply_cost_phase(state, gamma[k], cost);
    apply_mixer(state, cost.num_qubits, beta[k]);
  }
  return state;
}

double expectation(const StateVector& state, const CostDiagonal& cost) {
  if (state.size() != cost.values.size()) throw ConfigError("state size mismatch");
  double e = 0.0;
  for (size_t z = 0; z < state.size(); ++z) e += std::norm(state[z]) * cost.values[z];
  return e;
}

namespace {

struct Tracker {
  const CostDiagonal& cost;
  std::vector<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  int evals = 0;

  double operator()(const std::vector<double>& x) {
    size_t p = x.size() / 2;
    StateVector s = evolve(std::span(x.data(), p), std::span(x.data() + p, p), cost);
    double f = expectation(s, cost);
    ++evals;
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    return f;
  }
};

void nelder_mead(Tracker& obj, std::vector<double> x0, int max_evals) {
  const size_t dim = x0.size();
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> f(dim + 1);
  for (size_t i = 0; i < dim; ++i) pts[i + 1][i] += 0.1;
  for (size_t i = 0; i <= dim; ++i) {
    if (obj.evals >= max_evals) return;
    f[i] = obj(pts[i]);
  }
  std::vector<size_t> ord(dim + 1);
  while (obj.evals < max_evals) {
    std::iota(ord.begin(), ord.end(), size_t{0});
    std::sort(ord.begin(), ord.end(), [&f](size_t a, size_t b) { return f[a] < f[b]; });
    if (f[ord.back()] - f[ord.front()] < 1e-9) return;
    std::vector<double> centroid(dim, 0.0);
    for (size_t k = 0; k < dim; ++k)
      for (size_t i = 0; i < dim; ++i) centroid[i] += pts[ord[k]][i] / static_cast<double>(dim);
    size_t worst = ord.back();
    auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (size_t i = 0; i < dim; ++i) p[i] = centroid[i] + t * (pts[worst][i] - centroid[i]);
      return p;
    };
    std::vector<double> xr = blend(-alpha);
    double fr = obj(xr);
    if (fr < f[ord.front()]) {
      std::vector<double> xe = blend(-gamma);
      double fe = obj(xe);
      if (fe < fr) {
        pts[worst] = xe;
        f[worst] = fe;
      } else {
        pts[worst] = xr;
        f[worst] = fr;
      }
    } else if (fr < f[ord[dim - 1]]) {
      pts[worst] = xr;
      f[worst] = fr;
    } else {
      std::vector<double> xc = blend(rho);
      double fc = obj(xc);
      if (fc < f[worst]) {
        pts[worst] = xc;
        f[worst] = fc;
      } else {
        for (size_t k = 1; k <= dim; ++k) {
          size_t i = ord[k];
          for (size_t d = 0; d < dim; ++d)
            pts[i][d] = pts[ord[0]][d] + sigma * (pts[i][d] - pts[ord[0]][d]);
          if (obj.evals >= max_evals) return;
          f[i] = obj(pts[i]);
        }
      }
    }
  }
}

void coordinate_descent(Tracker& obj, std::vector<double> x, int max_evals) {
  double fx = obj(x);
  double h = 0.05;
  while (obj.evals + 2 <= max_evals && h > 1e-4) {
    bool improved = false;
    for (size_t i = 0; i < x.size() && obj.evals + 2 <= max_evals; ++i) {
      std::vector<double> xt = x;
      xt[i] += h;
      double fp = obj(xt);
      if (fp < fx) {
        x = xt;
        fx = fp;
        improved = true;
        continue;
      }
      xt[i] = x[i] - h;
      double fm = obj(xt);
      if (fm < fx) {
        x = xt;
        fx = fm;
        improved = true;
      }
    }
    if (!improved) h *= 0.5;
  }
}

void spsa(Tracker& obj, std::vector<double> x, int max_evals, uint64_t seed) {
  const size_t dim = x.size();
  std::mt19937_64 rng = make_rng(seed, 0x5b5a);
  std::bernoulli_distribution coin(0.5);
  const double a0 = 0.15, c0 = 0.1, alpha = 0.602, gamma = 0.101;
  int iters = std::max(1, max_evals / 2);
  const double stab = 0.1 * iters;
  for (int k = 0; k < iters && obj.evals + 2 <= max_evals; ++k) {
    double ak = a0 / std::pow(k + 1 + stab, alpha);
    double ck = c0 / std::pow(k + 1, gamma);
    std::vector<double> delta(dim);
    for (double& d : delta) d = coin(rng) ? 1.0 : -1.0;
    std::vector<double> xp = x, xm = x;
    for (size_t i = 0; i < dim; ++i) {
      xp[i] += ck * delta[i];
      xm[i] -= ck * delta[i];
    }
    double fp = obj(xp);
    double fm = obj(xm);
    for (size_t i = 0; i < dim; ++i) x[i] -= ak * (fp - fm) / (2.0 * ck * delta[i]);
  }
  obj(x);
}

}  // namespace

OptimizeResult optimize_params(const CostDiagonal& cost, const QaoaConfig& cfg) {
  if (cfg.reps < 1) throw ConfigError("layer count must be at least 1");
  if (cfg.max_evals < 1) throw ConfigError("max_evals must be at least 1");
  size_t p = static_cast<size_t>(cfg.reps);
  Tracker obj{cost, {}, std::numeric_limits<double>::infinity(), 0};

  // Annealing-style ramp start: gamma grows, beta shrinks over the layers.
  // The scales are coarse-scanned first; phase angles act on unnormalized
  // energies, so the useful gamma scale varies a lot between instances.
  auto ramp = [p](double g, double b) {
    std::vector<double> x(2 * p);
    for (size_t k = 0; k < p; ++k) {
      x[k] = g * static_cast<double>(k + 1) / static_cast<double>(p);
      x[p + k] = b * (1.0 - static_cast<double>(k) / static_cast<double>(p));
    }
    return x;
  };
  static constexpr double kGammaScales[] = {0.01, 0.02, 0.05, 0.1, 0.2, 0.4};
  static constexpr double kBetaScales[] = {0.2, 0.4, 0.8, 1.2};
  std::vector<double> x0 = ramp(0.1, 0.1);
  double f0 = obj(x0);
  for (double g : kGammaScales) {
    for (double b : kBetaScales) {
      if (obj.evals >= cfg.max_evals) break;
      std::vector<double> x = ramp(g, b);
      double f = obj(x);
      if (f < f0) {
        f0 = f;
        x0 = std::move(x);
      }
    }
  }
  // Keep the jitter well under the first descent step or it only degrades
  // the scanned start.
  std::mt19937_64 rng = make_rng(cfg.seed, 0x1717);
  std::uniform_real_distribution<double> jitter(-0.002, 0.002);
  for (double& v : x0) v += jitter(rng);

  switch (cfg.optimizer) {
    case QaoaOptimizer::Coordinate: coordinate_descent(obj, x0, cfg.max_evals); break;
    case QaoaOptimizer::NelderMead: nelder_mead(obj, x0, cfg.max_evals); break;
    case QaoaOptimizer::Spsa: spsa(obj, x0, cfg.max_evals, cfg.seed); break;
  }
  OptimizeResult r;
  r.gamma.assign(obj.best_x.begin(), obj.best_x.begin() + static_cast<long>(p));
  r.beta.assign(obj.best_x.begin() + static_cast<long>(p), obj.best_x.end());
  r.expectation = obj.best_f;
  r.evals = obj.evals;
  return r;
}

std::map<uint32_t, int> sample(const StateVector& state, int shots, uint64_t seed) {
  if (shots < 1) throw ConfigError("shots must be positive");
  std::vector<double> cdf(state.size());
  double acc = 0.0;
  for (size_t z = 0; z < state.size(); ++z) {
    acc += std::norm(state[z]);
    cdf[z] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, acc);
  std::map<uint32_t, int> counts;
  for (int s = 0; s < shots; ++s) {
    double r = u(rng);
    size_t z = static_cast<size_t>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
    if (z >= state.size()) z = state.size() - 1;
    ++counts[static_cast<uint32_t>(z)];
  }
  return counts;
}

std::vector<int> postprocess(uint32_t bits, int n, uint64_t seed) {
  if (n < 1 || n * n > 32) throw ConfigError("unsupported node count");
  std::mt19937_64 rng(seed);
  auto pick = [&rng](const std::vector<int>& from) {
    std::uniform_int_distribution<size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };
  auto get = [&bits, n](int i, int p) { return (bits >> (i * n + p)) & 1u; };
  auto clear = [&bits, n](int i, int p) { bits &= ~(1u << (i * n + p)); };
  auto set = [&bits, n](int i, int p) { bits |= 1u << (i * n + p); };

  // Drop surplus assignments per node, keeping one step at random.
  for (int i = 0; i < n; ++i) {
    std::vector<int> steps;
    for (int p = 0; p < n; ++p)
      if (get(i, p)) steps.push_back(p);
    if (steps.size() > 1) {
      int keep = pick(steps);
      for (int p : steps)
        if (p != keep) clear(i, p);
    }
  }
  // Drop surplus assignments per step.
  for (int p = 0; p < n; ++p) {
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i)
      if (get(i, p)) nodes.push_back(i);
    if (nodes.size() > 1) {
      int keep = pick(nodes);
      for (int i : nodes)
        if (i != keep) clear(i, p);
    }
  }
  // Assign every empty node to a random empty step.
  for (int i = 0; i < n; ++i) {
    bool empty = true;
    for (int p = 0; p < n && empty; ++p) empty = !get(i, p);
    if (!empty) continue;
    std::vector<int> free_steps;
    for (int p = 0; p < n; ++p) {
      bool col_empty = true;
      for (int j = 0; j < n && col_empty; ++j) col_empty = !get(j, p);
      if (col_empty) free_steps.push_back(p);
    }
    set(i, pick(free_steps));
  }
  // Fill any step still empty from the unassigned nodes (cannot trigger after
  // the previous pass, kept for symmetry with the repair scheme).
  for (int p = 0; p < n; ++p) {
    bool col_empty = true;
    for (int j = 0; j < n && col_empty; ++j) col_empty = !get(j, p);
    if (!col_empty) continue;
    std::vector<int> free_nodes;
    for (int i = 0; i < n; ++i) {
      bool row_empty = true;
      for (int s = 0; s < n && row_empty; ++s) row_empty = !get(i, s);
      if (row_empty) free_nodes.push_back(i);
    }
    if (!free_nodes.empty()) set(pick(free_nodes), p);
  }

  auto sigma = decode_path(bits, n);
  if (!sigma) throw Error(ErrorCategory::Internal, "repair did not produce a valid path");
  return *sigma;
}

HamiltonianPath solve_tsp_qaoa(const SymMatrix& dist, const QaoaConfig& cfg) {
  const int n = dist.size();
  if (n < 1) throw ConfigError("empty distance matrix");
  if (n == 1) return {{0}, 0.0};

  double maxd = dist.max_abs();
  SymMatrix scaled(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      scaled.set(i, j, maxd > 0.0 ? dist.at(i, j) / maxd : 0.0);

  QuboModel q = build_qubo(scaled);
  CostDiagonal diag = cost_diagonal(q, cfg.qubit_cap);
  OptimizeResult opt = optimize_params(diag, cfg);
  StateVector state = evolve(opt.gamma, opt.beta, diag);
  std::map<uint32_t, int> counts = sample(state, cfg.shots, mix_seed(cfg.seed, 0xd1ce));

  int top = 0;
  for (const auto& [bits, c] : counts) top = std::max(top, c);
  HamiltonianPath best;
  bool have = false;
  for (const auto& [bits, c] : counts) {
    if (c != top) continue;
    std::vector<int> sigma = postprocess(bits, n, mix_seed(cfg.seed, 0xf1f1u + bits));
    double total = path_length(dist, sigma);
    if (!have || total < best.total) {
      best = {std::move(sigma), total};
      have = true;
    }
  }
  return best;
}

}  // namespace opus
