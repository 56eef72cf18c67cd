#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "opus/tsp.hpp"

namespace opus {

enum class QaoaOptimizer { Coordinate, NelderMead, Spsa };

struct QaoaConfig {
  int reps = 5;          // alternating-layer count p
  int shots = 1000;
  QaoaOptimizer optimizer = QaoaOptimizer::Coordinate;
  int max_evals = 400;
  uint64_t seed = 1;
  int qubit_cap = 16;    // refuse problems with n^2 above this
};

// Energy of every basis state of the n^2-qubit register, indexed by the
// packed bitstring.
struct CostDiagonal {
  int n = 0;
  int num_qubits = 0;
  std::vector<double> values;  // size 2^num_qubits
};

CostDiagonal cost_diagonal(const QuboModel& q, int qubit_cap = 16);

using StateVector = std::vector<std::complex<double>>;

StateVector uniform_state(int num_qubits);

// Diagonal phase layer: amp[z] *= exp(-i * gamma * cost[z]).
void apply_cost_phase(StateVector& state, double gamma, const CostDiagonal& cost);

// Transverse mixer exp(-i * beta * X) applied to every qubit.
void apply_mixer(StateVector& state, int num_qubits, double beta);

// Uniform superposition, then per layer k the phase with gamma[k] followed by
// the mixer with beta[k].
StateVector evolve(std::span<const double> gamma, std::span<const double> beta,
                   const CostDiagonal& cost);

double expectation(const StateVector& state, const CostDiagonal& cost);

struct OptimizeResult {
  std::vector<double> gamma;
  std::vector<double> beta;
  double expectation = 0.0;
  int evals = 0;
};

// Derivative-free minimization of the cost expectation over the 2p angles.
// Start point is a linear ramp plus a small seed-derived jitter; the best
// parameters ever evaluated are returned, so the result never falls behind
// the start.  Coordinate is a cyclic descent with a shrinking step; it keeps
// the angles near the annealing ramp, which concentrates the sampled state
// far better than simplex moves at this depth.
OptimizeResult optimize_params(const CostDiagonal& cost, const QaoaConfig& cfg);

// Multinomial sampling of the final state, deterministic per seed.
std::map<uint32_t, int> sample(const StateVector& state, int shots, uint64_t seed);

// Repair an arbitrary bitstring into a valid visiting order: drop surplus
// assignments per node then per step, then fill empty nodes into empty
// steps.  Valid inputs pass through unchanged (up to decode).
std::vector<int> postprocess(uint32_t bits, int n, uint64_t seed);

// Full round: scale distances to [0, 1], build the model, optimize the
// angles, sample, repair every bitstring that attained the highest count and
// return the shortest resulting path scored on the unscaled distances.
HamiltonianPath solve_tsp_qaoa(const SymMatrix& dist, const QaoaConfig& cfg);

}  // namespace opus
