#pragma once

#include <vector>

#include "pmuplace/estimation.hpp"
#include "pmuplace/grid.hpp"
#include "pmuplace/types.hpp"

namespace pmuplace {

/// Risk propagation probabilities: beta(i, j) is the chance that a healthy
/// PMU at bus j is compromised by the compromised PMU at bus i within one
/// stage. Unit diagonal, entries in [0, 1].
struct RiskMatrix {
  Matrix beta;

  static RiskMatrix from_matrix(Matrix beta);
  /// No indirect propagation (off-diagonal zero).
  static RiskMatrix identity(Index n);
};

/// Marginal compromise probabilities of the placed PMUs at one stage.
struct CompromiseState {
  int stage = 0;
  Vector prob;      // per bus, zero where no PMU is placed
  BoolArray direct; // alpha_i
};

/// Stage-0 state: directly attacked placed PMUs are compromised with
/// certainty, everything else is healthy.
CompromiseState initial_compromise(const BoolArray& placement, const BoolArray& direct);

/// One stage of indirect risk spread:
/// prob'_j = 1 - (1 - prob_j) * prod_{i != j} (1 - prob_i * beta_ij).
CompromiseState propagate(const CompromiseState& state, const RiskMatrix& risk,
                          const BoolArray& placement);

struct AttackVector {
  Vector a;                  // length 2d, zero off support
  std::vector<int> support;  // real measurement rows of compromised PMUs
  double statistic = 0.0;
  double objective = 0.0;
  bool stealthy = true;
};

/// Norm of the estimator state shift induced by injecting `a` into the
/// measurements of the compromised PMUs. Throws InfeasibleError when there
/// are no measurements to evaluate against.
double detection_statistic(const MeasurementSystem& ms, const BoolArray& compromised,
                           const Vector& a);

/// Stealthy injection maximizing the summed per-PMU distortion subject to
/// detection_statistic < tau. The optimum is the top generalized
/// eigendirection of the distortion quadratic against the statistic
/// quadratic, scaled onto the threshold with margin epsilon = 1e-6.
AttackVector design_attack(const MeasurementSystem& ms, const BoolArray& compromised,
                           double tau);

/// 3-sigma rule threshold for a system with 2d real measurement channels.
double default_detection_threshold(double noise_sigma, Index two_d);

}  // namespace pmuplace
