#pragma once

#include <vector>

#include "pmuplace/attack.hpp"
#include "pmuplace/grid.hpp"
#include "pmuplace/types.hpp"

namespace pmuplace {

/// Attacker payoffs for one stage. Rows index the attacker action
/// (Attack / NoAttack), columns the operator action (Optimize / NoOptimize):
/// s11 = (A,O), s12 = (A,NO), s21 = (NA,O), s22 = (NA,NO).
struct StagePayoff {
  double s11 = 0.0;
  double s12 = 0.0;
  double s21 = 0.0;
  double s22 = 0.0;
  bool repair_infeasible = false;  // s11 carries an infinity sentinel
};

/// Probability pair on the 2-simplex.
struct Mixed2 {
  double first = 1.0;
  double second = 0.0;
};

struct Solution2x2 {
  Mixed2 row;  // maximiser mix over rows
  Mixed2 col;  // minimiser mix over columns
  double value = 0.0;
  bool pure = false;
};

/// Zero-sum 2x2 solve, row player maximises. Pure saddle points are returned
/// with degenerate strategies; otherwise the closed-form interior solution
/// with denominator s11 - s21 - s12 + s22.
Solution2x2 solve_2x2(const Matrix& payoff);

/// One Bernoulli realization of which placed PMUs are compromised.
struct CompromiseRealization {
  BoolArray compromised;
  double weight = 1.0;
};

/// All compromise realizations of a marginal state, treating per-PMU
/// compromise events as independent. Throws SizeError beyond 16 uncertain
/// PMUs.
std::vector<CompromiseRealization> compromise_realizations(
    const CompromiseState& state, const BoolArray& placement);

/// Per-stage payoffs of the operator/attacker stopping game: the compromise
/// state is propagated to each stage; s11 is the expected optimal injection
/// distortion after the operator re-optimizes (repairs) the placement, s12
/// the same against the stale placement, and the no-attack rows pay zero.
std::vector<StagePayoff> build_stage_payoffs(const GridTopology& topology,
                                             const BoolArray& placement,
                                             const RiskMatrix& risk,
                                             const BoolArray& direct, int stages,
                                             double tau, double sigma);

struct GameSolution {
  int stages = 0;
  std::vector<double> values;           // V_0 .. V_K
  std::vector<Mixed2> attacker_policy;  // (Attack, NoAttack) per stage
  std::vector<Mixed2> operator_policy;  // (Optimize, NoOptimize) per stage
  std::vector<double> stop_probability; // P(game stops at stage k)
  double no_stop_probability = 1.0;
  std::vector<StagePayoff> payoffs;
};

/// Backward Val recursion from V_K = 0. Only the (Attack, Optimize) pair is
/// terminal; the other three cells carry the continuation value. Infinite
/// stage payoffs are resolved by dominance before the 2x2 solve.
GameSolution solve_stopping_game(const std::vector<StagePayoff>& payoffs);

/// Forward expected payoff of an arbitrary behaviour profile on the stopping
/// game tree; reproduces values[0] at the equilibrium profile.
double evaluate_profile(const std::vector<StagePayoff>& payoffs,
                        const std::vector<Mixed2>& attacker,
                        const std::vector<Mixed2>& operator_policy);

}  // namespace pmuplace
