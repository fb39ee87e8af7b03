#pragma once

#include <vector>

#include "pmuplace/attack.hpp"
#include "pmuplace/grid.hpp"
#include "pmuplace/stage_game.hpp"
#include "pmuplace/types.hpp"

namespace pmuplace {

struct GameParams {
  int stages = 5;
  double sigma = 0.01;
  /// Detection threshold; values <= 0 derive the 3-sigma default from the
  /// reference (minimum) placement.
  double tau = 0.0;
  /// Candidate pool contains every feasible placement of cardinality up to
  /// the minimum plus this slack.
  int extra_cardinality = 2;
};

/// All 2^g direct-attack subsets of the placed PMU set, in lexicographic
/// (binary counting) order: {}, {b0}, {b1}, {b0,b1}, ... Throws SizeError
/// beyond 12 placed PMUs.
std::vector<std::vector<int>> enumerate_attack_paths(const BoolArray& placement);

/// Expected deployed-PMU count when `placement` faces direct attack path
/// `path`: the level-1 stopping game is solved and the repair cost at the
/// equilibrium stopping stage is averaged over the stop distribution.
/// Observability is restored at the horizon when the game never stops.
/// +infinity when some reachable compromise state is unrepairable.
double deployment_cost(const GridTopology& topology, const BoolArray& placement,
                       const std::vector<int>& path, const RiskMatrix& risk,
                       const GameParams& params, double tau);

/// cost(i, j) = deployment_cost(placements[i], attack_paths[j]).
Matrix build_cost_matrix(const GridTopology& topology,
                         const std::vector<BoolArray>& placements,
                         const std::vector<std::vector<int>>& attack_paths,
                         const RiskMatrix& risk, const GameParams& params);

struct MatrixGameSolution {
  Vector row_strategy;  // operator (minimiser)
  Vector col_strategy;  // attacker (maximiser)
  double value = 0.0;
};

/// Exact equilibrium of the zero-sum matrix game (rows minimise, columns
/// maximise). Strictly dominated actions are removed iteratively first;
/// support enumeration solves games with min(m, n) <= 6, the primal simplex
/// on the standard LP reduction solves larger ones.
MatrixGameSolution solve_matrix_game(const Matrix& cost);

struct BilevelGame {
  std::vector<BoolArray> placements;
  std::vector<std::vector<int>> attack_paths;
  Matrix cost;
  Vector placement_strategy;   // p_hat over placements
  Vector attack_strategy;      // q_hat over attack paths
  double expected_cost = 0.0;
  Vector placement_marginals;  // per-bus deployment probability y*
  Vector attack_marginals;     // per-bus direct-attack probability alpha*
  double tau = 0.0;            // threshold actually used
};

/// Level-2 game: candidate placements (all feasible up to minimum+slack)
/// against the direct-attack subsets of the reference minimum placement.
BilevelGame solve_bilevel(const GridTopology& topology, const RiskMatrix& risk,
                          const GameParams& params);

}  // namespace pmuplace
