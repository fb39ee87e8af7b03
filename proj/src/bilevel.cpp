#include "pmuplace/bilevel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "pmuplace/observability.hpp"

namespace pmuplace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int count_placed(const BoolArray& p) {
  int n = 0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i]) ++n;
  return n;
}

// --- support enumeration -------------------------------------------------

bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  int i = k;
  while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
  if (i == 0) return false;
  ++comb[i - 1];
  for (int j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

// Solves the indifference system for one support pair; returns true when the
// candidate is a valid equilibrium.
bool try_support(const Matrix& cost, const std::vector<int>& rows,
                 const std::vector<int>& cols, double tol,
                 MatrixGameSolution& out) {
  const int k = static_cast<int>(rows.size());

  // Column-player weights q and value v: rows in support are indifferent.
  Matrix asys = Matrix::Zero(k + 1, k + 1);
  Vector rhs = Vector::Zero(k + 1);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) asys(r, c) = cost(rows[r], cols[c]);
    asys(r, k) = -1.0;
  }
  asys.row(k).head(k).setOnes();
  rhs[k] = 1.0;
  Eigen::FullPivLU<Matrix> lu_q(asys);
  if (!lu_q.isInvertible()) return false;
  const Vector qv = lu_q.solve(rhs);

  // Row-player weights p with the same value.
  Matrix bsys = Matrix::Zero(k + 1, k + 1);
  Vector rhs2 = Vector::Zero(k + 1);
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < k; ++r) bsys(c, r) = cost(rows[r], cols[c]);
    bsys(c, k) = -1.0;
  }
  bsys.row(k).head(k).setOnes();
  rhs2[k] = 1.0;
  Eigen::FullPivLU<Matrix> lu_p(bsys);
  if (!lu_p.isInvertible()) return false;
  const Vector pv = lu_p.solve(rhs2);

  const double v = qv[k];
  if (std::abs(pv[k] - v) > tol) return false;
  for (int i = 0; i < k; ++i)
    if (qv[i] < -tol || pv[i] < -tol) return false;

  Vector p = Vector::Zero(cost.rows());
  Vector q = Vector::Zero(cost.cols());
  for (int i = 0; i < k; ++i) {
    p[rows[i]] = std::max(pv[i], 0.0);
    q[cols[i]] = std::max(qv[i], 0.0);
  }
  p /= p.sum();
  q /= q.sum();

  // No pure deviation may help: every row costs >= v against q, every column
  // yields <= v against p.
  for (Index r = 0; r < cost.rows(); ++r)
    if (cost.row(r) * q < v - tol) return false;
  for (Index c = 0; c < cost.cols(); ++c)
    if (p.dot(cost.col(c)) > v + tol) return false;

  out.row_strategy = p;
  out.col_strategy = q;
  out.value = v;
  return true;
}

bool solve_by_support_enumeration(const Matrix& cost, MatrixGameSolution& out) {
  const int m = static_cast<int>(cost.rows());
  const int n = static_cast<int>(cost.cols());
  const double tol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff());

  for (int k = 1; k <= std::min(m, n); ++k) {
    std::vector<int> rows(k);
    std::iota(rows.begin(), rows.end(), 0);
    do {
      std::vector<int> cols(k);
      std::iota(cols.begin(), cols.end(), 0);
      do {
        if (try_support(cost, rows, cols, tol, out)) return true;
      } while (next_combination(cols, n));
    } while (next_combination(rows, m));
  }
  return false;
}

// --- simplex on the standard LP reduction ---------------------------------

// max 1'u  s.t.  A' u <= 1, u >= 0, where A is the cost matrix shifted
// positive. Dense tableau with Bland's rule.
struct SimplexResult {
  Vector u;       // primal variables (length m)
  Vector duals;   // one per constraint (length n)
  double objective = 0.0;
};

SimplexResult simplex_row_game(const Matrix& a) {
  const int m = static_cast<int>(a.rows());  // structural variables
  const int n = static_cast<int>(a.cols());  // constraints

  // Tableau rows: n constraints + objective row; columns: m structural,
  // n slacks, rhs.
  Matrix t = Matrix::Zero(n + 1, m + n + 1);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < m; ++r) t(c, r) = a(r, c);
    t(c, m + c) = 1.0;
    t(c, m + n) = 1.0;
  }
  for (int r = 0; r < m; ++r) t(n, r) = -1.0;  // maximise sum u

  std::vector<int> basis(n);
  std::iota(basis.begin(), basis.end(), m);

  const int max_iter = 10000;
  for (int iter = 0; iter < max_iter; ++iter) {
    int pivot_col = -1;
    for (int c = 0; c < m + n; ++c)
      if (t(n, c) < -1e-12) { pivot_col = c; break; }  // Bland
    if (pivot_col < 0) break;

    int pivot_row = -1;
    double best_ratio = kInf;
    for (int r = 0; r < n; ++r) {
      if (t(r, pivot_col) > 1e-12) {
        const double ratio = t(r, m + n) / t(r, pivot_col);
        if (ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && pivot_row >= 0 &&
             basis[r] < basis[pivot_row])) {
          best_ratio = ratio;
          pivot_row = r;
        }
      }
    }
    if (pivot_row < 0)
      throw std::runtime_error("matrix game LP is unbounded");

    t.row(pivot_row) /= t(pivot_row, pivot_col);
    for (int r = 0; r <= n; ++r) {
      if (r == pivot_row) continue;
      const double f = t(r, pivot_col);
      if (f != 0.0) t.row(r) -= f * t.row(pivot_row);
    }
    basis[pivot_row] = pivot_col;
  }

  SimplexResult res;
  res.u = Vector::Zero(m);
  for (int r = 0; r < n; ++r)
    if (basis[r] < m) res.u[basis[r]] = t(r, m + n);
  res.duals = Vector::Zero(n);
  for (int c = 0; c < n; ++c) res.duals[c] = t(n, m + c);
  res.objective = res.u.sum();
  return res;
}

MatrixGameSolution solve_by_lp(const Matrix& cost) {
  const double shift = 1.0 - cost.minCoeff();
  const Matrix shifted = cost.array() + shift;

  const SimplexResult lp = simplex_row_game(shifted);
  if (lp.objective <= 0.0)
    throw std::runtime_error("matrix game LP failed to find a positive value");
  const double value_shifted = 1.0 / lp.objective;

  MatrixGameSolution out;
  out.row_strategy = lp.u * value_shifted;
  out.col_strategy = lp.duals * value_shifted;
  out.value = value_shifted - shift;
  const double ps = out.row_strategy.sum();
  const double qs = out.col_strategy.sum();
  out.row_strategy /= ps;
  out.col_strategy /= qs;
  return out;
}

}  // namespace

std::vector<std::vector<int>> enumerate_attack_paths(const BoolArray& placement) {
  std::vector<int> placed = buses_from_mask(placement);
  if (placed.empty()) throw std::invalid_argument("placement must be non-empty");
  if (placed.size() > 12)
    throw SizeError("attack path enumeration limited to 12 placed PMUs");

  std::vector<std::vector<int>> paths;
  const std::uint32_t combos = std::uint32_t{1} << placed.size();
  paths.reserve(combos);
  for (std::uint32_t mask = 0; mask < combos; ++mask) {
    std::vector<int> subset;
    for (std::size_t i = 0; i < placed.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) subset.push_back(placed[i]);
    paths.push_back(std::move(subset));
  }
  return paths;
}

double deployment_cost(const GridTopology& topology, const BoolArray& placement,
                       const std::vector<int>& path, const RiskMatrix& risk,
                       const GameParams& params, double tau) {
  // Attacks on buses without a deployed PMU are no-ops.
  BoolArray direct = BoolArray::Constant(topology.n_buses, false);
  for (int bus : path)
    if (placement[bus]) direct[bus] = true;

  const auto payoffs = build_stage_payoffs(topology, placement, risk, direct,
                                           params.stages, tau, params.sigma);
  const GameSolution game = solve_stopping_game(payoffs);

  std::map<std::uint64_t, double> repair_cost;  // keyed by compromised bits
  auto repair_count = [&](const BoolArray& compromised) {
    std::uint64_t key = 0;
    for (Index i = 0; i < compromised.size(); ++i)
      if (compromised[i]) key |= (std::uint64_t{1} << i);
    auto it = repair_cost.find(key);
    if (it == repair_cost.end()) {
      double cost;
      try {
        cost = count_placed(
            repair_placement(topology, placement, compromised, params.sigma));
      } catch (const InfeasibleError&) {
        cost = kInf;
      }
      it = repair_cost.emplace(key, cost).first;
    }
    return it->second;
  };

  // Observability must be restored whether or not the stopping state is
  // reached: games that run to the horizon are repaired against the final
  // compromise state.
  double expected = 0.0;
  CompromiseState state = initial_compromise(placement, direct);
  for (int k = 1; k <= params.stages; ++k) {
    if (k > 1) state = propagate(state, risk, placement);
    double weight = game.stop_probability[k - 1];
    if (k == params.stages) weight += game.no_stop_probability;
    if (weight == 0.0) continue;
    double stage_cost = 0.0;
    for (const auto& real : compromise_realizations(state, placement))
      stage_cost += real.weight * repair_count(real.compromised);
    expected += weight * stage_cost;
  }
  return expected;
}

Matrix build_cost_matrix(const GridTopology& topology,
                         const std::vector<BoolArray>& placements,
                         const std::vector<std::vector<int>>& attack_paths,
                         const RiskMatrix& risk, const GameParams& params) {
  if (placements.empty() || attack_paths.empty())
    throw std::invalid_argument("placements and attack paths must be non-empty");

  double tau = params.tau;
  if (!(tau > 0)) {
    const MeasurementSystem ref =
        build_measurement_system(topology, placements.front(), params.sigma);
    tau = default_detection_threshold(params.sigma, 2 * ref.d);
  }

  Matrix cost(placements.size(), attack_paths.size());
  for (std::size_t i = 0; i < placements.size(); ++i)
    for (std::size_t j = 0; j < attack_paths.size(); ++j)
      cost(i, j) = deployment_cost(topology, placements[i], attack_paths[j],
                                   risk, params, tau);
  return cost;
}

MatrixGameSolution solve_matrix_game(const Matrix& cost) {
  if (cost.rows() == 0 || cost.cols() == 0)
    throw std::invalid_argument("empty cost matrix");

  // Constant matrix: every strategy pair is an equilibrium; report uniform.
  if ((cost.array() == cost(0, 0)).all()) {
    MatrixGameSolution out;
    out.row_strategy = Vector::Constant(cost.rows(), 1.0 / cost.rows());
    out.col_strategy = Vector::Constant(cost.cols(), 1.0 / cost.cols());
    out.value = cost(0, 0);
    return out;
  }

  // Iterated strict dominance. Rows minimise, columns maximise.
  std::vector<int> rows(cost.rows()), cols(cost.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rows.size() && rows.size() > 1; ++i) {
      for (std::size_t i2 = 0; i2 < rows.size(); ++i2) {
        if (i == i2) continue;
        bool dominates = true;
        for (int c : cols)
          if (!(cost(rows[i2], c) < cost(rows[i], c))) { dominates = false; break; }
        if (dominates) {
          rows.erase(rows.begin() + i);
          changed = true;
          --i;
          break;
        }
      }
    }
    for (std::size_t j = 0; j < cols.size() && cols.size() > 1; ++j) {
      for (std::size_t j2 = 0; j2 < cols.size(); ++j2) {
        if (j == j2) continue;
        bool dominates = true;
        for (int r : rows)
          if (!(cost(r, cols[j2]) > cost(r, cols[j]))) { dominates = false; break; }
        if (dominates) {
          cols.erase(cols.begin() + j);
          changed = true;
          --j;
          break;
        }
      }
    }
  }

  Matrix reduced(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      reduced(i, j) = cost(rows[i], cols[j]);
  if (!reduced.allFinite())
    throw InfeasibleError(
        "cost matrix keeps infinite entries after dominance reduction");

  MatrixGameSolution small;
  if (std::min(reduced.rows(), reduced.cols()) <= 6) {
    if (!solve_by_support_enumeration(reduced, small)) small = solve_by_lp(reduced);
  } else {
    small = solve_by_lp(reduced);
  }

  MatrixGameSolution out;
  out.value = small.value;
  out.row_strategy = Vector::Zero(cost.rows());
  out.col_strategy = Vector::Zero(cost.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row_strategy[rows[i]] = small.row_strategy[i];
  for (std::size_t j = 0; j < cols.size(); ++j)
    out.col_strategy[cols[j]] = small.col_strategy[j];
  return out;
}

BilevelGame solve_bilevel(const GridTopology& topology, const RiskMatrix& risk,
                          const GameParams& params) {
  const std::vector<BoolArray> minima = min_placement(topology);
  if (minima.empty())
    throw InfeasibleError("no observable placement exists for this topology");
  const int min_card = count_placed(minima.front());

  // Candidate pool: every no-attack-feasible placement within the slack.
  const Index n = topology.n_buses;
  if (n > 20) throw SizeError("bilevel enumeration limited to 20 buses");
  const BoolArray none = BoolArray::Constant(n, false);
  std::vector<BoolArray> candidates;
  const int max_card = std::min<int>(static_cast<int>(n),
                                     min_card + params.extra_cardinality);
  for (int k = min_card; k <= max_card; ++k) {
    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      BoolArray p = none;
      for (int b : comb) p[b] = true;
      if (check_observable(topology, p, none).first) candidates.push_back(p);
    } while (next_combination(comb, static_cast<int>(n)));
  }

  BilevelGame game;
  game.placements = std::move(candidates);
  game.attack_paths = enumerate_attack_paths(minima.front());

  game.tau = params.tau;
  if (!(game.tau > 0)) {
    const MeasurementSystem ref =
        build_measurement_system(topology, minima.front(), params.sigma);
    game.tau = default_detection_threshold(params.sigma, 2 * ref.d);
  }
  GameParams p = params;
  p.tau = game.tau;

  game.cost = build_cost_matrix(topology, game.placements, game.attack_paths,
                                risk, p);
  const MatrixGameSolution sol = solve_matrix_game(game.cost);
  game.placement_strategy = sol.row_strategy;
  game.attack_strategy = sol.col_strategy;
  game.expected_cost = sol.value;

  game.placement_marginals = Vector::Zero(n);
  for (std::size_t i = 0; i < game.placements.size(); ++i)
    for (Index b = 0; b < n; ++b)
      if (game.placements[i][b])
        game.placement_marginals[b] += game.placement_strategy[i];
  game.attack_marginals = Vector::Zero(n);
  for (std::size_t j = 0; j < game.attack_paths.size(); ++j)
    for (int b : game.attack_paths[j])
      game.attack_marginals[b] += game.attack_strategy[j];

  return game;
}

}  // namespace pmuplace
