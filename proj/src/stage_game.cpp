#include "pmuplace/stage_game.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>

#include "pmuplace/observability.hpp"

namespace pmuplace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mask_bits(const BoolArray& mask) {
  std::uint64_t bits = 0;
  for (Index i = 0; i < mask.size(); ++i)
    if (mask[i]) bits |= (std::uint64_t{1} << i);
  return bits;
}

}  // namespace

Solution2x2 solve_2x2(const Matrix& payoff) {
  if (payoff.rows() != 2 || payoff.cols() != 2)
    throw std::invalid_argument("solve_2x2 expects a 2x2 matrix");
  if (!payoff.allFinite())
    throw std::invalid_argument("solve_2x2 expects finite payoffs");

  const double a = payoff(0, 0), b = payoff(0, 1);
  const double c = payoff(1, 0), d = payoff(1, 1);

  const double row0_min = std::min(a, b), row1_min = std::min(c, d);
  const double col0_max = std::max(a, c), col1_max = std::max(b, d);
  const double maximin = std::max(row0_min, row1_min);
  const double minimax = std::min(col0_max, col1_max);

  Solution2x2 sol;
  if (maximin == minimax) {
    sol.pure = true;
    sol.value = maximin;
    sol.row = (row0_min >= row1_min) ? Mixed2{1.0, 0.0} : Mixed2{0.0, 1.0};
    sol.col = (col0_max <= col1_max) ? Mixed2{1.0, 0.0} : Mixed2{0.0, 1.0};
    return sol;
  }

  const double denom = a - b - c + d;
  if (denom == 0.0)
    throw std::logic_error("2x2 game without saddle has zero denominator");

  const double p1 = (d - c) / denom;  // row player's weight on row 1
  const double q1 = (d - b) / denom;  // column player's weight on column 1
  sol.pure = false;
  sol.row = {p1, 1.0 - p1};
  sol.col = {q1, 1.0 - q1};
  sol.value = (a * d - b * c) / denom;
  return sol;
}

std::vector<CompromiseRealization> compromise_realizations(
    const CompromiseState& state, const BoolArray& placement) {
  std::vector<int> certain, uncertain;
  for (Index i = 0; i < placement.size(); ++i) {
    if (!placement[i]) continue;
    if (state.prob[i] >= 1.0)
      certain.push_back(static_cast<int>(i));
    else if (state.prob[i] > 0.0)
      uncertain.push_back(static_cast<int>(i));
  }
  if (uncertain.size() > 16)
    throw SizeError("too many uncertain PMUs for exact expectation");

  std::vector<CompromiseRealization> out;
  const std::uint32_t combos = std::uint32_t{1} << uncertain.size();
  out.reserve(combos);
  for (std::uint32_t mask = 0; mask < combos; ++mask) {
    CompromiseRealization r;
    r.compromised = BoolArray::Constant(placement.size(), false);
    for (int i : certain) r.compromised[i] = true;
    r.weight = 1.0;
    for (std::size_t u = 0; u < uncertain.size(); ++u) {
      const double p = state.prob[uncertain[u]];
      if (mask & (std::uint32_t{1} << u)) {
        r.compromised[uncertain[u]] = true;
        r.weight *= p;
      } else {
        r.weight *= 1.0 - p;
      }
    }
    if (r.weight > 0.0) out.push_back(std::move(r));
  }
  return out;
}

std::vector<StagePayoff> build_stage_payoffs(const GridTopology& topology,
                                             const BoolArray& placement,
                                             const RiskMatrix& risk,
                                             const BoolArray& direct, int stages,
                                             double tau, double sigma) {
  if (stages < 1) throw std::invalid_argument("at least one stage required");

  const MeasurementSystem stale = build_measurement_system(topology, placement, sigma);

  std::map<std::uint64_t, MeasurementSystem> ms_cache;
  ms_cache.emplace(mask_bits(placement), stale);
  auto system_for = [&](const BoolArray& p) -> const MeasurementSystem& {
    auto [it, inserted] = ms_cache.try_emplace(mask_bits(p));
    if (inserted) it->second = build_measurement_system(topology, p, sigma);
    return it->second;
  };

  std::map<std::pair<std::uint64_t, std::uint64_t>, double> objective_cache;
  auto objective_for = [&](const BoolArray& p, const BoolArray& compromised) {
    const auto key = std::make_pair(mask_bits(p), mask_bits(compromised));
    auto it = objective_cache.find(key);
    if (it != objective_cache.end()) return it->second;
    const double value = design_attack(system_for(p), compromised, tau).objective;
    objective_cache.emplace(key, value);
    return value;
  };

  std::map<std::uint64_t, BoolArray> repair_cache;  // keyed by compromised set
  auto repaired_for = [&](const BoolArray& compromised) -> const BoolArray* {
    const std::uint64_t key = mask_bits(compromised);
    auto it = repair_cache.find(key);
    if (it == repair_cache.end()) {
      try {
        it = repair_cache.emplace(key, repair_placement(topology, placement,
                                                        compromised, sigma)).first;
      } catch (const InfeasibleError&) {
        it = repair_cache.emplace(key, BoolArray()).first;
      }
    }
    return it->second.size() > 0 ? &it->second : nullptr;
  };

  std::vector<StagePayoff> payoffs;
  payoffs.reserve(stages);
  CompromiseState state = initial_compromise(placement, direct);
  for (int k = 1; k <= stages; ++k) {
    if (k > 1) state = propagate(state, risk, placement);

    StagePayoff p;
    for (const auto& real : compromise_realizations(state, placement)) {
      p.s12 += real.weight * objective_for(placement, real.compromised);
      if (p.repair_infeasible) continue;
      if (const BoolArray* repaired = repaired_for(real.compromised)) {
        p.s11 += real.weight * objective_for(*repaired, real.compromised);
      } else {
        p.s11 = kInf;
        p.repair_infeasible = true;
      }
    }
    payoffs.push_back(p);
  }
  return payoffs;
}

GameSolution solve_stopping_game(const std::vector<StagePayoff>& payoffs) {
  if (payoffs.empty()) throw std::invalid_argument("at least one stage required");
  const int stages = static_cast<int>(payoffs.size());

  GameSolution sol;
  sol.stages = stages;
  sol.payoffs = payoffs;
  sol.values.assign(stages + 1, 0.0);
  sol.attacker_policy.assign(stages, Mixed2{});
  sol.operator_policy.assign(stages, Mixed2{});
  sol.stop_probability.assign(stages, 0.0);

  for (int k = stages; k >= 1; --k) {
    const StagePayoff& s = payoffs[k - 1];
    const double cont = sol.values[k];
    Mixed2 att, op;
    double value = 0.0;

    if (!std::isfinite(cont)) {
      // A later stage is already broken; the attacker just waits for it.
      value = cont;
      att = {0.0, 1.0};
      op = {1.0, 0.0};
    } else if (std::isinf(s.s11) && std::isinf(s.s12)) {
      value = kInf;
      att = {1.0, 0.0};
      op = {1.0, 0.0};
    } else if (std::isinf(s.s11)) {
      // The stopping cell is unplayable for the operator: never Optimize.
      const double attack = s.s12 + cont, wait = s.s22 + cont;
      value = std::max(attack, wait);
      att = (attack >= wait) ? Mixed2{1.0, 0.0} : Mixed2{0.0, 1.0};
      op = {0.0, 1.0};
    } else if (std::isinf(s.s12)) {
      const double attack = s.s11, wait = s.s21 + cont;
      value = std::max(attack, wait);
      att = (attack >= wait) ? Mixed2{1.0, 0.0} : Mixed2{0.0, 1.0};
      op = {1.0, 0.0};
    } else {
      Matrix m(2, 2);
      m << s.s11, s.s12 + cont, s.s21 + cont, s.s22 + cont;
      const Solution2x2 stage_sol = solve_2x2(m);
      value = stage_sol.value;
      att = stage_sol.row;
      op = stage_sol.col;
    }

    sol.values[k - 1] = value;
    sol.attacker_policy[k - 1] = att;
    sol.operator_policy[k - 1] = op;
  }

  double alive = 1.0;
  for (int k = 0; k < stages; ++k) {
    const double stop =
        alive * sol.attacker_policy[k].first * sol.operator_policy[k].first;
    sol.stop_probability[k] = stop;
    alive -= stop;
  }
  sol.no_stop_probability = alive;
  return sol;
}

double evaluate_profile(const std::vector<StagePayoff>& payoffs,
                        const std::vector<Mixed2>& attacker,
                        const std::vector<Mixed2>& operator_policy) {
  if (attacker.size() != payoffs.size() || operator_policy.size() != payoffs.size())
    throw std::invalid_argument("policy length must match stage count");

  double alive = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < payoffs.size(); ++k) {
    const StagePayoff& s = payoffs[k];
    const double pa = attacker[k].first, po = operator_policy[k].first;
    const double immediate = pa * po * s.s11 + pa * (1.0 - po) * s.s12 +
                             (1.0 - pa) * po * s.s21 +
                             (1.0 - pa) * (1.0 - po) * s.s22;
    total += alive * immediate;
    alive *= 1.0 - pa * po;
  }
  return total;
}

}  // namespace pmuplace
