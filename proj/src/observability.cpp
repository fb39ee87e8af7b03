#include "pmuplace/observability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmuplace/estimation.hpp"

namespace pmuplace {
namespace {

// Kuhn's augmenting-path matching: zero-injection buses against healthy PMUs.
bool try_augment(int zi, const std::vector<std::vector<int>>& candidates,
                 std::vector<int>& matched_pmu, std::vector<int>& pmu_owner,
                 std::vector<bool>& visited) {
  for (int pmu : candidates[zi]) {
    if (visited[pmu]) continue;
    visited[pmu] = true;
    if (pmu_owner[pmu] < 0 ||
        try_augment(pmu_owner[pmu], candidates, matched_pmu, pmu_owner, visited)) {
      matched_pmu[zi] = pmu;
      pmu_owner[pmu] = zi;
      return true;
    }
  }
  return false;
}

}  // namespace

std::pair<bool, ObservabilityAssignment> check_observable(
    const GridTopology& topology, const BoolArray& placement,
    const BoolArray& compromised) {
  const Index n = topology.n_buses;
  if (placement.size() != n || compromised.size() != n)
    throw std::invalid_argument("placement/compromised length must equal bus count");

  BoolArray healthy = placement && !compromised;

  ObservabilityAssignment w;
  w.placement = placement;
  w.u.setConstant(n, n, false);
  w.f = Eigen::VectorXi::Zero(n);
  w.z_satisfied = BoolArray::Constant(n, true);

  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k)
      if (healthy[k] && topology.covers(static_cast<int>(i), static_cast<int>(k)))
        w.f[i] += 1;

  bool ok = true;
  for (Index i = 0; i < n; ++i)
    if (topology.load[i] && w.f[i] < 1) ok = false;

  std::vector<int> zi_buses;
  for (Index i = 0; i < n; ++i)
    if (topology.zero_injection[i]) zi_buses.push_back(static_cast<int>(i));

  if (!zi_buses.empty()) {
    std::vector<std::vector<int>> candidates(zi_buses.size());
    for (std::size_t z = 0; z < zi_buses.size(); ++z)
      for (Index k = 0; k < n; ++k)
        if (healthy[k] && topology.covers(zi_buses[z], static_cast<int>(k)))
          candidates[z].push_back(static_cast<int>(k));

    std::vector<int> matched_pmu(zi_buses.size(), -1);
    std::vector<int> pmu_owner(n, -1);
    for (std::size_t z = 0; z < zi_buses.size(); ++z) {
      std::vector<bool> visited(n, false);
      if (!try_augment(static_cast<int>(z), candidates, matched_pmu, pmu_owner, visited)) {
        w.z_satisfied[zi_buses[z]] = false;
        ok = false;
      }
    }
    for (std::size_t z = 0; z < zi_buses.size(); ++z)
      if (matched_pmu[z] >= 0) w.u(zi_buses[z], matched_pmu[z]) = true;
  }

  return {ok, std::move(w)};
}

std::vector<BoolArray> min_placement(const GridTopology& topology) {
  const Index n = topology.n_buses;
  if (n > 20) throw SizeError("exhaustive placement search limited to 20 buses");

  const BoolArray none = BoolArray::Constant(n, false);
  std::vector<BoolArray> best;

  // Subset masks grouped by cardinality; within one cardinality the bit
  // enumeration below visits bus sets in lexicographic order.
  for (Index k = 0; k <= n && best.empty(); ++k) {
    std::vector<int> comb(k);
    for (Index i = 0; i < k; ++i) comb[i] = static_cast<int>(i);
    while (true) {
      BoolArray p = none;
      for (int b : comb) p[b] = true;
      if (check_observable(topology, p, none).first) best.push_back(p);
      // next combination
      Index i = k;
      while (i > 0 && comb[i - 1] == static_cast<int>(n - k + i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (Index j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return best;
}

SurvivalReport prob_observability(const GridTopology& topology,
                                  const BoolArray& placement,
                                  const Vector& attack_prob, const Matrix& beta) {
  const Index n = topology.n_buses;
  if (placement.size() != n || attack_prob.size() != n)
    throw std::invalid_argument("vector length must equal bus count");
  if (beta.rows() != n || beta.cols() != n)
    throw std::invalid_argument("beta must be n x n");
  for (Index i = 0; i < n; ++i) {
    if (attack_prob[i] < 0 || attack_prob[i] > 1)
      throw std::invalid_argument("attack probabilities must lie in [0,1]");
    for (Index j = 0; j < n; ++j)
      if (beta(i, j) < 0 || beta(i, j) > 1)
        throw std::invalid_argument("beta entries must lie in [0,1]");
  }

  SurvivalReport rep;
  rep.per_bus = Vector::Ones(n);
  rep.expected_surviving = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (!placement[i]) continue;
    double survive = 1.0 - attack_prob[i];
    for (Index j = 0; j < n; ++j) {
      if (j == i || !placement[j]) continue;
      survive *= 1.0 - attack_prob[j] * beta(j, i);
    }
    rep.per_bus[i] = survive;
    rep.expected_surviving += survive;
  }
  return rep;
}

BoolArray repair_placement(const GridTopology& topology, const BoolArray& placement,
                           const BoolArray& compromised, double noise_sigma) {
  const Index n = topology.n_buses;
  if (check_observable(topology, placement, compromised).first) return placement;

  std::vector<int> pool;
  for (Index i = 0; i < n; ++i)
    if (!placement[i] && !compromised[i]) pool.push_back(static_cast<int>(i));

  for (std::size_t k = 1; k <= pool.size(); ++k) {
    BoolArray best;
    double best_phi = 0.0;
    bool found = false;
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      BoolArray p = placement;
      for (std::size_t i : comb) p[pool[i]] = true;
      if (check_observable(topology, p, compromised).first) {
        const double phi = phi_d(topology, p, noise_sigma);
        // Lexicographically earlier candidates win ties (enumeration order).
        if (!found || phi < best_phi * (1.0 - 1e-12)) {
          best = p;
          best_phi = phi;
          found = true;
        }
      }
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == pool.size() - k + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (found) return best;
  }
  throw InfeasibleError("no placement augmentation restores observability");
}

}  // namespace pmuplace
