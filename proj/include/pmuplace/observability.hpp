#pragma once

#include <utility>
#include <vector>

#include "pmuplace/grid.hpp"
#include "pmuplace/types.hpp"

namespace pmuplace {

/// Witness of a feasible observability check.
struct ObservabilityAssignment {
  BoolArray placement;
  /// u(i, k): the healthy PMU at bus k is credited with monitoring
  /// zero-injection bus i. At most one k per i, distinct k across i.
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> u;
  /// Healthy placed PMUs in the closed neighbourhood of each bus.
  Eigen::VectorXi f;
  /// Per bus: zero-injection constraint satisfied (true where not flagged).
  BoolArray z_satisfied;
};

/// Topological observability with zero-injection modelling. A load bus needs
/// a healthy placed PMU at itself or a neighbour; every zero-injection bus
/// must be matched to a distinct healthy placed PMU in its closed
/// neighbourhood. Compromised PMUs count towards neither constraint.
std::pair<bool, ObservabilityAssignment> check_observable(
    const GridTopology& topology, const BoolArray& placement,
    const BoolArray& compromised);

/// All minimum-cardinality observable placements (no compromise),
/// lexicographically sorted. Exhaustive over 2^n subsets; throws SizeError
/// for more than 20 buses.
std::vector<BoolArray> min_placement(const GridTopology& topology);

struct SurvivalReport {
  Vector per_bus;              // probability the PMU at each bus stays healthy
  double expected_surviving;   // sum over placed buses
};

/// Per-bus PMU survival under direct-attack probabilities and one step of
/// indirect propagation through beta (source row, target column).
SurvivalReport prob_observability(const GridTopology& topology,
                                  const BoolArray& placement,
                                  const Vector& attack_prob, const Matrix& beta);

/// Cheapest augmentation of `placement` that restores observability when the
/// compromised PMUs are distrusted. New PMUs can only go to buses that are
/// not compromised. Ties between minimum-cardinality augmentations are broken
/// by phi_D, then lexicographically. Throws InfeasibleError when even the
/// full augmentation fails.
BoolArray repair_placement(const GridTopology& topology, const BoolArray& placement,
                           const BoolArray& compromised, double noise_sigma);

}  // namespace pmuplace
