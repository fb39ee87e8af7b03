#pragma once

#include <utility>
#include <vector>

#include "pmuplace/types.hpp"

namespace pmuplace {

struct Branch {
  int from = 0;  // 0-based bus index
  int to = 0;
  Complex admittance;  // series admittance, per-unit
};

/// Electrical network topology. Immutable after construction; buses are
/// 0-based internally (documents and CLI use 1-based ids).
struct GridTopology {
  Index n_buses = 0;
  std::vector<Branch> branches;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency;  // a_ik, zero diagonal
  BoolArray zero_injection;  // s_i
  BoolArray load;

  bool adjacent(int i, int k) const { return adjacency(i, k); }
  /// Closed neighbourhood: bus k can cover bus i iff adjacent or identical.
  /// A PMU measures its own bus voltage, so self-coverage always counts.
  bool covers(int i, int k) const { return i == k || adjacency(i, k); }
  std::vector<int> neighbours(int i) const;
};

/// Rows are directed current measurements, two per branch (forward row first:
/// +1 at the from-bus, -1 at the to-bus). Entries in {-1, 0, +1}.
struct IncidenceMatrix {
  IntMatrix rows;                                 // 2b x n_buses
  std::vector<std::pair<int, bool>> row_branch;   // row -> (branch index, forward?)
};

/// Validates bus/branch structure and derives the adjacency matrix.
/// Throws ValidationError naming the offending field on bad input.
GridTopology make_topology(Index n_buses, std::vector<Branch> branches,
                           BoolArray zero_injection, BoolArray load);

/// Current-measurement incidence of the whole system, ordered by branch
/// declaration order, forward row before reverse row.
IncidenceMatrix build_incidence(const GridTopology& topology);

/// Rebuilds the bus adjacency implied by an incidence matrix.
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency_from_incidence(
    const IncidenceMatrix& incidence, Index n_buses);

}  // namespace pmuplace
