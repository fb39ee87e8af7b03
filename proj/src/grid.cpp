#include "pmuplace/grid.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace pmuplace {

std::vector<int> GridTopology::neighbours(int i) const {
  std::vector<int> out;
  for (Index k = 0; k < n_buses; ++k)
    if (adjacency(i, k)) out.push_back(static_cast<int>(k));
  return out;
}

GridTopology make_topology(Index n_buses, std::vector<Branch> branches,
                           BoolArray zero_injection, BoolArray load) {
  if (n_buses <= 0) throw ValidationError("buses", "at least one bus required");
  if (zero_injection.size() != n_buses)
    throw ValidationError("buses.zero_injection", "flag vector length mismatch");
  if (load.size() != n_buses)
    throw ValidationError("buses.load", "flag vector length mismatch");

  for (Index i = 0; i < n_buses; ++i) {
    if (zero_injection[i] && load[i])
      throw ValidationError("buses[" + std::to_string(i + 1) + "]",
                            "bus cannot be both load and zero-injection");
  }

  std::set<std::pair<int, int>> seen;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const auto& br = branches[b];
    const std::string path = "branches[" + std::to_string(b) + "]";
    if (br.from < 0 || br.from >= n_buses)
      throw ValidationError(path + ".from", "dangling bus index " + std::to_string(br.from + 1));
    if (br.to < 0 || br.to >= n_buses)
      throw ValidationError(path + ".to", "dangling bus index " + std::to_string(br.to + 1));
    if (br.from == br.to) throw ValidationError(path, "self-loop branch");
    auto key = std::minmax(br.from, br.to);
    if (!seen.insert(key).second)
      throw ValidationError(path, "duplicate branch between buses " +
                                      std::to_string(key.first + 1) + " and " +
                                      std::to_string(key.second + 1));
  }

  GridTopology t;
  t.n_buses = n_buses;
  t.branches = std::move(branches);
  t.zero_injection = std::move(zero_injection);
  t.load = std::move(load);
  t.adjacency.setConstant(n_buses, n_buses, false);
  for (const auto& br : t.branches) {
    t.adjacency(br.from, br.to) = true;
    t.adjacency(br.to, br.from) = true;
  }
  return t;
}

IncidenceMatrix build_incidence(const GridTopology& topology) {
  const Index b = static_cast<Index>(topology.branches.size());
  IncidenceMatrix inc;
  inc.rows = IntMatrix::Zero(2 * b, topology.n_buses);
  inc.row_branch.reserve(2 * b);
  for (Index r = 0; r < b; ++r) {
    const auto& br = topology.branches[r];
    inc.rows(2 * r, br.from) = 1;
    inc.rows(2 * r, br.to) = -1;
    inc.rows(2 * r + 1, br.from) = -1;
    inc.rows(2 * r + 1, br.to) = 1;
    inc.row_branch.emplace_back(static_cast<int>(r), true);
    inc.row_branch.emplace_back(static_cast<int>(r), false);
  }
  return inc;
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency_from_incidence(
    const IncidenceMatrix& incidence, Index n_buses) {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adj(n_buses, n_buses);
  adj.setConstant(false);
  for (Index r = 0; r < incidence.rows.rows(); ++r) {
    int from = -1, to = -1;
    for (Index c = 0; c < n_buses; ++c) {
      if (incidence.rows(r, c) == 1) from = static_cast<int>(c);
      if (incidence.rows(r, c) == -1) to = static_cast<int>(c);
    }
    if (from >= 0 && to >= 0) {
      adj(from, to) = true;
      adj(to, from) = true;
    }
  }
  return adj;
}

}  // namespace pmuplace
