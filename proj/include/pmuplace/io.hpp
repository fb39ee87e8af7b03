#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmuplace/attack.hpp"
#include "pmuplace/grid.hpp"

namespace pmuplace {

/// Parses a grid-description document (JSON text: `buses` array with 1-based
/// ids and load / zero_injection flags, `branches` array with {g, b}
/// rectangular admittance components, optional declared `adjacency`).
/// Throws ValidationError with the offending field path.
GridTopology load_grid(const std::string& document);
GridTopology load_grid_file(const std::string& path);

/// Risk propagation matrix from CSV laid out like the 9-bus table: header row
/// of bus ids, each data row prefixed with its bus id.
RiskMatrix load_risk_csv_text(const std::string& text);
RiskMatrix load_risk_csv(const std::string& path);

/// Writes a labelled numeric series as a two-column CSV. The header names the
/// columns (e.g. "stage,value" or "scenario,pmu_count"); rows keep the order
/// given. Empty series or unwritable paths are errors.
void emit_plot_data(const std::string& label_header, const std::string& value_header,
                    const std::vector<std::pair<std::string, double>>& rows,
                    const std::string& path);

/// Shortest round-trip decimal representation (deterministic across runs).
std::string format_double(double v);

}  // namespace pmuplace
