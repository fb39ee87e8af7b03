#pragma once

#include <string>

#include "pmuplace/types.hpp"

namespace pmuplace::fixtures {

/// Embedded copy of the shipped data/ieee9.grid document (nine buses, seven
/// load buses, branch order chosen so the incidence matrix matches the
/// published 18x9 reference bit-exactly).
const std::string& ieee9_grid_document();

/// Embedded copy of data/ieee9_risk.csv (the 9x9 risk propagation table).
const std::string& ieee9_risk_csv();

/// The published 18x9 current-measurement incidence matrix the fixture must
/// regenerate exactly.
const IntMatrix& ieee9_reference_incidence();

}  // namespace pmuplace::fixtures
