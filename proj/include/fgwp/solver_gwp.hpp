#pragma once

#include "fgwp/problem.hpp"

namespace fgwp {

/// Baseline iterative placement: sweeps the transmission power in 1 dBm
/// steps from 0 dBm and returns the first level at which the link spheres
/// intersect inside the venue. `iterations` counts the power levels tried.
PlacementSolution solve_gwp(const PlacementProblem& prob);

}  // namespace fgwp
