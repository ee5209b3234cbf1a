#pragma once

#include <optional>

#include "fgwp/problem.hpp"

namespace fgwp {

struct FgwpOptions {
    /// Start position; defaults to the FAP centroid projected into the venue.
    std::optional<Vec3> initial_position;
    double initial_power_dbm{1.0};
    int max_iterations{500};
};

/// Direct placement: minimizes the transmission power over (x, y, z, P_T)
/// jointly, subject to the per-link sphere constraints, venue bounds,
/// 0 <= P_T <= P_max, and the d_min separation. Runs an SQP iteration with
/// exact constraint linearization; falls back to bisection over power with
/// the convex sphere-intersection test when the SQP path stalls.
PlacementSolution solve_fgwp(const PlacementProblem& prob);
PlacementSolution solve_fgwp(const PlacementProblem& prob, const FgwpOptions& options);

}  // namespace fgwp
