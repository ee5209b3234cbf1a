#pragma once

#include <optional>

#include "fgwp/problem.hpp"

namespace fgwp {

/// Validation oracle settings. When the radio fields are present the
/// required power is recomputed per link from the path-loss primitives
/// (frequency, noise floor, loss offset) rather than from the problem's
/// folded constant k_db; the two routes agree by the link-budget identity.
struct OracleConfig {
    double grid_step_m{0.25};
    double p_t_tol_db{0.01};
    bool polish{true};
    std::optional<double> frequency_hz;
    std::optional<double> noise_power_dbm;
    double loss_offset_db{0.0};
};

OracleConfig oracle_config_for(const Scenario& scenario);

/// Exhaustive grid sweep of the required-power field over the venue box,
/// optionally refined by local pattern descent. Independent of both solver
/// paths; used only for validation. Throws GridTooLarge above 1e8 points.
PlacementSolution oracle_solve(const PlacementProblem& prob, const OracleConfig& config = {});

}  // namespace fgwp
