#include "fgwp/solver_gwp.hpp"

#include <chrono>
#include <cmath>

namespace fgwp {

PlacementSolution solve_gwp(const PlacementProblem& prob) {
    const auto t0 = std::chrono::steady_clock::now();

    PlacementSolution solution;
    solution.status = SolveStatus::Infeasible;

    // Integer levels 0..floor(p_max); a fractional cap gets a final check at
    // exactly p_max.
    std::vector<double> levels;
    for (int p = 0; p <= static_cast<int>(std::floor(prob.p_max_dbm)); ++p)
        levels.push_back(static_cast<double>(p));
    if (prob.p_max_dbm > std::floor(prob.p_max_dbm)) levels.push_back(prob.p_max_dbm);

    int tried = 0;
    for (double p : levels) {
        ++tried;
        if (auto point = ball_intersection_point(p, prob)) {
            solution.fgw_position = *point;
            solution.p_t_dbm = p;
            solution.status = SolveStatus::Optimal;
            break;
        }
    }
    solution.iterations = tried;

    if (solution.status != SolveStatus::Optimal) {
        // Best effort report at the power cap.
        solution.p_t_dbm = prob.p_max_dbm;
        BallExcessOptions options;
        options.polish = false;
        Vec3 centroid{0.0, 0.0, 0.0};
        for (const Vec3& p : prob.fap_positions) centroid += p;
        centroid = centroid * (1.0 / static_cast<double>(prob.n_faps()));
        const BallExcessMin best =
            minimize_ball_excess(prob.fap_positions, link_radii(prob.p_max_dbm, prob),
                                 prob.venue, prob.venue.clamp(centroid), options);
        solution.fgw_position = best.point;
    }

    solution.links = build_link_reports(solution.fgw_position, solution.p_t_dbm, prob);
    solution.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return solution;
}

}  // namespace fgwp
