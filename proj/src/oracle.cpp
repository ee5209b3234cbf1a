#include "fgwp/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "fgwp/radio.hpp"

namespace fgwp {

namespace {

struct LexBest {
    double value{std::numeric_limits<double>::infinity()};
    Vec3 point;
    bool valid{false};

    void offer(double v, const Vec3& p) {
        if (!valid || v < value ||
            (v == value && std::tie(p.x, p.y, p.z) < std::tie(point.x, point.y, point.z))) {
            value = v;
            point = p;
            valid = true;
        }
    }
};

std::vector<Vec3> oracle_stencil() {
    std::vector<Vec3> dirs;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                Vec3 v{static_cast<double>(dx), static_cast<double>(dy),
                       static_cast<double>(dz)};
                dirs.push_back(v * (1.0 / v.norm()));
            }
    return dirs;
}

std::vector<double> grid_coordinates(double extent_m, double step_m) {
    std::vector<double> coords;
    const double half = extent_m / 2.0;
    const auto count = static_cast<std::size_t>(std::floor(extent_m / step_m + 1e-9));
    coords.reserve(count + 2);
    for (std::size_t j = 0; j <= count; ++j) coords.push_back(-half + static_cast<double>(j) * step_m);
    if (half - coords.back() > 1e-9 * std::max(1.0, extent_m)) coords.push_back(half);
    return coords;
}

}  // namespace

OracleConfig oracle_config_for(const Scenario& scenario) {
    OracleConfig config;
    config.frequency_hz = scenario.radio.frequency_hz;
    config.noise_power_dbm = scenario.radio.noise_power_dbm;
    config.loss_offset_db = scenario.radio.loss_offset_db;
    return config;
}

PlacementSolution oracle_solve(const PlacementProblem& prob, const OracleConfig& config) {
    if (!(config.grid_step_m > 0.0))
        throw std::domain_error("oracle_solve: grid_step_m must be positive");
    if (!(config.p_t_tol_db > 0.0))
        throw std::domain_error("oracle_solve: p_t_tol_db must be positive");
    if (prob.fap_positions.empty())
        throw std::domain_error("oracle_solve: problem has no FAPs");

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t m = prob.n_faps();

    // Per-link additive constant a_i with p_required(d) = a_i + 10log10(d^2).
    // Built from the path-loss primitives when available, from k_db otherwise.
    std::vector<double> link_offsets_db(m);
    if (config.frequency_hz && config.noise_power_dbm) {
        const double chain = 20.0 * std::log10(*config.frequency_hz) +
                             20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLightMps) +
                             *config.noise_power_dbm + config.loss_offset_db;
        for (std::size_t i = 0; i < m; ++i)
            link_offsets_db[i] = prob.required_snrs_db[i] + chain;
    } else {
        for (std::size_t i = 0; i < m; ++i)
            link_offsets_db[i] = prob.required_snrs_db[i] - prob.k_db;
    }
    std::vector<double> link_weights(m);
    for (std::size_t i = 0; i < m; ++i)
        link_weights[i] = std::pow(10.0, link_offsets_db[i] / 10.0);

    const double d_min_sq = prob.d_min_m * prob.d_min_m;
    long long evaluations = 0;

    // Required power at x, or nothing when x is within d_min of a FAP.
    const auto grid_power = [&](const Vec3& x) -> std::optional<double> {
        ++evaluations;
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d_sq = squared_distance(x, prob.fap_positions[i]);
            if (d_sq < d_min_sq) return std::nullopt;
            worst = std::max(worst, d_sq * link_weights[i]);
        }
        return 10.0 * std::log10(worst);
    };

    const std::vector<double> xs = grid_coordinates(prob.venue.x_m, config.grid_step_m);
    const std::vector<double> ys = grid_coordinates(prob.venue.y_m, config.grid_step_m);
    const std::vector<double> zs = grid_coordinates(prob.venue.z_m, config.grid_step_m);
    const double total_points = static_cast<double>(xs.size()) *
                                static_cast<double>(ys.size()) *
                                static_cast<double>(zs.size());
    if (total_points > 1e8)
        throw GridTooLarge("oracle grid has " + std::to_string(total_points) +
                           " points (limit 1e8); increase grid_step_m");

    LexBest best;
    for (double x : xs)
        for (double y : ys)
            for (double z : zs) {
                const Vec3 p{x, y, z};
                if (auto v = grid_power(p)) best.offer(*v, p);
            }

    // The d_min sphere around each FAP carries the minimum of the clamped
    // field when that FAP binds; sample it along the axes so single-FAP
    // optima are exact rather than grid-limited.
    const Vec3 axis_dirs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                               {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const Vec3& center : prob.fap_positions)
        for (const Vec3& dir : axis_dirs) {
            const Vec3 p = center + dir * (prob.d_min_m * (1.0 + 1e-12));
            if (!prob.venue.contains(p)) continue;
            if (auto v = grid_power(p)) best.offer(*v, p);
        }

    PlacementSolution sol;
    if (!best.valid) {
        sol.status = SolveStatus::Infeasible;
        sol.p_t_dbm = prob.p_max_dbm;
        sol.fgw_position = {0.0, 0.0, 0.0};
        sol.iterations = static_cast<int>(std::min<long long>(evaluations, INT32_MAX));
        sol.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return sol;
    }

    if (config.polish) {
        // Descent phase: Polyak-stepped subgradient on the d_min-clamped
        // field. The clamped field is defined everywhere, so iterates may
        // cross exclusion balls; only valid points update the result.
        const auto clamped_power = [&](const Vec3& x, std::size_t* argmax) {
            ++evaluations;
            double worst = 0.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const double d_sq =
                    std::max(squared_distance(x, prob.fap_positions[i]), d_min_sq);
                const double v = d_sq * link_weights[i];
                if (v > worst) {
                    worst = v;
                    worst_i = i;
                }
            }
            if (argmax) *argmax = worst_i;
            return 10.0 * std::log10(worst);
        };

        Vec3 x = best.point;
        std::size_t am = 0;
        double gx = clamped_power(x, &am);
        double clamped_best = gx;
        double delta = 1.0;  // dB
        int window = 0;
        double window_best = gx;
        for (int iter = 0; iter < 4000 && delta > 1e-10; ++iter) {
            // Gradient of the active term: (20/ln10) (x - P) / d^2.
            const Vec3 diff = x - prob.fap_positions[am];
            const double d_sq = std::max(diff.squared_norm(), d_min_sq);
            const Vec3 grad = diff * (20.0 / std::numbers::ln10 / d_sq);
            const double grad_sq = grad.squared_norm();
            if (grad_sq < 1e-24) break;
            const double step = (gx - (clamped_best - delta)) / grad_sq;
            x = prob.venue.clamp(x - grad * step);
            gx = clamped_power(x, &am);
            if (gx < clamped_best) {
                clamped_best = gx;
                if (auto v = grid_power(x)) best.offer(*v, x);
            }
            if (++window >= 25) {
                if (window_best - clamped_best < delta / 4.0) delta *= 0.5;
                window = 0;
                window_best = clamped_best;
            }
        }

        // Refinement phase: stencil descent over valid points only.
        const std::vector<Vec3> stencil = oracle_stencil();
        double step = config.grid_step_m;
        const double floor_step = config.grid_step_m * 1e-5;
        const long long eval_budget = evaluations + 400'000;
        while (step > floor_step && evaluations < eval_budget) {
            bool improved = false;
            for (const Vec3& dir : stencil) {
                const Vec3 cand = prob.venue.clamp(best.point + dir * step);
                if (auto v = grid_power(cand)) {
                    if (*v < best.value) {
                        best.value = *v;
                        best.point = cand;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    sol.fgw_position = best.point;
    if (best.value > prob.p_max_dbm) {
        sol.status = SolveStatus::Infeasible;
        sol.p_t_dbm = prob.p_max_dbm;
    } else {
        sol.status = SolveStatus::Optimal;
        sol.p_t_dbm = std::max(0.0, best.value);
    }
    sol.iterations = static_cast<int>(std::min<long long>(evaluations, INT32_MAX));
    sol.links = build_link_reports(sol.fgw_position, sol.p_t_dbm, prob);
    sol.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace fgwp
