#include "fgwp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fgwp/radio.hpp"
#include "json_util.hpp"

namespace fgwp {

PlacementProblem make_problem(const Scenario& scenario) {
    if (scenario.faps.empty())
        throw std::domain_error("make_problem: scenario has no FAPs");
    PlacementProblem prob;
    prob.venue = scenario.venue;
    prob.p_max_dbm = scenario.radio.p_max_dbm;
    prob.d_min_m = scenario.radio.d_min_m;
    prob.k_db = link_budget_constant_db(scenario.radio) - scenario.radio.loss_offset_db;
    prob.fap_positions.reserve(scenario.faps.size());
    prob.required_snrs_db.reserve(scenario.faps.size());
    for (const Fap& fap : scenario.faps) {
        prob.fap_positions.push_back(fap.position);
        prob.required_snrs_db.push_back(fap.required_snr_db);
    }
    return prob;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

SolveStatus solve_status_from_string(const std::string& text) {
    if (text == "optimal") return SolveStatus::Optimal;
    if (text == "infeasible") return SolveStatus::Infeasible;
    if (text == "max_iterations") return SolveStatus::MaxIterations;
    throw ParseError("status", "unknown solve status '" + text + "'");
}

double required_power_at(const Vec3& x, const PlacementProblem& prob) {
    double power = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prob.n_faps(); ++i) {
        const double d = std::max(distance(x, prob.fap_positions[i]), prob.d_min_m);
        power = std::max(power,
                         prob.required_snrs_db[i] - prob.k_db + 20.0 * std::log10(d));
    }
    return power;
}

std::vector<double> link_radii(double p_t_dbm, const PlacementProblem& prob) {
    std::vector<double> radii(prob.n_faps());
    for (std::size_t i = 0; i < prob.n_faps(); ++i)
        radii[i] = max_link_distance_m(p_t_dbm, prob.required_snrs_db[i], prob.k_db);
    return radii;
}

FeasibilityReport feasible_at(const Vec3& x, double p_t_dbm, const PlacementProblem& prob) {
    FeasibilityReport report;
    report.in_venue = prob.venue.contains(x);
    report.power_in_range = p_t_dbm >= 0.0 && p_t_dbm <= prob.p_max_dbm;
    report.separation_ok = true;
    report.margins_m.reserve(prob.n_faps());
    for (std::size_t i = 0; i < prob.n_faps(); ++i) {
        const double d = distance(x, prob.fap_positions[i]);
        if (d < prob.d_min_m) report.separation_ok = false;
        const double radius = max_link_distance_m(p_t_dbm, prob.required_snrs_db[i], prob.k_db);
        const double margin = radius - d;
        report.margins_m.push_back(margin);
        report.min_margin_m = std::min(report.min_margin_m, margin);
    }
    report.feasible = report.in_venue && report.power_in_range && report.separation_ok &&
                      report.min_margin_m >= 0.0;
    return report;
}

namespace {

double ball_excess(const std::vector<Vec3>& centers, const std::vector<double>& radii,
                   const Vec3& x, std::size_t* argmax) {
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double v = distance(x, centers[i]) - radii[i];
        if (v > worst) {
            worst = v;
            worst_i = i;
        }
    }
    if (argmax) *argmax = worst_i;
    return worst;
}

// 26 box directions plus a fixed Fibonacci sphere, all unit length. A rich
// stencil keeps pattern search from stalling in the kinked valleys of h.
const std::vector<Vec3>& polish_stencil() {
    static const std::vector<Vec3> stencil = [] {
        std::vector<Vec3> dirs;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    Vec3 v{static_cast<double>(dx), static_cast<double>(dy),
                           static_cast<double>(dz)};
                    dirs.push_back(v * (1.0 / v.norm()));
                }
        const int extra = 32;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < extra; ++i) {
            const double y = 1.0 - 2.0 * (i + 0.5) / extra;
            const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
            const double phi = golden * i;
            dirs.push_back({r * std::cos(phi), y, r * std::sin(phi)});
        }
        return dirs;
    }();
    return stencil;
}

}  // namespace

BallExcessMin minimize_ball_excess(const std::vector<Vec3>& centers,
                                   const std::vector<double>& radii, const Venue& box,
                                   const Vec3& start, const BallExcessOptions& options) {
    int evals = 0;
    const auto eval = [&](const Vec3& p, std::size_t* am) {
        ++evals;
        return ball_excess(centers, radii, p, am);
    };

    Vec3 x = box.clamp(start);
    std::size_t am = 0;
    double hx = eval(x, &am);
    Vec3 best_x = x;
    double best_h = hx;
    std::size_t best_am = am;
    if (best_h <= options.early_exit_below) return {best_x, best_h, evals};

    const double diag = std::max(box.diagonal_m(), 1e-6);
    double delta = std::max(diag / 8.0, 1e-6);
    const double delta_floor = 1e-10 * std::max(1.0, diag);

    int window = 0;
    double window_best = best_h;
    const int max_iterations = 20'000;
    for (int iter = 0; iter < max_iterations && delta > delta_floor; ++iter) {
        Vec3 dir = x - centers[am];
        const double norm = dir.norm();
        const Vec3 g = norm > 1e-12 ? dir * (1.0 / norm) : Vec3{1.0, 0.0, 0.0};
        const double step = hx - (best_h - delta);  // Polyak step, ||g|| == 1
        x = box.clamp(x - g * step);
        hx = eval(x, &am);
        if (hx < best_h) {
            best_h = hx;
            best_x = x;
            best_am = am;
            if (best_h <= options.early_exit_below) return {best_x, best_h, evals};
        }
        if (++window >= 25) {
            if (window_best - best_h < delta / 4.0) {
                delta *= 0.5;
                x = best_x;
                hx = best_h;
                am = best_am;
            }
            window = 0;
            window_best = best_h;
        }
    }

    if (options.polish) {
        const auto& stencil = polish_stencil();
        double step = std::max(1e-3 * diag, 1e-7);
        const double floor_step = 1e-9 * std::max(1.0, diag);
        const int eval_budget = 120'000;
        while (step > floor_step && evals < eval_budget) {
            bool improved = false;
            for (const Vec3& dir : stencil) {
                const Vec3 cand = box.clamp(best_x + dir * step);
                std::size_t cam = 0;
                const double v = eval(cand, &cam);
                if (v < best_h) {
                    best_h = v;
                    best_x = cand;
                    best_am = cam;
                    improved = true;
                    if (best_h <= options.early_exit_below) return {best_x, best_h, evals};
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    return {best_x, best_h, evals};
}

namespace {

std::vector<Vec3> intersection_starts(const PlacementProblem& prob) {
    const double hx = prob.venue.x_m / 2.0;
    const double hy = prob.venue.y_m / 2.0;
    const double hz = prob.venue.z_m / 2.0;
    Vec3 centroid{0.0, 0.0, 0.0};
    for (const Vec3& p : prob.fap_positions) centroid += p;
    centroid = centroid * (1.0 / static_cast<double>(prob.n_faps()));
    return {{-hx, -hy, -hz}, {hx, hy, -hz}, {hx, -hy, hz}, {-hx, hy, hz},
            prob.venue.clamp(centroid)};
}

// Move a point that landed inside a d_min ball onto that ball's surface
// while staying inside the venue and every link sphere.
std::optional<Vec3> repair_separation(const Vec3& x, const std::vector<Vec3>& centers,
                                      const std::vector<double>& radii,
                                      const PlacementProblem& prob) {
    const double d_min = prob.d_min_m;
    const auto violated = [&](const Vec3& p) {
        for (const Vec3& c : centers)
            if (distance(p, c) < d_min * (1.0 - 1e-12)) return true;
        return false;
    };
    if (!violated(x)) return x;

    const double target = d_min * (1.0 + 1e-9);
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (distance(x, centers[j]) >= d_min * (1.0 - 1e-12)) continue;
        for (const Vec3& dir : polish_stencil()) {
            const Vec3 cand = centers[j] + dir * target;
            if (!prob.venue.contains(cand)) continue;
            if (violated(cand)) continue;
            if (ball_excess(centers, radii, cand, nullptr) > -1e-12) continue;
            return cand;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Vec3> ball_intersection_point(double p_t_dbm, const PlacementProblem& prob) {
    const std::vector<double> radii = link_radii(p_t_dbm, prob);
    for (double r : radii)
        if (r < prob.d_min_m * (1.0 - 1e-12)) return std::nullopt;

    BallExcessOptions options;
    options.early_exit_below = -1e-6;
    options.polish = false;

    Vec3 best_x;
    double best_h = std::numeric_limits<double>::infinity();
    for (const Vec3& start : intersection_starts(prob)) {
        const BallExcessMin r = minimize_ball_excess(prob.fap_positions, radii, prob.venue,
                                                     start, options);
        if (r.excess_m < best_h) {
            best_h = r.excess_m;
            best_x = r.point;
        }
        if (best_h <= options.early_exit_below) break;
    }

    // Near-tangent region: decide the sign accurately before giving up.
    if (best_h > options.early_exit_below && best_h < 1e-3 * std::max(1.0, prob.venue.diagonal_m())) {
        BallExcessOptions full;
        full.early_exit_below = -1e-6;
        full.polish = true;
        const BallExcessMin r =
            minimize_ball_excess(prob.fap_positions, radii, prob.venue, best_x, full);
        if (r.excess_m < best_h) {
            best_h = r.excess_m;
            best_x = r.point;
        }
    }

    if (best_h > -1e-9) return std::nullopt;
    return repair_separation(best_x, prob.fap_positions, radii, prob);
}

std::vector<LinkReport> build_link_reports(const Vec3& x, double p_t_dbm,
                                           const PlacementProblem& prob) {
    std::vector<LinkReport> links;
    links.reserve(prob.n_faps());
    for (std::size_t i = 0; i < prob.n_faps(); ++i) {
        LinkReport link;
        link.fap_id = static_cast<int>(i);
        link.distance_m = distance(x, prob.fap_positions[i]);
        link.radius_m = max_link_distance_m(p_t_dbm, prob.required_snrs_db[i], prob.k_db);
        link.margin_db = 20.0 * std::log10(link.radius_m / std::max(link.distance_m, 1e-12));
        links.push_back(link);
    }
    return links;
}

std::string solution_to_json(const PlacementSolution& solution) {
    detail::json j;
    detail::json fgw;
    fgw["x"] = round_sig9(solution.fgw_position.x);
    fgw["y"] = round_sig9(solution.fgw_position.y);
    fgw["z"] = round_sig9(solution.fgw_position.z);
    j["fgw"] = std::move(fgw);
    j["p_t_dbm"] = round_sig9(solution.p_t_dbm);
    j["status"] = to_string(solution.status);
    j["iterations"] = solution.iterations;
    j["elapsed_s"] = round_sig9(solution.elapsed_s);
    detail::json links = detail::json::array();
    for (const LinkReport& link : solution.links) {
        detail::json l;
        l["fap_id"] = link.fap_id;
        l["distance_m"] = round_sig9(link.distance_m);
        l["radius_m"] = round_sig9(link.radius_m);
        l["margin_db"] = round_sig9(link.margin_db);
        links.push_back(std::move(l));
    }
    j["links"] = std::move(links);
    return j.dump(2) + "\n";
}

PlacementSolution solution_from_json(const std::string& text) {
    const detail::json j = detail::parse_document(text, "solution");
    PlacementSolution sol;
    const detail::json& fgw = detail::require_object(j, "fgw", "");
    sol.fgw_position.x = detail::require_double(fgw, "x", "fgw.");
    sol.fgw_position.y = detail::require_double(fgw, "y", "fgw.");
    sol.fgw_position.z = detail::require_double(fgw, "z", "fgw.");
    sol.p_t_dbm = detail::require_double(j, "p_t_dbm", "");
    sol.status = solve_status_from_string(detail::require_string(j, "status", ""));
    sol.iterations = static_cast<int>(detail::require_int(j, "iterations", ""));
    sol.elapsed_s = detail::require_double(j, "elapsed_s", "");
    const detail::json& links = detail::require_array(j, "links", "");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string ctx = "links[" + std::to_string(i) + "].";
        const detail::json& l = links[i];
        if (!l.is_object()) throw ParseError(ctx, "expected an object");
        LinkReport link;
        link.fap_id = static_cast<int>(detail::require_int(l, "fap_id", ctx));
        link.distance_m = detail::require_double(l, "distance_m", ctx);
        link.radius_m = detail::require_double(l, "radius_m", ctx);
        link.margin_db = detail::require_double(l, "margin_db", ctx);
        sol.links.push_back(link);
    }
    return sol;
}

void save_solution(const PlacementSolution& solution, const std::filesystem::path& path) {
    detail::write_file(path, solution_to_json(solution));
}

PlacementSolution load_solution(const std::filesystem::path& path) {
    return solution_from_json(detail::read_file(path));
}

}  // namespace fgwp
