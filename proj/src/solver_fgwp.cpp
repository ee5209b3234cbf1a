#include "fgwp/solver_fgwp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <cstdlib>

#include "fgwp/radio.hpp"
#include "qp_ipm.hpp"

namespace fgwp {

namespace {

// d(10^((k+p-s)/10))/dp = Q * ln(10)/10
constexpr double kAlpha = std::numbers::ln10 / 10.0;

Vec3 fap_centroid(const PlacementProblem& prob) {
    Vec3 c{0.0, 0.0, 0.0};
    for (const Vec3& p : prob.fap_positions) c += p;
    return c * (1.0 / static_cast<double>(prob.n_faps()));
}

// The squared-distance gradients vanish at a FAP position; keep the start
// strictly away from every FAP.
Vec3 nudge_start(Vec3 q, const PlacementProblem& prob) {
    const auto min_dist = [&](const Vec3& x) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& p : prob.fap_positions) best = std::min(best, distance(x, p));
        return best;
    };
    if (min_dist(q) >= 1e-6) return q;

    const Vec3 dirs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    Vec3 best = q;
    double best_clearance = min_dist(q);
    for (const Vec3& dir : dirs) {
        const Vec3 cand = prob.venue.clamp(q + dir * prob.d_min_m);
        const double clearance = min_dist(cand);
        if (clearance > best_clearance) {
            best_clearance = clearance;
            best = cand;
        }
    }
    return best;
}

struct SqpState {
    Vec3 position;
    double power{0.0};
    int iterations{0};
    bool converged{false};
    bool power_capped{false};
    double max_violation_rel{std::numeric_limits<double>::infinity()};
};

// Gaussian elimination with partial pivoting for tiny systems.
bool solve_dense(std::vector<double> a, std::vector<double> b, int n,
                 std::vector<double>& out) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (std::abs(a[pivot * n + col]) < 1e-12) return false;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            std::swap(b[pivot], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double sum = b[r];
        for (int c = r + 1; c < n; ++c) sum -= a[r * n + c] * out[c];
        out[r] = sum / a[r * n + r];
    }
    return true;
}

SqpState run_sqp(const PlacementProblem& prob, Vec3 q, double p, int max_iterations) {
    const std::size_t m = prob.n_faps();
    const double half_x = prob.venue.x_m / 2.0;
    const double half_y = prob.venue.y_m / 2.0;
    const double half_z = prob.venue.z_m / 2.0;
    const double d_min_sq = prob.d_min_m * prob.d_min_m;
    const double dmin_scale = 1.0 / std::max(1.0, d_min_sq);

    q = prob.venue.clamp(q);
    p = std::clamp(p, 0.0, prob.p_max_dbm);

    std::vector<double> lambda_link(m, 0.0), lambda_dmin(m, 0.0);
    std::vector<Vec3> diffs(m);
    std::vector<double> c_link(m), c_dmin(m), q_sphere(m);

    // Violations are judged relative to the constraint scale (sphere radius
    // squared); the absolute L1 sum drives the merit function.
    const auto evaluate = [&](const Vec3& pos, double pow_dbm, double& viol_sum,
                              double& viol_rel) {
        viol_sum = 0.0;
        viol_rel = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 diff = pos - prob.fap_positions[i];
            const double s2 = diff.squared_norm();
            const double sphere =
                std::pow(10.0, (prob.k_db + pow_dbm - prob.required_snrs_db[i]) / 10.0);
            diffs[i] = diff;
            q_sphere[i] = sphere;
            c_link[i] = s2 - sphere;
            c_dmin[i] = d_min_sq - s2;
            viol_sum += std::max(0.0, c_link[i]) + std::max(0.0, c_dmin[i]);
            viol_rel = std::max(viol_rel, c_link[i] / std::max(1.0, sphere));
            viol_rel = std::max(viol_rel, c_dmin[i] * dmin_scale);
        }
        viol_rel = std::max(viol_rel, 0.0);
    };

    SqpState state;
    detail::QpProblem qp;
    detail::QpWorkspace ws;
    std::vector<Vec3> base_diffs(m);
    std::vector<double> base_spheres(m);
    std::vector<double> row_scales(2 * m, 1.0);
    double mu_merit = 10.0;
    int line_search_failures = 0;
    int stagnant = 0;

    for (int iter = 1; iter <= max_iterations; ++iter) {
        state.iterations = iter;
        double viol_sum = 0.0, viol_rel = 0.0;
        evaluate(q, p, viol_sum, viol_rel);
        state.max_violation_rel = viol_rel;

        // Convexified diagonal Lagrangian Hessian from the latest multiplier
        // estimates: 2*sum(lambda) in the position block, the sphere term's
        // magnitude in the power block.
        double sum_ll = 0.0, sum_ld = 0.0, sum_lq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sum_ll += lambda_link[i];
            sum_ld += lambda_dmin[i];
            sum_lq += lambda_link[i] * q_sphere[i];
        }
        const double h_xyz = std::clamp(2.0 * (sum_ll - sum_ld), 0.1, 1e6);
        const double h_p = std::clamp(kAlpha * kAlpha * sum_lq, 0.1, 1e4);

        qp.clear(5);  // dx, dy, dz, dp, elastic slack
        qp.h_diag = {h_xyz, h_xyz, h_xyz, h_p, 1e-6};
        qp.grad = {0.0, 0.0, 0.0, 1.0, std::max(10.0, 2.0 * mu_merit)};
        // Rows are normalized by their gradient's infinity norm; sphere
        // constraints otherwise dwarf the bound rows and wreck the QP's
        // conditioning. The elastic column then measures relative violation.
        std::vector<double>& row_scale = row_scales;
        for (std::size_t i = 0; i < m; ++i) {
            const double norm =
                std::max({std::abs(2.0 * diffs[i].x), std::abs(2.0 * diffs[i].y),
                          std::abs(2.0 * diffs[i].z), q_sphere[i] * kAlpha, 1.0});
            row_scale[i] = norm;
            const double inv = 1.0 / norm;
            qp.add_row({2.0 * diffs[i].x * inv, 2.0 * diffs[i].y * inv,
                        2.0 * diffs[i].z * inv, -q_sphere[i] * kAlpha * inv, -1.0},
                       -c_link[i] * inv);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double norm =
                std::max({std::abs(2.0 * diffs[i].x), std::abs(2.0 * diffs[i].y),
                          std::abs(2.0 * diffs[i].z), 1.0});
            row_scale[m + i] = norm;
            const double inv = 1.0 / norm;
            qp.add_row({-2.0 * diffs[i].x * inv, -2.0 * diffs[i].y * inv,
                        -2.0 * diffs[i].z * inv, 0.0, -1.0},
                       -c_dmin[i] * inv);
        }
        qp.add_row({1, 0, 0, 0, 0}, half_x - q.x);
        qp.add_row({-1, 0, 0, 0, 0}, half_x + q.x);
        qp.add_row({0, 1, 0, 0, 0}, half_y - q.y);
        qp.add_row({0, -1, 0, 0, 0}, half_y + q.y);
        qp.add_row({0, 0, 1, 0, 0}, half_z - q.z);
        qp.add_row({0, 0, -1, 0, 0}, half_z + q.z);
        qp.add_row({0, 0, 0, 1, 0}, prob.p_max_dbm - p);
        qp.add_row({0, 0, 0, -1, 0}, p);
        qp.add_row({0, 0, 0, 0, -1}, 0.0);

        const detail::QpResult& step = detail::solve_qp(qp, ws);
        for (std::size_t i = 0; i < m; ++i) {
            lambda_link[i] = step.duals[i] / row_scale[i];
            lambda_dmin[i] = step.duals[m + i] / row_scale[m + i];
        }

        if (!step.converged) {
            if (++line_search_failures >= 2) break;
            continue;
        }

        const Vec3 d{step.u[0], step.u[1], step.u[2]};
        const double dp = step.u[3];
        const double step_norm =
            std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z), std::abs(dp)});

        if (viol_rel <= 1e-9 && std::abs(dp) < 1e-8) {
            state.converged = true;
            break;
        }

        double lambda_max = 0.0;
        for (std::size_t i = 0; i < 2 * m; ++i)
            lambda_max = std::max(lambda_max, step.duals[i] / row_scale[i]);
        if (mu_merit < 1.2 * lambda_max) mu_merit = std::min(2.0 * lambda_max, 1e7);
        // Shed stale penalty weight once the multipliers come back down,
        // otherwise one bad iteration poisons every later line search.
        const double mu_target = std::max(10.0, 2.0 * lambda_max);
        if (mu_merit > 100.0 * mu_target) mu_merit = mu_target;

        const double phi0 = p + mu_merit * viol_sum;
        const double descent = dp - mu_merit * viol_sum;

        base_diffs = diffs;
        base_spheres = q_sphere;

        double alpha = 1.0;
        bool accepted = false;
        Vec3 q_next;
        double p_next = p;
        for (int ls = 0; ls < 40 && !accepted; ++ls) {
            q_next = prob.venue.clamp(q + d * alpha);
            p_next = std::clamp(p + alpha * dp, 0.0, prob.p_max_dbm);
            double trial_sum = 0.0, trial_rel = 0.0;
            evaluate(q_next, p_next, trial_sum, trial_rel);
            if (p_next + mu_merit * trial_sum <= phi0 + 0.1 * alpha * descent) {
                accepted = true;
                break;
            }

            if (ls == 0) {
                // Second-order correction: the full step leaves the curved
                // constraint surface by O(|d|^2); shift back along the
                // active gradients so the merit test sees the true descent.
                std::vector<int> active;
                for (std::size_t i = 0; i < 2 * m && active.size() < 4; ++i)
                    if (step.duals[i] > 1e-4) active.push_back(static_cast<int>(i));
                if (!active.empty()) {
                    const int na = static_cast<int>(active.size());
                    std::vector<std::vector<double>> grads;
                    std::vector<double> resid;
                    for (int idx : active) {
                        if (idx < static_cast<int>(m)) {
                            grads.push_back({2.0 * base_diffs[idx].x, 2.0 * base_diffs[idx].y,
                                             2.0 * base_diffs[idx].z,
                                             -base_spheres[idx] * kAlpha});
                            resid.push_back(c_link[idx]);  // at the trial point
                        } else {
                            const int i = idx - static_cast<int>(m);
                            grads.push_back({-2.0 * base_diffs[i].x, -2.0 * base_diffs[i].y,
                                             -2.0 * base_diffs[i].z, 0.0});
                            resid.push_back(c_dmin[i]);
                        }
                    }
                    std::vector<double> jjt(static_cast<std::size_t>(na) * na, 0.0);
                    for (int r = 0; r < na; ++r)
                        for (int c = 0; c < na; ++c)
                            for (int k = 0; k < 4; ++k)
                                jjt[r * na + c] += grads[r][k] * grads[c][k];
                    std::vector<double> y;
                    if (solve_dense(jjt, resid, na, y)) {
                        double dc[4] = {0, 0, 0, 0};
                        for (int r = 0; r < na; ++r)
                            for (int k = 0; k < 4; ++k) dc[k] -= grads[r][k] * y[r];
                        const Vec3 q_soc =
                            prob.venue.clamp(q + d + Vec3{dc[0], dc[1], dc[2]});
                        const double p_soc =
                            std::clamp(p + dp + dc[3], 0.0, prob.p_max_dbm);
                        double soc_sum = 0.0, soc_rel = 0.0;
                        evaluate(q_soc, p_soc, soc_sum, soc_rel);
                        if (p_soc + mu_merit * soc_sum <= phi0 + 0.1 * descent) {
                            q_next = q_soc;
                            p_next = p_soc;
                            accepted = true;
                            break;
                        }
                    }
                }
            }
            alpha *= 0.5;
        }

        if (std::getenv("FGWP_SQP_TRACE"))
            std::fprintf(stderr,
                         "it=%d acc=%d p=%.8f viol=%.3e dp=%+.3e step=%.3e alpha=%.3e mu=%.1f hx=%.3f hp=%.3f\n",
                         iter, accepted ? 1 : 0, p, viol_rel, dp, step_norm, alpha, mu_merit, h_xyz, h_p);
        if (!accepted) {
            // One merit bump, then treat repeated failure as endgame noise
            // (certification recomputes the exact power) or a real stall.
            if (++line_search_failures >= 2) {
                if (viol_rel <= 1e-8 && std::abs(dp) <= 1e-5) state.converged = true;
                break;
            }
            mu_merit = std::min(mu_merit * 10.0, 1e7);
            continue;
        }
        line_search_failures = 0;

        const double moved = alpha * step_norm;
        q = q_next;
        p = p_next;

        if (moved < 1e-10) {
            if (++stagnant >= 3) {
                if (viol_rel <= 1e-8 && std::abs(dp) <= 1e-5) state.converged = true;
                break;
            }
        } else {
            stagnant = 0;
        }

        if (p >= prob.p_max_dbm - 1e-9 && viol_rel > 1e-6 && step_norm < 1e-6) {
            state.power_capped = true;
            break;
        }
    }

    state.position = q;
    state.power = p;
    {
        double viol_sum = 0.0, viol_rel = 0.0;
        evaluate(q, p, viol_sum, viol_rel);
        state.max_violation_rel = viol_rel;
    }
    return state;
}

// Lift a solution's power to exact per-link feasibility: the smallest power
// covering every link at this position, plus a hair of slack so downstream
// SNR comparisons land strictly above their MCS thresholds.
double certified_power(const Vec3& x, const PlacementProblem& prob) {
    const double g = required_power_at(x, prob);
    if (g <= 0.0) return 0.0;
    return std::min(g + 1e-6, prob.p_max_dbm);
}

// Push a point sitting fractionally inside a d_min ball back onto the
// surface. Violations here are at the 1e-9 m scale, far below link margins.
Vec3 enforce_d_min(Vec3 x, const PlacementProblem& prob) {
    for (const Vec3& p : prob.fap_positions) {
        const double d = distance(x, p);
        if (d >= prob.d_min_m || d < 1e-12) continue;
        const Vec3 adjusted = p + (x - p) * (prob.d_min_m * (1.0 + 1e-12) / d);
        if (prob.venue.contains(adjusted)) x = adjusted;
    }
    return x;
}

// Certified-global route: bisection on the power against the convex
// sphere-intersection test. Power below lower_bound leaves some sphere
// radius under d_min, so no position can be feasible there.
PlacementSolution solve_by_bisection(const PlacementProblem& prob) {
    PlacementSolution sol;

    double lower_bound = 0.0;
    for (std::size_t i = 0; i < prob.n_faps(); ++i)
        lower_bound = std::max(lower_bound, prob.required_snrs_db[i] - prob.k_db +
                                                20.0 * std::log10(prob.d_min_m));
    const double lo_start = std::max(0.0, lower_bound);

    int probes = 0;
    const auto probe = [&](double power) {
        ++probes;
        return ball_intersection_point(power, prob);
    };

    if (lo_start > prob.p_max_dbm) {
        sol.status = SolveStatus::Infeasible;
        sol.p_t_dbm = prob.p_max_dbm;
        sol.fgw_position = prob.venue.clamp(fap_centroid(prob));
        sol.iterations = probes;
        return sol;
    }

    if (auto point = probe(lo_start)) {
        sol.fgw_position = *point;
        sol.p_t_dbm = certified_power(*point, prob);
        sol.status = SolveStatus::Optimal;
        sol.iterations = probes;
        return sol;
    }

    auto at_max = probe(prob.p_max_dbm);
    if (!at_max) {
        sol.status = SolveStatus::Infeasible;
        sol.p_t_dbm = prob.p_max_dbm;
        sol.fgw_position = prob.venue.clamp(fap_centroid(prob));
        sol.iterations = probes;
        return sol;
    }

    double lo = lo_start, hi = prob.p_max_dbm;
    Vec3 point = *at_max;
    while (hi - lo > 1e-5) {
        const double mid = 0.5 * (lo + hi);
        if (auto pt = probe(mid)) {
            hi = mid;
            point = *pt;
        } else {
            lo = mid;
        }
    }
    sol.fgw_position = point;
    sol.p_t_dbm = certified_power(point, prob);
    sol.status = SolveStatus::Optimal;
    sol.iterations = probes;
    return sol;
}

}  // namespace

PlacementSolution solve_fgwp(const PlacementProblem& prob) {
    return solve_fgwp(prob, FgwpOptions{});
}

PlacementSolution solve_fgwp(const PlacementProblem& prob, const FgwpOptions& options) {
    if (prob.fap_positions.empty() ||
        prob.fap_positions.size() != prob.required_snrs_db.size())
        throw std::domain_error("solve_fgwp: malformed problem");
    if (!(prob.d_min_m > 0.0)) throw std::domain_error("solve_fgwp: d_min must be positive");

    const auto t0 = std::chrono::steady_clock::now();

    const Vec3 start = nudge_start(
        prob.venue.clamp(options.initial_position.value_or(fap_centroid(prob))), prob);
    const SqpState state = run_sqp(prob, start, options.initial_power_dbm,
                                   options.max_iterations);

    PlacementSolution sol;
    bool done = false;

    if (state.converged && state.max_violation_rel <= 1e-8) {
        const double g = required_power_at(state.position, prob);
        if (g <= prob.p_max_dbm + 1e-9 && g <= state.power + 1e-5) {
            sol.fgw_position = enforce_d_min(state.position, prob);
            sol.p_t_dbm = certified_power(sol.fgw_position, prob);
            sol.status = SolveStatus::Optimal;
            sol.iterations = state.iterations;
            done = true;
        }
    } else if (state.power_capped) {
        if (!ball_intersection_point(prob.p_max_dbm, prob)) {
            sol.fgw_position = state.position;
            sol.p_t_dbm = prob.p_max_dbm;
            sol.status = SolveStatus::Infeasible;
            sol.iterations = state.iterations;
            done = true;
        }
    }

    if (!done) {
        PlacementSolution fallback = solve_by_bisection(prob);
        fallback.iterations += state.iterations;
        sol = std::move(fallback);
    }

    sol.links = build_link_reports(sol.fgw_position, sol.p_t_dbm, prob);
    sol.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace fgwp
