#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fgwp/geom.hpp"
#include "fgwp/scenario.hpp"

namespace fgwp {

/// Solver-facing normalized instance. The link budget is folded into the
/// single constant k_db, so per-link feasibility at power p reads
/// ||x - P_i|| <= 10^((k_db + p - snr_i)/20).
struct PlacementProblem {
    std::vector<Vec3> fap_positions;
    std::vector<double> required_snrs_db;
    double k_db{0.0};
    Venue venue;
    double p_max_dbm{30.0};
    double d_min_m{1.0};

    std::size_t n_faps() const { return fap_positions.size(); }
};

/// k_db = link_budget_constant - loss_offset; FAP order is preserved.
PlacementProblem make_problem(const Scenario& scenario);

enum class SolveStatus { Optimal, Infeasible, MaxIterations };
const char* to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& text);

struct LinkReport {
    int fap_id{0};
    double distance_m{0.0};
    double radius_m{0.0};
    double margin_db{0.0};  // 20log10(radius/distance); positive means slack
};

struct PlacementSolution {
    Vec3 fgw_position;
    double p_t_dbm{0.0};
    std::vector<LinkReport> links;
    SolveStatus status{SolveStatus::Infeasible};
    int iterations{0};
    double elapsed_s{0.0};
};

/// Smallest transmission power making every link constraint hold at x:
/// g(x) = max_i [snr_i - k + 20log10(max(||x - P_i||, d_min))].
/// Continuous and bounded; may be negative.
double required_power_at(const Vec3& x, const PlacementProblem& prob);

struct FeasibilityReport {
    bool feasible{false};
    bool in_venue{false};
    bool power_in_range{false};
    bool separation_ok{false};        // every distance >= d_min
    std::vector<double> margins_m;    // radius - distance, per link
    double min_margin_m{std::numeric_limits<double>::infinity()};
};

/// Exact constraint check at (x, p_t): venue box, 0 <= p_t <= p_max,
/// d_min separation, and every link within its sphere.
FeasibilityReport feasible_at(const Vec3& x, double p_t_dbm, const PlacementProblem& prob);

/// Sphere radii d_i at transmission power p_t, in FAP order.
std::vector<double> link_radii(double p_t_dbm, const PlacementProblem& prob);

struct BallExcessOptions {
    double early_exit_below{-std::numeric_limits<double>::infinity()};
    bool polish{true};
};

struct BallExcessMin {
    Vec3 point;
    double excess_m{0.0};
    int evaluations{0};
};

/// Minimizes the convex function h(x) = max_i (||x - centers[i]|| - radii[i])
/// over the venue box. Projected subgradient with an adaptive Polyak step,
/// then a stencil pattern-search polish. h <= 0 at the result means the balls
/// intersect inside the box.
BallExcessMin minimize_ball_excess(const std::vector<Vec3>& centers,
                                   const std::vector<double>& radii, const Venue& box,
                                   const Vec3& start, const BallExcessOptions& options = {});

/// A point of the intersection of the link spheres at power p_t, inside the
/// venue and at least d_min away from every FAP; nothing when the
/// intersection is empty (or some sphere radius is below d_min).
/// Multi-start over four venue corners plus the FAP centroid.
std::optional<Vec3> ball_intersection_point(double p_t_dbm, const PlacementProblem& prob);

/// Per-link distance/radius/margin rows at (x, p_t). fap_id is the problem
/// index; callers that know the scenario may remap ids.
std::vector<LinkReport> build_link_reports(const Vec3& x, double p_t_dbm,
                                           const PlacementProblem& prob);

std::string solution_to_json(const PlacementSolution& solution);
PlacementSolution solution_from_json(const std::string& text);
void save_solution(const PlacementSolution& solution, const std::filesystem::path& path);
PlacementSolution load_solution(const std::filesystem::path& path);

}  // namespace fgwp
