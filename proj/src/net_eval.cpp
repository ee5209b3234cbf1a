#include "fgwp/net_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgwp/radio.hpp"
#include "json_util.hpp"

namespace fgwp {

namespace {

constexpr double kPacketBits = 12'000.0;  // 1500-byte packets
constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest cap c with sum(min(w_i, c)) == budget; +inf when everything fits.
double max_min_cap(std::vector<double> wants, double budget) {
    std::sort(wants.begin(), wants.end());
    double used = 0.0;
    const std::size_t n = wants.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double cap = (budget - used) / static_cast<double>(n - k);
        if (cap <= wants[k]) return cap;
        used += wants[k];
    }
    return kInf;
}

int mcs_index_for_snr(double snr_db, const std::vector<McsEntry>& table) {
    int index = -1;
    for (const McsEntry& entry : table)
        if (entry.min_snr_db <= snr_db) index = entry.index;
    return index;
}

}  // namespace

EvaluationReport evaluate(const Scenario& scenario, const PlacementSolution& solution,
                          double load_scale) {
    if (load_scale < 0.0) throw std::domain_error("evaluate: load_scale must be >= 0");
    const PlacementProblem prob = make_problem(scenario);

    if (solution.status != SolveStatus::Optimal)
        throw InvalidSolution("solution status is not optimal");
    if (!prob.venue.contains(solution.fgw_position, 1e-9))
        throw InvalidSolution("gateway position outside the venue");
    if (solution.p_t_dbm < -1e-9 || solution.p_t_dbm > prob.p_max_dbm + 1e-9)
        throw InvalidSolution("transmission power outside [0, p_max]");
    for (const Fap& fap : scenario.faps)
        if (distance(solution.fgw_position, fap.position) < prob.d_min_m - 1e-9)
            throw InvalidSolution("gateway closer than d_min to FAP " +
                                  std::to_string(fap.id));

    const std::size_t n = scenario.faps.size();
    EvaluationReport report;
    report.flows.resize(n);

    std::vector<double> wants(n);  // airtime needed to carry the demand
    double wants_total = 0.0;
    bool dead_flow_with_demand = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Fap& fap = scenario.faps[i];
        FlowStats& flow = report.flows[i];
        flow.fap_id = fap.id;
        const double d =
            std::max(distance(solution.fgw_position, fap.position), prob.d_min_m);
        flow.snr_db = prob.k_db + solution.p_t_dbm - 20.0 * std::log10(d);
        flow.link_rate_bps = rate_for_snr(flow.snr_db, scenario.radio.mcs_table);
        flow.mcs_index = mcs_index_for_snr(flow.snr_db, scenario.radio.mcs_table);

        const double demand = static_cast<double>(fap.demand_bps) * load_scale;
        if (flow.link_rate_bps == 0) {
            wants[i] = demand > 0.0 ? kInf : 0.0;
            if (demand > 0.0) dead_flow_with_demand = true;
        } else {
            wants[i] = demand / static_cast<double>(flow.link_rate_bps);
            wants_total += wants[i];
        }
    }

    // Saturation tolerance keeps the constructed boundary case (airtimes
    // summing to exactly 1) on the unsaturated side despite rounding.
    report.saturated = dead_flow_with_demand || wants_total > 1.0 + 1e-9;

    double cap = kInf;
    if (report.saturated) {
        std::vector<double> live;
        for (std::size_t i = 0; i < n; ++i)
            if (report.flows[i].link_rate_bps > 0) live.push_back(wants[i]);
        if (!live.empty()) cap = max_min_cap(live, 1.0);
    }

    const double airtime_norm = std::max(1.0, wants_total);
    double aggregate = 0.0;
    bool any_unstable = false;
    double delay_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        FlowStats& flow = report.flows[i];
        const double demand = static_cast<double>(scenario.faps[i].demand_bps) * load_scale;
        if (flow.link_rate_bps == 0) {
            flow.airtime_share = 0.0;
            flow.throughput_bps = 0.0;
            flow.delay_s = demand > 0.0 ? kInf : 0.0;
        } else if (!report.saturated) {
            flow.airtime_share = wants[i] / airtime_norm;
            flow.throughput_bps = demand;
        } else {
            const double granted = std::min(wants[i], cap);
            flow.airtime_share = granted;
            flow.throughput_bps =
                granted >= wants[i] ? demand
                                    : granted * static_cast<double>(flow.link_rate_bps);
        }

        if (flow.link_rate_bps > 0) {
            // Service rate at the airtime this flow could claim if backlogged:
            // rerun the max-min split with this flow's demand unbounded.
            std::vector<double> others;
            for (std::size_t j = 0; j < n; ++j) {
                if (report.flows[j].link_rate_bps == 0) continue;
                others.push_back(j == i ? kInf : wants[j]);
            }
            const double backlogged_share = max_min_cap(others, 1.0);
            const double mu =
                backlogged_share * static_cast<double>(flow.link_rate_bps) / kPacketBits;
            const double lambda = demand / kPacketBits;
            flow.delay_s = mu > lambda ? 1.0 / (mu - lambda) : kInf;
        }

        aggregate += flow.throughput_bps;
        if (!std::isfinite(flow.delay_s))
            any_unstable = true;
        else
            delay_sum += flow.delay_s;
    }

    report.aggregate_throughput_bps = aggregate;
    report.mean_delay_s = any_unstable ? kInf : delay_sum / static_cast<double>(n);
    return report;
}

namespace {

detail::json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_sig9(v);
}

double double_or_inf(const detail::json& j, const char* key, const std::string& ctx) {
    const detail::json& v = detail::require_field(j, key, ctx);
    if (v.is_null()) return kInf;
    if (!v.is_number()) throw ParseError(ctx + key, "expected a number or null");
    return v.get<double>();
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
    detail::json j;
    detail::json flows = detail::json::array();
    for (const FlowStats& flow : report.flows) {
        detail::json f;
        f["fap_id"] = flow.fap_id;
        f["snr_db"] = round_sig9(flow.snr_db);
        f["mcs_index"] = flow.mcs_index;
        f["link_rate_bps"] = flow.link_rate_bps;
        f["airtime_share"] = round_sig9(flow.airtime_share);
        f["throughput_bps"] = round_sig9(flow.throughput_bps);
        f["delay_s"] = finite_or_null(flow.delay_s);
        flows.push_back(std::move(f));
    }
    j["flows"] = std::move(flows);
    j["aggregate_throughput_bps"] = round_sig9(report.aggregate_throughput_bps);
    j["mean_delay_s"] = finite_or_null(report.mean_delay_s);
    j["saturated"] = report.saturated;
    return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
    const detail::json j = detail::parse_document(text, "report");
    EvaluationReport report;
    const detail::json& flows = detail::require_array(j, "flows", "");
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const std::string ctx = "flows[" + std::to_string(i) + "].";
        const detail::json& f = flows[i];
        if (!f.is_object()) throw ParseError(ctx, "expected an object");
        FlowStats flow;
        flow.fap_id = static_cast<int>(detail::require_int(f, "fap_id", ctx));
        flow.snr_db = detail::require_double(f, "snr_db", ctx);
        flow.mcs_index = static_cast<int>(detail::require_int(f, "mcs_index", ctx));
        flow.link_rate_bps = detail::require_uint(f, "link_rate_bps", ctx);
        flow.airtime_share = detail::require_double(f, "airtime_share", ctx);
        flow.throughput_bps = detail::require_double(f, "throughput_bps", ctx);
        flow.delay_s = double_or_inf(f, "delay_s", ctx);
        report.flows.push_back(flow);
    }
    report.aggregate_throughput_bps = detail::require_double(j, "aggregate_throughput_bps", "");
    report.mean_delay_s = double_or_inf(j, "mean_delay_s", "");
    const detail::json& saturated = detail::require_field(j, "saturated", "");
    if (!saturated.is_boolean()) throw ParseError("saturated", "expected a boolean");
    report.saturated = saturated.get<bool>();
    return report;
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path) {
    detail::write_file(path, report_to_json(report));
}

EvaluationReport load_report(const std::filesystem::path& path) {
    return report_from_json(detail::read_file(path));
}

}  // namespace fgwp
