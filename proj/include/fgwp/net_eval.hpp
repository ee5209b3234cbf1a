#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fgwp/problem.hpp"
#include "fgwp/scenario.hpp"

namespace fgwp {

/// Per-flow outcome of the analytic shared-medium model.
struct FlowStats {
    int fap_id{0};
    double snr_db{0.0};          // achieved at the actual distance
    int mcs_index{-1};           // -1 when the SNR is below the lowest threshold
    std::uint64_t link_rate_bps{0};
    double airtime_share{0.0};   // fraction of the channel actually used
    double throughput_bps{0.0};
    double delay_s{0.0};         // M/M/1 estimate; +inf when the queue is unstable
};

struct EvaluationReport {
    std::vector<FlowStats> flows;
    double aggregate_throughput_bps{0.0};
    double mean_delay_s{0.0};    // +inf when any flow is unstable
    bool saturated{false};
};

/// Analytic fair-share evaluation of a placement against a scenario.
///
/// Each flow needs airtime demand/link_rate; when the total fits in one
/// channel every demand is delivered, otherwise airtime is split max-min
/// fairly. Delay is a per-flow M/M/1 estimate at 1500-byte packets, with the
/// service rate taken at the airtime the flow could claim when backlogged.
/// load_scale multiplies every demand before evaluation.
///
/// Throws InvalidSolution when the solution does not structurally fit the
/// scenario: status not Optimal, gateway outside the venue, power outside
/// [0, p_max], or a FAP closer than d_min. Links whose SNR falls short of
/// the required MCS are not errors; they degrade the delivered rate.
EvaluationReport evaluate(const Scenario& scenario, const PlacementSolution& solution,
                          double load_scale = 1.0);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& text);
void save_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport load_report(const std::filesystem::path& path);

}  // namespace fgwp
