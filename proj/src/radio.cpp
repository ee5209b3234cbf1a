#include "fgwp/radio.hpp"

#include "fgwp/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fgwp {

namespace {

double four_pi_over_c_db() {
    static const double value =
        20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLightMps);
    return value;
}

}  // namespace

const std::vector<McsEntry>& default_mcs_table() {
    // 160 MHz, 800 ns GI, single stream. Endpoints 58.5 and 780 Mbit/s at
    // 11 and 40 dB; intermediate thresholds are interpolated defaults and
    // replaceable through RadioConfig.
    static const std::vector<McsEntry> table = {
        {0, 11.0, 58'500'000},  {1, 14.0, 117'000'000}, {2, 17.0, 175'500'000},
        {3, 20.0, 234'000'000}, {4, 23.0, 351'000'000}, {5, 27.0, 468'000'000},
        {6, 30.0, 526'500'000}, {7, 33.0, 585'000'000}, {8, 37.0, 702'000'000},
        {9, 40.0, 780'000'000},
    };
    return table;
}

RadioConfig default_radio_config() {
    RadioConfig config;
    config.mcs_table = default_mcs_table();
    return config;
}

void validate_radio_config(const RadioConfig& config) {
    if (!(config.frequency_hz > 0.0))
        throw std::invalid_argument("radio.frequency_hz must be positive");
    if (!std::isfinite(config.noise_power_dbm))
        throw std::invalid_argument("radio.noise_power_dbm must be finite");
    if (!(config.p_max_dbm >= 0.0))
        throw std::invalid_argument("radio.p_max_dbm must be >= 0");
    if (!(config.d_min_m > 0.0))
        throw std::invalid_argument("radio.d_min_m must be positive");
    if (!(config.loss_offset_db >= 0.0) || !std::isfinite(config.loss_offset_db))
        throw std::invalid_argument("radio.loss_offset_db must be >= 0");
    if (config.mcs_table.empty())
        throw std::invalid_argument("radio.mcs_table must not be empty");
    for (std::size_t i = 1; i < config.mcs_table.size(); ++i) {
        const auto& prev = config.mcs_table[i - 1];
        const auto& cur = config.mcs_table[i];
        if (!(cur.min_snr_db > prev.min_snr_db))
            throw std::invalid_argument(
                "radio.mcs_table min_snr_db must be strictly increasing (entry " +
                std::to_string(i) + ")");
        if (!(cur.rate_bps > prev.rate_bps))
            throw std::invalid_argument(
                "radio.mcs_table rate_bps must be strictly increasing (entry " +
                std::to_string(i) + ")");
    }
    if (config.c_max_bps != config.mcs_table.back().rate_bps)
        throw std::invalid_argument(
            "radio.c_max_bps must equal the rate of the highest MCS entry");
}

double path_loss_db(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0))
        throw std::domain_error("path_loss_db: distance must be positive");
    if (!(frequency_hz > 0.0))
        throw std::domain_error("path_loss_db: frequency must be positive");
    return 20.0 * std::log10(distance_m) + 20.0 * std::log10(frequency_hz) +
           four_pi_over_c_db();
}

double link_budget_constant_db(double frequency_hz, double noise_power_dbm) {
    if (!(frequency_hz > 0.0))
        throw std::domain_error("link_budget_constant_db: frequency must be positive");
    return -20.0 * std::log10(frequency_hz) - four_pi_over_c_db() - noise_power_dbm;
}

double link_budget_constant_db(const RadioConfig& config) {
    return link_budget_constant_db(config.frequency_hz, config.noise_power_dbm);
}

double max_link_distance_m(double p_t_dbm, double snr_req_db, double k_db) {
    return std::pow(10.0, (k_db + p_t_dbm - snr_req_db) / 20.0);
}

McsEntry required_snr_for_demand(std::uint64_t demand_bps, int n_faps,
                                 const std::vector<McsEntry>& table) {
    if (demand_bps == 0)
        throw std::domain_error("required_snr_for_demand: demand must be positive");
    if (n_faps < 1)
        throw std::domain_error("required_snr_for_demand: n_faps must be >= 1");
    if (table.empty())
        throw std::domain_error("required_snr_for_demand: empty MCS table");

    const std::uint64_t needed = demand_bps * static_cast<std::uint64_t>(n_faps);
    for (const auto& entry : table) {
        if (entry.rate_bps >= needed) return entry;
    }
    throw InfeasibleDemand("aggregate demand " + std::to_string(needed) +
                           " bit/s exceeds top MCS rate " +
                           std::to_string(table.back().rate_bps) + " bit/s");
}

std::uint64_t rate_for_snr(double snr_db, const std::vector<McsEntry>& table) {
    std::uint64_t rate = 0;
    for (const auto& entry : table) {
        if (entry.min_snr_db <= snr_db) rate = entry.rate_bps;
    }
    return rate;
}

}  // namespace fgwp
