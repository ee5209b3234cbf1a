#pragma once

#include <cstdint>
#include <vector>

namespace fgwp {

inline constexpr double kSpeedOfLightMps = 299'792'458.0;

/// One row of the SNR -> data rate table (single spatial stream).
struct McsEntry {
    int index{0};
    double min_snr_db{0.0};
    std::uint64_t rate_bps{0};
};

/// Physical-layer parameters shared by every link of a flying network.
///
/// Defaults model 802.11ac channel 50: 160 MHz around 5250 MHz, 800 ns GI,
/// one spatial stream. The noise floor default is the 160 MHz thermal floor
/// plus a 7 dB noise figure, rounded to -85 dBm.
struct RadioConfig {
    double frequency_hz{5.25e9};
    double noise_power_dbm{-85.0};
    double p_max_dbm{30.0};
    std::uint64_t c_max_bps{780'000'000};
    double d_min_m{1.0};         // free-space model far-field cutoff
    double loss_offset_db{0.0};  // extra loss for the worst channel direction
    std::vector<McsEntry> mcs_table;
};

/// 802.11ac VHT rates at 160 MHz / 800 ns GI / 1 stream, MCS 0-9.
const std::vector<McsEntry>& default_mcs_table();

RadioConfig default_radio_config();

/// Throws std::invalid_argument naming the first bad field.
void validate_radio_config(const RadioConfig& config);

/// Free-space path loss 20log10(d) + 20log10(f) + 20log10(4*pi/c), in dB.
/// Throws std::domain_error for non-positive distance or frequency.
double path_loss_db(double distance_m, double frequency_hz);

/// Link-budget constant K = -20log10(f) - 20log10(4*pi/c) - P_noise.
/// Folds frequency and noise floor into one dB constant, so that
/// SNR = K + P_T - 20log10(d).
double link_budget_constant_db(double frequency_hz, double noise_power_dbm);
double link_budget_constant_db(const RadioConfig& config);

/// Sphere radius within which the gateway must sit for one link:
/// 10^((K + P_T - SNR_req)/20), in meters. Radii below d_min mean the link
/// is infeasible at this power; the caller decides.
double max_link_distance_m(double p_t_dbm, double snr_req_db, double k_db);

/// Lowest MCS entry whose rate covers demand_bps on every one of n_faps
/// fair shares, i.e. rate >= demand_bps * n_faps.
/// Throws InfeasibleDemand when even the top entry is too slow.
McsEntry required_snr_for_demand(std::uint64_t demand_bps, int n_faps,
                                 const std::vector<McsEntry>& table);

/// Rate of the highest entry whose threshold is <= snr_db (inclusive);
/// 0 when snr_db is below the lowest threshold (no link).
std::uint64_t rate_for_snr(double snr_db, const std::vector<McsEntry>& table);

}  // namespace fgwp
