#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fgwp/errors.hpp"
#include "fgwp/geom.hpp"
#include "fgwp/radio.hpp"

namespace fgwp {

/// Axis-aligned venue box centered at the origin; coordinates range over
/// [-x_m/2, x_m/2] x [-y_m/2, y_m/2] x [-z_m/2, z_m/2].
struct Venue {
    double x_m{15.0};
    double y_m{15.0};
    double z_m{20.0};

    bool contains(const Vec3& p, double tolerance_m = 0.0) const;
    Vec3 clamp(const Vec3& p) const;
    double diagonal_m() const;
};

/// Flying access point: position, offered traffic, and the minimum SNR its
/// backhaul link must sustain.
struct Fap {
    int id{0};
    Vec3 position;
    std::uint64_t demand_bps{0};
    double required_snr_db{0.0};
};

/// One network snapshot: venue, radio parameters, and the FAP set.
struct Scenario {
    Venue venue;
    RadioConfig radio;
    std::vector<Fap> faps;
    std::uint64_t seed{0};
    int snapshot_id{0};
};

enum class ViolationCode {
    InvalidVenue,
    InvalidRadio,
    NoFaps,
    DuplicateFapId,
    BoundsViolation,
    NonPositiveDemand,
    SnrOutOfRange,
    SeparationViolation,
    AggregateCapacityViolation,
};

const char* to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    int fap_id{-1};    // -1 when not tied to a single FAP
    char axis{'\0'};   // 'x'/'y'/'z' for bounds violations
    std::string detail;
};

/// Deterministically places n_faps FAPs uniformly in the venue with pairwise
/// separation >= d_min (rejection sampling), draws each required SNR uniformly
/// from the MCS thresholds, and back-fills the fair-share demand rate/n.
///
/// The generator is mt19937_64 seeded with `seed`; uniform doubles are
/// (word >> 11) * 2^-53, consumed in the order x, y, z, mcs per placed FAP.
/// Coordinates are quantized to 9 significant digits so a scenario equals its
/// serialized form. Throws PlacementExhausted after 10000 consecutive
/// rejected draws.
Scenario generate_scenario(int n_faps, std::uint64_t seed, const Venue& venue,
                           const RadioConfig& radio);

/// Empty result iff every Scenario invariant holds. Violations are data, one
/// code per invariant, never exceptions.
std::vector<Violation> validate_scenario(const Scenario& scenario);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

/// Standalone radio-parameter file: the scenario format's "radio" object.
RadioConfig load_radio_config(const std::filesystem::path& path);

/// Round to 9 significant decimal digits, the precision carried by every
/// serialized double in this toolkit.
double round_sig9(double value);

}  // namespace fgwp
