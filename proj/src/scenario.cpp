#include "fgwp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>

#include "json_util.hpp"

namespace fgwp {

namespace {

constexpr int kMaxConsecutiveRejections = 10'000;

// Portable uniform double in [0, 1): the standard distribution objects are
// not bit-identical across standard libraries, mt19937_64 itself is.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double round_sig9(double value) {
    if (!std::isfinite(value) || value == 0.0) return value;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return std::strtod(buf, nullptr);
}

bool Venue::contains(const Vec3& p, double tolerance_m) const {
    return std::abs(p.x) <= x_m / 2.0 + tolerance_m &&
           std::abs(p.y) <= y_m / 2.0 + tolerance_m &&
           std::abs(p.z) <= z_m / 2.0 + tolerance_m;
}

Vec3 Venue::clamp(const Vec3& p) const {
    return {std::clamp(p.x, -x_m / 2.0, x_m / 2.0),
            std::clamp(p.y, -y_m / 2.0, y_m / 2.0),
            std::clamp(p.z, -z_m / 2.0, z_m / 2.0)};
}

double Venue::diagonal_m() const { return std::sqrt(x_m * x_m + y_m * y_m + z_m * z_m); }

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::InvalidVenue: return "InvalidVenue";
        case ViolationCode::InvalidRadio: return "InvalidRadio";
        case ViolationCode::NoFaps: return "NoFaps";
        case ViolationCode::DuplicateFapId: return "DuplicateFapId";
        case ViolationCode::BoundsViolation: return "BoundsViolation";
        case ViolationCode::NonPositiveDemand: return "NonPositiveDemand";
        case ViolationCode::SnrOutOfRange: return "SnrOutOfRange";
        case ViolationCode::SeparationViolation: return "SeparationViolation";
        case ViolationCode::AggregateCapacityViolation: return "AggregateCapacityViolation";
    }
    return "Unknown";
}

Scenario generate_scenario(int n_faps, std::uint64_t seed, const Venue& venue,
                           const RadioConfig& radio) {
    if (n_faps < 1) throw std::domain_error("generate_scenario: n_faps must be >= 1");
    if (!(venue.x_m > 0.0 && venue.y_m > 0.0 && venue.z_m > 0.0))
        throw std::domain_error("generate_scenario: venue dimensions must be positive");
    validate_radio_config(radio);

    Scenario scenario;
    scenario.venue = venue;
    scenario.radio = radio;
    scenario.seed = seed;
    scenario.snapshot_id = 0;
    scenario.faps.reserve(static_cast<std::size_t>(n_faps));

    std::mt19937_64 rng(seed);
    const double d_min_sq = radio.d_min_m * radio.d_min_m;
    const std::size_t table_size = radio.mcs_table.size();

    int rejections = 0;
    for (int id = 0; id < n_faps; ++id) {
        Vec3 position;
        for (;;) {
            position.x = round_sig9((next_unit(rng) - 0.5) * venue.x_m);
            position.y = round_sig9((next_unit(rng) - 0.5) * venue.y_m);
            position.z = round_sig9((next_unit(rng) - 0.5) * venue.z_m);

            bool separated = true;
            for (const Fap& placed : scenario.faps) {
                if (squared_distance(position, placed.position) < d_min_sq) {
                    separated = false;
                    break;
                }
            }
            if (separated) {
                rejections = 0;
                break;
            }
            if (++rejections >= kMaxConsecutiveRejections)
                throw PlacementExhausted(
                    "could not place FAP " + std::to_string(id) + " after " +
                    std::to_string(kMaxConsecutiveRejections) +
                    " consecutive draws; venue too small for this FAP count at d_min");
        }

        auto mcs_idx = static_cast<std::size_t>(next_unit(rng) * static_cast<double>(table_size));
        mcs_idx = std::min(mcs_idx, table_size - 1);
        const McsEntry& entry = radio.mcs_table[mcs_idx];

        Fap fap;
        fap.id = id;
        fap.position = position;
        fap.required_snr_db = entry.min_snr_db;
        fap.demand_bps = entry.rate_bps / static_cast<std::uint64_t>(n_faps);
        scenario.faps.push_back(fap);
    }
    return scenario;
}

std::vector<Violation> validate_scenario(const Scenario& s) {
    std::vector<Violation> out;

    if (!(s.venue.x_m > 0.0 && s.venue.y_m > 0.0 && s.venue.z_m > 0.0))
        out.push_back({ViolationCode::InvalidVenue, -1, '\0', "venue dimensions must be positive"});

    try {
        validate_radio_config(s.radio);
    } catch (const std::invalid_argument& e) {
        out.push_back({ViolationCode::InvalidRadio, -1, '\0', e.what()});
    }

    if (s.faps.empty()) {
        out.push_back({ViolationCode::NoFaps, -1, '\0', "scenario must contain at least one FAP"});
        return out;
    }

    std::set<int> seen_ids;
    for (const Fap& fap : s.faps) {
        if (!seen_ids.insert(fap.id).second)
            out.push_back({ViolationCode::DuplicateFapId, fap.id, '\0',
                           "FAP id " + std::to_string(fap.id) + " appears more than once"});
    }

    const double half_x = s.venue.x_m / 2.0;
    const double half_y = s.venue.y_m / 2.0;
    const double half_z = s.venue.z_m / 2.0;
    double lowest_snr = 0.0, highest_snr = 0.0;
    const bool table_ok = !s.radio.mcs_table.empty();
    if (table_ok) {
        lowest_snr = s.radio.mcs_table.front().min_snr_db;
        highest_snr = s.radio.mcs_table.back().min_snr_db;
    }

    for (const Fap& fap : s.faps) {
        const auto flag_axis = [&](char axis, double value, double half) {
            if (std::abs(value) > half)
                out.push_back({ViolationCode::BoundsViolation, fap.id, axis,
                               "FAP " + std::to_string(fap.id) + " " + axis + "=" +
                                   std::to_string(value) + " outside [-" + std::to_string(half) +
                                   ", " + std::to_string(half) + "]"});
        };
        flag_axis('x', fap.position.x, half_x);
        flag_axis('y', fap.position.y, half_y);
        flag_axis('z', fap.position.z, half_z);

        if (fap.demand_bps == 0)
            out.push_back({ViolationCode::NonPositiveDemand, fap.id, '\0',
                           "FAP " + std::to_string(fap.id) + " has zero demand"});

        if (table_ok &&
            (fap.required_snr_db < lowest_snr || fap.required_snr_db > highest_snr))
            out.push_back({ViolationCode::SnrOutOfRange, fap.id, '\0',
                           "FAP " + std::to_string(fap.id) + " required SNR " +
                               std::to_string(fap.required_snr_db) + " outside table range [" +
                               std::to_string(lowest_snr) + ", " + std::to_string(highest_snr) +
                               "]"});
    }

    const double d_min_sq = s.radio.d_min_m * s.radio.d_min_m;
    for (std::size_t i = 0; i < s.faps.size(); ++i) {
        for (std::size_t j = i + 1; j < s.faps.size(); ++j) {
            if (squared_distance(s.faps[i].position, s.faps[j].position) < d_min_sq)
                out.push_back({ViolationCode::SeparationViolation, s.faps[i].id, '\0',
                               "FAPs " + std::to_string(s.faps[i].id) + " and " +
                                   std::to_string(s.faps[j].id) + " are closer than d_min"});
        }
    }

    std::uint64_t aggregate = 0;
    for (const Fap& fap : s.faps) aggregate += fap.demand_bps;
    if (aggregate > s.radio.c_max_bps)
        out.push_back({ViolationCode::AggregateCapacityViolation, -1, '\0',
                       "aggregate demand " + std::to_string(aggregate) +
                           " bit/s exceeds channel capacity " +
                           std::to_string(s.radio.c_max_bps) + " bit/s"});

    return out;
}

namespace {

using detail::json;

json radio_to_json(const RadioConfig& radio) {
    json j;
    j["frequency_hz"] = round_sig9(radio.frequency_hz);
    j["noise_power_dbm"] = round_sig9(radio.noise_power_dbm);
    j["p_max_dbm"] = round_sig9(radio.p_max_dbm);
    j["c_max_bps"] = radio.c_max_bps;
    j["d_min_m"] = round_sig9(radio.d_min_m);
    j["loss_offset_db"] = round_sig9(radio.loss_offset_db);
    json table = json::array();
    for (const McsEntry& entry : radio.mcs_table) {
        json e;
        e["index"] = entry.index;
        e["min_snr_db"] = round_sig9(entry.min_snr_db);
        e["rate_bps"] = entry.rate_bps;
        table.push_back(std::move(e));
    }
    j["mcs_table"] = std::move(table);
    return j;
}

RadioConfig radio_from_json(const json& j) {
    RadioConfig radio;
    const std::string ctx = "radio.";
    radio.frequency_hz = detail::require_double(j, "frequency_hz", ctx);
    radio.noise_power_dbm = detail::require_double(j, "noise_power_dbm", ctx);
    radio.p_max_dbm = detail::require_double(j, "p_max_dbm", ctx);
    radio.c_max_bps = detail::require_uint(j, "c_max_bps", ctx);
    radio.d_min_m = detail::require_double(j, "d_min_m", ctx);
    radio.loss_offset_db = detail::require_double(j, "loss_offset_db", ctx);
    const json& table = detail::require_array(j, "mcs_table", ctx);
    radio.mcs_table.clear();
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string ectx = "radio.mcs_table[" + std::to_string(i) + "].";
        const json& e = table[i];
        if (!e.is_object()) throw ParseError(ectx, "expected an object");
        McsEntry entry;
        entry.index = static_cast<int>(detail::require_int(e, "index", ectx));
        entry.min_snr_db = detail::require_double(e, "min_snr_db", ectx);
        entry.rate_bps = detail::require_uint(e, "rate_bps", ectx);
        radio.mcs_table.push_back(entry);
    }
    return radio;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    json venue;
    venue["x_m"] = round_sig9(s.venue.x_m);
    venue["y_m"] = round_sig9(s.venue.y_m);
    venue["z_m"] = round_sig9(s.venue.z_m);
    j["venue"] = std::move(venue);
    j["radio"] = radio_to_json(s.radio);
    j["seed"] = s.seed;
    j["snapshot_id"] = s.snapshot_id;
    json faps = json::array();
    for (const Fap& fap : s.faps) {
        json f;
        f["id"] = fap.id;
        f["x"] = round_sig9(fap.position.x);
        f["y"] = round_sig9(fap.position.y);
        f["z"] = round_sig9(fap.position.z);
        f["demand_bps"] = fap.demand_bps;
        f["required_snr_db"] = round_sig9(fap.required_snr_db);
        faps.push_back(std::move(f));
    }
    j["faps"] = std::move(faps);
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    const json j = detail::parse_document(text, "scenario");
    Scenario s;
    const json& venue = detail::require_object(j, "venue", "");
    s.venue.x_m = detail::require_double(venue, "x_m", "venue.");
    s.venue.y_m = detail::require_double(venue, "y_m", "venue.");
    s.venue.z_m = detail::require_double(venue, "z_m", "venue.");
    s.radio = radio_from_json(detail::require_object(j, "radio", ""));
    s.seed = detail::require_uint(j, "seed", "");
    s.snapshot_id = static_cast<int>(detail::require_int(j, "snapshot_id", ""));
    const json& faps = detail::require_array(j, "faps", "");
    for (std::size_t i = 0; i < faps.size(); ++i) {
        const std::string ctx = "faps[" + std::to_string(i) + "].";
        const json& f = faps[i];
        if (!f.is_object()) throw ParseError(ctx, "expected an object");
        Fap fap;
        fap.id = static_cast<int>(detail::require_int(f, "id", ctx));
        fap.position.x = detail::require_double(f, "x", ctx);
        fap.position.y = detail::require_double(f, "y", ctx);
        fap.position.z = detail::require_double(f, "z", ctx);
        fap.demand_bps = detail::require_uint(f, "demand_bps", ctx);
        fap.required_snr_db = detail::require_double(f, "required_snr_db", ctx);
        s.faps.push_back(fap);
    }
    return s;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    detail::write_file(path, scenario_to_json(scenario));
}

Scenario load_scenario(const std::filesystem::path& path) {
    return scenario_from_json(detail::read_file(path));
}

RadioConfig load_radio_config(const std::filesystem::path& path) {
    const json j = detail::parse_document(detail::read_file(path), "radio");
    if (!j.is_object()) throw ParseError("radio", "expected an object");
    return radio_from_json(j);
}

}  // namespace fgwp
