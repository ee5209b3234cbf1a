#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fgwp/scenario.hpp"

using namespace fgwp;

namespace {

bool has_violation(const std::vector<Violation>& violations, ViolationCode code) {
    return std::any_of(violations.begin(), violations.end(),
                       [code](const Violation& v) { return v.code == code; });
}

bool scenarios_equal(const Scenario& a, const Scenario& b) {
    if (a.venue.x_m != b.venue.x_m || a.venue.y_m != b.venue.y_m || a.venue.z_m != b.venue.z_m)
        return false;
    if (a.radio.frequency_hz != b.radio.frequency_hz ||
        a.radio.noise_power_dbm != b.radio.noise_power_dbm ||
        a.radio.p_max_dbm != b.radio.p_max_dbm || a.radio.c_max_bps != b.radio.c_max_bps ||
        a.radio.d_min_m != b.radio.d_min_m || a.radio.loss_offset_db != b.radio.loss_offset_db)
        return false;
    if (a.radio.mcs_table.size() != b.radio.mcs_table.size()) return false;
    for (std::size_t i = 0; i < a.radio.mcs_table.size(); ++i) {
        if (a.radio.mcs_table[i].index != b.radio.mcs_table[i].index ||
            a.radio.mcs_table[i].min_snr_db != b.radio.mcs_table[i].min_snr_db ||
            a.radio.mcs_table[i].rate_bps != b.radio.mcs_table[i].rate_bps)
            return false;
    }
    if (a.seed != b.seed || a.snapshot_id != b.snapshot_id) return false;
    if (a.faps.size() != b.faps.size()) return false;
    for (std::size_t i = 0; i < a.faps.size(); ++i) {
        if (a.faps[i].id != b.faps[i].id || a.faps[i].position.x != b.faps[i].position.x ||
            a.faps[i].position.y != b.faps[i].position.y ||
            a.faps[i].position.z != b.faps[i].position.z ||
            a.faps[i].demand_bps != b.faps[i].demand_bps ||
            a.faps[i].required_snr_db != b.faps[i].required_snr_db)
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("generation is byte-deterministic") {
    const Venue venue;
    const RadioConfig radio = default_radio_config();
    const Scenario a = generate_scenario(2, 42, venue, radio);
    const Scenario b = generate_scenario(2, 42, venue, radio);
    CHECK(scenario_to_json(a) == scenario_to_json(b));
    CHECK(scenarios_equal(a, b));

    const Scenario c = generate_scenario(2, 43, venue, radio);
    CHECK(scenario_to_json(a) != scenario_to_json(c));
}

TEST_CASE("generated scenarios satisfy their invariants") {
    const Venue venue;
    const RadioConfig radio = default_radio_config();
    const Scenario s = generate_scenario(20, 7, venue, radio);
    REQUIRE(s.faps.size() == 20);

    for (const Fap& fap : s.faps) {
        CHECK(std::abs(fap.position.x) <= 7.5);
        CHECK(std::abs(fap.position.y) <= 7.5);
        CHECK(std::abs(fap.position.z) <= 10.0);
        CHECK(fap.demand_bps > 0);
        CHECK(fap.required_snr_db >= 11.0);
        CHECK(fap.required_snr_db <= 40.0);
    }
    for (std::size_t i = 0; i < s.faps.size(); ++i)
        for (std::size_t j = i + 1; j < s.faps.size(); ++j)
            CHECK(distance(s.faps[i].position, s.faps[j].position) >= radio.d_min_m);

    CHECK(validate_scenario(s).empty());
}

TEST_CASE("fair-share demands never exceed the channel") {
    const Venue venue;
    const RadioConfig radio = default_radio_config();
    for (int n : {1, 2, 4, 6, 8, 10, 15, 20}) {
        for (std::uint64_t seed : {0u, 1u, 2u}) {
            const Scenario s = generate_scenario(n, seed, venue, radio);
            std::uint64_t total = 0;
            for (const Fap& fap : s.faps) total += fap.demand_bps;
            CHECK(total <= radio.c_max_bps);
        }
    }
}

TEST_CASE("packing exhaustion in a tiny venue") {
    const Venue tiny{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(generate_scenario(5000, 1, tiny, default_radio_config()),
                    PlacementExhausted);
}

TEST_CASE("validate flags out-of-bounds FAPs") {
    Scenario s = generate_scenario(2, 1, Venue{}, default_radio_config());
    s.faps[0].position.x = 8.0;  // venue is 15 m wide
    const auto violations = validate_scenario(s);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == ViolationCode::BoundsViolation);
    CHECK(violations[0].fap_id == s.faps[0].id);
    CHECK(violations[0].axis == 'x');
}

TEST_CASE("validate flags aggregate capacity overflow") {
    Scenario s = generate_scenario(2, 1, Venue{}, default_radio_config());
    s.faps[0].demand_bps = 400'000'000;
    s.faps[1].demand_bps = 400'000'000;
    CHECK(has_violation(validate_scenario(s), ViolationCode::AggregateCapacityViolation));
}

TEST_CASE("validate covers every invariant with a distinct code") {
    Scenario s = generate_scenario(3, 9, Venue{}, default_radio_config());

    Scenario no_faps = s;
    no_faps.faps.clear();
    CHECK(has_violation(validate_scenario(no_faps), ViolationCode::NoFaps));

    Scenario dup = s;
    dup.faps[1].id = dup.faps[0].id;
    CHECK(has_violation(validate_scenario(dup), ViolationCode::DuplicateFapId));

    Scenario zero_demand = s;
    zero_demand.faps[0].demand_bps = 0;
    CHECK(has_violation(validate_scenario(zero_demand), ViolationCode::NonPositiveDemand));

    Scenario bad_snr = s;
    bad_snr.faps[0].required_snr_db = 50.0;
    CHECK(has_violation(validate_scenario(bad_snr), ViolationCode::SnrOutOfRange));

    Scenario close = s;
    close.faps[1].position = close.faps[0].position + Vec3{0.5, 0.0, 0.0};
    CHECK(has_violation(validate_scenario(close), ViolationCode::SeparationViolation));

    Scenario bad_venue = s;
    bad_venue.venue.x_m = -1.0;
    CHECK(has_violation(validate_scenario(bad_venue), ViolationCode::InvalidVenue));

    Scenario bad_radio = s;
    bad_radio.radio.c_max_bps = 7;
    CHECK(has_violation(validate_scenario(bad_radio), ViolationCode::InvalidRadio));
}

TEST_CASE("save/load round trip is field-identical") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Scenario s =
            generate_scenario(static_cast<int>(1 + seed % 12), seed, Venue{},
                              default_radio_config());
        const Scenario back = scenario_from_json(scenario_to_json(s));
        CHECK(scenarios_equal(s, back));
        // Re-serialization is byte-stable.
        CHECK(scenario_to_json(back) == scenario_to_json(s));
    }
}

TEST_CASE("parse errors carry the offending field") {
    const Scenario s = generate_scenario(2, 5, Venue{}, default_radio_config());
    std::string text = scenario_to_json(s);

    SUBCASE("negative demand") {
        const std::string needle = "\"demand_bps\": " + std::to_string(s.faps[0].demand_bps);
        const auto at = text.find(needle);
        REQUIRE(at != std::string::npos);
        text.replace(at, needle.size(), "\"demand_bps\": -5");
        CHECK_THROWS_WITH_AS(scenario_from_json(text) /**/,
                             doctest::Contains("demand_bps"), ParseError);
    }

    SUBCASE("missing radio section") {
        const auto at = text.find("\"radio\"");
        REQUIRE(at != std::string::npos);
        text.replace(at, 7, "\"radioX\"");
        CHECK_THROWS_WITH_AS(scenario_from_json(text) /**/, doctest::Contains("radio"),
                             ParseError);
    }

    SUBCASE("malformed document reports a location") {
        CHECK_THROWS_WITH_AS(scenario_from_json("{ \"venue\": ") /**/,
                             doctest::Contains("line"), ParseError);
    }
}

TEST_CASE("round_sig9 is idempotent and serialization-stable") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 1000; ++i) {
        const double v =
            (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 1e4;
        const double r = round_sig9(v);
        CHECK(round_sig9(r) == r);
        CHECK(std::abs(r - v) <= 1e-8 * std::max(1.0, std::abs(v)));
    }
}

}  // TEST_SUITE
