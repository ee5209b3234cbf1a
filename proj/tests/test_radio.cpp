#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fgwp/errors.hpp"
#include "fgwp/radio.hpp"

using namespace fgwp;

namespace {

// Independent evaluation of the loss chain, kept separate from the library
// implementation on purpose.
double loss_by_hand(double d, double f) {
    return 20.0 * std::log10(d) + 20.0 * std::log10(f) +
           20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLightMps);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_SUITE("radio") {

TEST_CASE("path loss vanishes at one meter and f = c/(4*pi)") {
    const double f = kSpeedOfLightMps / (4.0 * std::numbers::pi);
    CHECK(path_loss_db(1.0, f) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("path loss at 5.25 GHz") {
    const double at_1m = path_loss_db(1.0, 5.25e9);
    CHECK(at_1m == doctest::Approx(46.8509707).epsilon(1e-7));
    CHECK(at_1m == doctest::Approx(loss_by_hand(1.0, 5.25e9)).epsilon(1e-12));

    // Cross-check against the classic 40.05 dB at 2.4 GHz / 1 m plus the
    // frequency ratio term.
    const double at_24 = path_loss_db(1.0, 2.4e9);
    CHECK(at_24 == doctest::Approx(40.05).epsilon(2e-4));
    CHECK(at_1m - at_24 == doctest::Approx(20.0 * std::log10(5.25 / 2.4)).epsilon(1e-12));

    // 20 dB per decade of distance.
    CHECK(path_loss_db(10.0, 5.25e9) - at_1m == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(path_loss_db(10.0, 5.25e9) == doctest::Approx(66.8509707).epsilon(1e-7));
}

TEST_CASE("path loss rejects non-positive inputs") {
    CHECK_THROWS_AS(path_loss_db(0.0, 5.25e9), std::domain_error);
    CHECK_THROWS_AS(path_loss_db(-1.0, 5.25e9), std::domain_error);
    CHECK_THROWS_AS(path_loss_db(1.0, 0.0), std::domain_error);
}

TEST_CASE("link budget constant") {
    // -20log10(5.25e9) = -194.403186, -20log10(4pi/c) = +147.552215
    CHECK(link_budget_constant_db(5.25e9, -85.0) ==
          doctest::Approx(-194.403186 + 147.552215 + 85.0).epsilon(1e-6));
    CHECK(link_budget_constant_db(5.25e9, -85.0) == doctest::Approx(38.1490).epsilon(1e-4));

    CHECK(link_budget_constant_db(kSpeedOfLightMps / (4.0 * std::numbers::pi), 0.0) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Thermal floor over 160 MHz: -174 + 10log10(160e6) dBm.
    const double thermal_dbm = -174.0 + 10.0 * std::log10(160e6);
    CHECK(thermal_dbm == doctest::Approx(-91.9588).epsilon(1e-4));
    CHECK(link_budget_constant_db(5.25e9, thermal_dbm) ==
          doctest::Approx(45.1078).epsilon(1e-4));
}

TEST_CASE("max link distance") {
    CHECK(max_link_distance_m(0.0, 11.0, 38.15) == doctest::Approx(22.7772).epsilon(1e-4));
    CHECK(max_link_distance_m(0.0, 11.0, 38.15) ==
          doctest::Approx(std::pow(10.0, 27.15 / 20.0)).epsilon(1e-12));

    // Zero exponent: radius is exactly one meter.
    CHECK(max_link_distance_m(20.0 - 38.15, 20.0, 38.15) == doctest::Approx(1.0).epsilon(1e-12));

    // Below d_min = 1 m: the caller flags this link infeasible at this power.
    const double r = max_link_distance_m(0.0, 40.0, 38.15);
    CHECK(r == doctest::Approx(0.8082).epsilon(1e-3));
    CHECK(r < 1.0);
}

TEST_CASE("default MCS table endpoints") {
    const auto& table = default_mcs_table();
    REQUIRE(table.size() == 10);
    CHECK(table.front().index == 0);
    CHECK(table.front().min_snr_db == 11.0);
    CHECK(table.front().rate_bps == 58'500'000);
    CHECK(table.back().index == 9);
    CHECK(table.back().min_snr_db == 40.0);
    CHECK(table.back().rate_bps == 780'000'000);
}

TEST_CASE("required SNR for demand") {
    const auto& table = default_mcs_table();

    const McsEntry single = required_snr_for_demand(58'500'000, 1, table);
    CHECK(single.index == 0);
    CHECK(single.min_snr_db == 11.0);

    // 100 Mbit/s over 4 FAPs needs 400 Mbit/s: above MCS4's 351, so MCS5.
    const McsEntry shared = required_snr_for_demand(100'000'000, 4, table);
    CHECK(shared.index == 5);
    CHECK(shared.min_snr_db == 27.0);
    CHECK(shared.rate_bps == 468'000'000);

    // 200 Mbit/s over 4 FAPs needs 800 Mbit/s > 780 Mbit/s.
    CHECK_THROWS_AS(required_snr_for_demand(200'000'000, 4, table), InfeasibleDemand);

    CHECK_THROWS_AS(required_snr_for_demand(0, 4, table), std::domain_error);
    CHECK_THROWS_AS(required_snr_for_demand(1, 0, table), std::domain_error);
}

TEST_CASE("rate for SNR") {
    const auto& table = default_mcs_table();
    CHECK(rate_for_snr(40.0, table) == 780'000'000);
    CHECK(rate_for_snr(10.99, table) == 0);
    CHECK(rate_for_snr(27.5, table) == 468'000'000);
    CHECK(rate_for_snr(1000.0, table) == 780'000'000);
}

TEST_CASE("rate_for_snr is a threshold-inclusive step function") {
    const auto& table = default_mcs_table();
    std::uint64_t previous = 0;
    for (const McsEntry& entry : table) {
        CHECK(rate_for_snr(entry.min_snr_db, table) == entry.rate_bps);
        CHECK(rate_for_snr(entry.min_snr_db - 1e-9, table) == previous);
        previous = entry.rate_bps;
    }
}

TEST_CASE("radio config validation") {
    CHECK_NOTHROW(validate_radio_config(default_radio_config()));

    RadioConfig bad = default_radio_config();
    bad.c_max_bps = 1;
    CHECK_THROWS_AS(validate_radio_config(bad), std::invalid_argument);

    bad = default_radio_config();
    bad.mcs_table[3].min_snr_db = bad.mcs_table[2].min_snr_db;
    CHECK_THROWS_AS(validate_radio_config(bad), std::invalid_argument);

    bad = default_radio_config();
    bad.frequency_hz = 0.0;
    CHECK_THROWS_AS(validate_radio_config(bad), std::invalid_argument);

    bad = default_radio_config();
    bad.d_min_m = 0.0;
    CHECK_THROWS_AS(validate_radio_config(bad), std::invalid_argument);
}

TEST_CASE("properties: monotonicity and scaling laws") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 400; ++i) {
        const double d = uniform(rng, 0.1, 3000.0);
        const double f = uniform(rng, 1e8, 1e11);

        // Strictly increasing in both arguments.
        CHECK(path_loss_db(d * 1.5, f) > path_loss_db(d, f));
        CHECK(path_loss_db(d, f * 1.5) > path_loss_db(d, f));
        // Tenfold distance adds exactly 20 dB.
        CHECK(path_loss_db(10.0 * d, f) - path_loss_db(d, f) ==
              doctest::Approx(20.0).epsilon(1e-9));

        // +20 dBm scales the admissible radius by 10.
        const double snr = uniform(rng, 5.0, 45.0);
        const double k = uniform(rng, 20.0, 60.0);
        const double p = uniform(rng, -10.0, 30.0);
        CHECK(max_link_distance_m(p + 20.0, snr, k) ==
              doctest::Approx(10.0 * max_link_distance_m(p, snr, k)).epsilon(1e-12));
    }
}

TEST_CASE("properties: demand round-trip through the table") {
    const auto& table = default_mcs_table();
    std::mt19937_64 rng(77);
    for (int i = 0; i < 300; ++i) {
        const auto n = static_cast<int>(1 + (rng() % 20));
        const auto demand = static_cast<std::uint64_t>(
            uniform(rng, 1e6, 780e6 / static_cast<double>(n)));
        const McsEntry entry = required_snr_for_demand(demand, n, table);
        CHECK(rate_for_snr(entry.min_snr_db, table) >=
              demand * static_cast<std::uint64_t>(n));
        if (entry.index > 0)
            CHECK(table[static_cast<std::size_t>(entry.index - 1)].rate_bps <
                  demand * static_cast<std::uint64_t>(n));
    }
}

TEST_CASE("property: the two link-budget formulations agree") {
    std::mt19937_64 rng(4096);
    for (int i = 0; i < 1000; ++i) {
        const double d = uniform(rng, 0.1, 3000.0);
        const double f = uniform(rng, 1e8, 1e11);
        const double noise = uniform(rng, -120.0, -60.0);
        const double p = uniform(rng, -10.0, 40.0);

        const double snr_chain = p - path_loss_db(d, f) - noise;
        const double snr_constant =
            link_budget_constant_db(f, noise) + p - 20.0 * std::log10(d);
        CHECK(std::abs(snr_chain - snr_constant) <= 1e-9);
    }
}

}  // TEST_SUITE
