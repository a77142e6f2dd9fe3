#include "ntn/coverage.hpp"
#include "ntn/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace ntn;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CoverageConfig small_config() {
    CoverageConfig c;
    c.trials = 600;
    c.thresholds_db = {-1000.0, -20.0, -12.0, -10.0, -8.0, -4.0, 0.0, 4.0, 20.0};
    return c;
}

} // namespace

TEST_CASE("satellite-user link budget") {
    const RadioTable radio;
    const Point3 user{};
    const Point3 zenith{0, 0, 550e3};
    // 20 dBm + 3 dBi + 50 dBi - FSPL(550 km, 28 GHz) + 94 dBm of noise over 100 MHz.
    const double expected = 20.0 + 3.0 + 50.0 - fspl_db(550e3, 28e9) + 94.0;
    CHECK(expected == doctest::Approx(-9.198198).epsilon(1e-6));
    CHECK(link_sinr_satellite_user(user, zenith, 1.0, {}, radio, 10.0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(link_sinr_satellite_user(user, zenith, 2.0, {}, radio, 10.0) ==
          doctest::Approx(expected + 10.0 * std::log10(2.0)));

    SUBCASE("equal co-band interferer at high SNR gives 0 dB") {
        RadioTable loud = radio;
        loud.user.tx_power_dbm = 120.0;
        const std::vector<Emitter> one{{user, 1.0}};
        CHECK(std::abs(link_sinr_satellite_user(user, zenith, 1.0, one, loud, 10.0)) < 1e-3);
    }

    SUBCASE("off-boresight interferers are attenuated by the cosine pattern") {
        const std::vector<Emitter> near{{{1e3, 0, 0}, 1.0}};
        const std::vector<Emitter> far{{{50e3, 0, 0}, 1.0}};
        CHECK(link_sinr_satellite_user(user, zenith, 1.0, far, radio, 10.0) >
              link_sinr_satellite_user(user, zenith, 1.0, near, radio, 10.0));
    }

    SUBCASE("below the elevation mask") {
        const Point3 low{2000e3, 0, 100e3};
        CHECK(elevation_angle_spherical(user, low) < 10.0);
        CHECK_THROWS_AS(link_sinr_satellite_user(user, low, 1.0, {}, radio, 10.0), OutageNoVisibility);
    }

    SUBCASE("feeder link") {
        const Point3 haps{0, 0, 20e3};
        CHECK(feeder_snr_db(haps, zenith, radio) == doctest::Approx(36.0 + 30.0 + 50.0 - fspl_db(530e3, 28e9) + 94.0));
    }
}

TEST_CASE("nearest visible satellite") {
    const std::vector<Point3> sats{{0, 0, 900e3}, {2000e3, 0, 100e3}, {100e3, 0, 550e3}};
    CHECK(nearest_visible_satellite({}, sats, 10.0) == 2);
    CHECK_FALSE(nearest_visible_satellite({}, std::span(sats).subspan(1, 1), 10.0).has_value());
    CHECK_FALSE(nearest_visible_satellite({}, {}, 10.0).has_value());
}

TEST_CASE("relayed coverage rule") {
    CHECK(relayed_coverage(1.0, 1.0, 0.0));
    CHECK_FALSE(relayed_coverage(-1.0, 5.0, 0.0));
    CHECK_FALSE(relayed_coverage(5.0, -1.0, 0.0));
    CHECK(relayed_coverage(-50.0, -50.0, -kInf));
    CHECK_FALSE(relayed_coverage(0.0, 3.0, 0.0));
}

TEST_CASE("sweep_coverage") {
    const auto c = small_config();
    const auto sweep = sweep_coverage(c, 1);
    REQUIRE(sweep.points.size() == (2 + 2 * 2) * c.thresholds_db.size());
    CHECK(sweep.table().columns() == std::vector<std::string>{"mode", "n_haps", "n_sats", "threshold_db", "coverage",
                                                              "ci_low", "ci_high", "trials"});

    SUBCASE("curves are non-increasing and intervals bracket the estimate") {
        for (const auto& key : {std::pair{CoverageMode::direct, std::size_t{0}}, std::pair{CoverageMode::relayed, std::size_t{8}},
                                std::pair{CoverageMode::relayed, std::size_t{16}}})
            for (std::size_t s : c.satellite_counts) {
                const auto curve = sweep.curve(key.first, key.second, s);
                REQUIRE(curve.size() == c.thresholds_db.size());
                for (std::size_t i = 0; i < curve.size(); ++i) {
                    CHECK(curve[i].coverage >= 0.0);
                    CHECK(curve[i].coverage <= 1.0);
                    CHECK(curve[i].ci_low <= curve[i].coverage);
                    CHECK(curve[i].ci_high >= curve[i].coverage);
                    CHECK(curve[i].trials == c.trials);
                    if (i > 0) CHECK(curve[i].coverage <= curve[i - 1].coverage);
                }
            }
    }

    SUBCASE("vacuous threshold gives the visibility probability") {
        // With 100 satellites, P(at least one above 10 deg) is close to 1 - (1 - cap)^100.
        const double mask = 10.0 * std::numbers::pi / 180.0;
        const double psi = std::acos(kEarthRadiusM / (kEarthRadiusM + 550e3) * std::cos(mask)) - mask;
        const double cap = (1.0 - std::cos(psi)) / 2.0;
        const double p_visible = 1.0 - std::pow(1.0 - cap, 100);
        CHECK(sweep.at(CoverageMode::direct, 0, 100, -1000.0) == doctest::Approx(p_visible).epsilon(0.05));
        CHECK(sweep.at(CoverageMode::direct, 0, 200, -1000.0) >= sweep.at(CoverageMode::direct, 0, 100, -1000.0));
    }

    SUBCASE("direct coverage vanishes above -10 dB while relaying survives") {
        for (double t : {-8.0, -4.0, 0.0, 4.0}) CHECK(sweep.at(CoverageMode::direct, 0, 100, t) <= 0.05);
        CHECK(sweep.at(CoverageMode::relayed, 8, 100, -10.0) >= 0.2);
    }

    SUBCASE("relayed coverage does not drop with more HAPS") {
        for (double t : {-12.0, -10.0, -8.0, 0.0})
            CHECK(sweep.at(CoverageMode::relayed, 16, 100, t) + 0.03 >= sweep.at(CoverageMode::relayed, 8, 100, t));
    }

    SUBCASE("relayed coverage is bounded by the feeder-only and access-only coverage") {
        auto direct_only = c;
        direct_only.modes = {CoverageMode::relayed};
        direct_only.satellite_counts = {5000};
        const auto many = sweep_coverage(direct_only, 1);
        for (double t : c.thresholds_db)
            CHECK(sweep.at(CoverageMode::relayed, 8, 100, t) <= many.at(CoverageMode::relayed, 8, 5000, t) + 0.05);
    }

    SUBCASE("deterministic across thread counts") { CHECK(sweep_coverage(c, 4).table().body() == sweep.table().body()); }

    SUBCASE("zero HAPS gives no relayed coverage") {
        auto z = c;
        z.modes = {CoverageMode::relayed};
        z.haps_counts = {0};
        z.trials = 50;
        const auto s = sweep_coverage(z, 1);
        for (const auto& p : s.points) CHECK(p.coverage == 0.0);
    }

    SUBCASE("validation") {
        auto bad = c;
        bad.thresholds_db = {0.0, kInf};
        CHECK_THROWS_AS(sweep_coverage(bad), ConfigError);
        bad = c;
        bad.satellite_counts = {};
        CHECK_THROWS_AS(sweep_coverage(bad), ConfigError);
    }
}
