#include "ntn/cellfree.hpp"
#include "ntn/errors.hpp"
#include "ntn/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace ntn;

TEST_CASE("associate") {
    const std::vector<UavLink> one{{0, 500.0, LosState::nlos, -90.0}};
    CHECK(associate(one, Association::cellular) == 0);
    CHECK(associate(one, Association::cell_free) == 0);

    const std::vector<UavLink> split{{0, 300.0, LosState::nlos, -95.0}, {1, 900.0, LosState::los, -85.0}};
    CHECK(associate(split, Association::cellular) == 0);
    CHECK(associate(split, Association::cell_free) == 1);

    const std::vector<UavLink> all_los{{0, 900.0, LosState::los, -85.0}, {1, 300.0, LosState::los, -75.5},
                                       {2, 600.0, LosState::los, -81.5}};
    CHECK(associate(all_los, Association::cellular) == associate(all_los, Association::cell_free));

    CHECK_THROWS_AS(associate({}, Association::cellular), ConfigError);

    SUBCASE("cell-free received power dominates cellular") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<UavLink> links(20);
            for (std::size_t j = 0; j < links.size(); ++j) {
                const double d = 100.0 + 5e3 * u(rng);
                const bool los = u(rng) < 0.3;
                links[j] = {j, d, los ? LosState::los : LosState::nlos,
                            -20.0 * std::log10(d) - (los ? 0.0 : 20.0)};
            }
            CHECK(links[associate(links, Association::cell_free)].mean_rx_dbm >=
                  links[associate(links, Association::cellular)].mean_rx_dbm);
        }
    }
}

TEST_CASE("energy efficiency") {
    CHECK(energy_efficiency(100e6, 30.0) == doctest::Approx(100.0));
    CHECK(energy_efficiency(250e6, 30.0) == doctest::Approx(250.0));
    CHECK(energy_efficiency(100e6, 30.0 + 10.0 * std::log10(2.0)) == doctest::Approx(50.0));
}

TEST_CASE("ee_total") {
    CHECK(ee_total(80.0, 80.0) == doctest::Approx(40.0));
    CHECK(ee_total(200.0, 300.0) == doctest::Approx(120.0));
    CHECK(ee_total(50.0, 1e12) == doctest::Approx(50.0));
    CHECK(ee_total(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(ee_total(-1.0, 2.0), DomainError);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(ee_total(a, b) <= std::min(a, b));
    }
}

TEST_CASE("simulate_ee_cdf") {
    CellfreeConfig c;
    c.trials = 3;
    c.capacity_draws = 2000;
    c.disc_radius_m = 25e3;
    c.n_uav = 40;
    const auto result = simulate_ee_cdf(c, 1);
    REQUIRE(result.curves.size() == 6);
    for (const auto& curve : result.curves) {
        REQUIRE_FALSE(curve.records.empty());
        for (const auto& r : curve.records) {
            CHECK(r.ee_total <= std::min(r.ee_access, r.ee_backhaul) + 1e-12);
            CHECK(r.ee_total == doctest::Approx(ee_total(r.ee_access, r.ee_backhaul)));
        }
    }
    // Same users in every curve.
    CHECK(result.curve(Association::cellular, 4).records.size() ==
          result.curve(Association::cell_free, 16).records.size());

    SUBCASE("CDF table is non-decreasing and reaches one") {
        const auto t = result.cdf_table(c);
        CHECK(t.columns() == std::vector<std::string>{"mode", "n_haps", "ee_mbj", "cdf_value"});
        double prev = 0.0;
        std::string key;
        for (std::size_t i = 0; i < t.rows().size(); ++i) {
            const std::string k = t.text(i, "mode") + std::to_string(t.number(i, "n_haps"));
            if (k != key) {
                if (!key.empty()) CHECK(prev == 1.0);
                key = k;
                prev = 0.0;
            }
            CHECK(t.number(i, "cdf_value") >= prev);
            prev = t.number(i, "cdf_value");
        }
        CHECK(prev == 1.0);
    }

    SUBCASE("more HAPS never lowers the backhaul efficiency of a user") {
        for (auto mode : {Association::cellular, Association::cell_free}) {
            const auto& few = result.curve(mode, 4).records;
            const auto& many = result.curve(mode, 16).records;
            for (std::size_t i = 0; i < few.size(); ++i) {
                CHECK(many[i].ee_backhaul >= few[i].ee_backhaul);
                CHECK(many[i].ee_access == few[i].ee_access);
            }
        }
    }

    SUBCASE("summary statistics") {
        const auto s = result.summary_table();
        CHECK(s.columns() == std::vector<std::string>{"mode", "n_haps", "statistic", "value"});
        const auto totals = result.curve(Association::cell_free, 8).totals();
        bool found = false;
        for (std::size_t i = 0; i < s.rows().size(); ++i)
            if (s.text(i, "mode") == "cell-free" && s.number(i, "n_haps") == 8 && s.text(i, "statistic") == "mean") {
                CHECK(s.number(i, "value") == doctest::Approx(mean(totals)));
                found = true;
            }
        CHECK(found);
    }

    SUBCASE("deterministic across thread counts") {
        CHECK(simulate_ee_cdf(c, 3).cdf_table(c).body() == result.cdf_table(c).body());
    }

    SUBCASE("validation") {
        auto bad = c;
        bad.active_fraction = 0.0;
        CHECK_THROWS_AS(simulate_ee_cdf(bad), ConfigError);
        bad = c;
        bad.sub_bands = 0;
        CHECK_THROWS_AS(simulate_ee_cdf(bad), ConfigError);
    }
}
