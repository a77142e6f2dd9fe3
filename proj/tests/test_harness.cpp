#include "ntn/config.hpp"
#include "ntn/errors.hpp"
#include "ntn/result_table.hpp"
#include "ntn/runner.hpp"
#include "ntn/stats.hpp"
#include "ntn/trials.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

using namespace ntn;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("empirical CDF") {
    const EmpiricalCdf cdf({1.0, 2.0, 3.0});
    CHECK(cdf(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(cdf(0.5) == 0.0);
    CHECK(cdf(3.0) == 1.0);
    CHECK(cdf(10.0) == 1.0);
    CHECK(cdf(1.999) == doctest::Approx(1.0 / 3.0));
    CHECK(cdf.quantile(0.5) == 2.0);
    CHECK(cdf.quantile(1.0) == 3.0);
    CHECK_THROWS_AS(EmpiricalCdf({}), DomainError);
    CHECK_THROWS_AS(EmpiricalCdf({1.0, std::nan("")}), DomainError);

    SUBCASE("order independence, monotone, reaches one") {
        std::vector<double> xs(500);
        std::mt19937_64 rng(4);
        for (auto& x : xs) x = std::uniform_real_distribution<double>(-5, 5)(rng);
        auto ys = xs;
        std::shuffle(ys.begin(), ys.end(), rng);
        const EmpiricalCdf a(xs), b(ys);
        double prev = 0.0;
        for (double q = -6.0; q <= 6.0; q += 0.01) {
            CHECK(a(q) == b(q));
            CHECK(a(q) >= prev);
            prev = a(q);
        }
        CHECK(prev == 1.0);
        for (double x : xs) CHECK(a(x) > a(std::nextafter(x, -1e9)));
    }
}

TEST_CASE("Wilson interval") {
    const auto ci = wilson_interval(50, 100);
    CHECK(ci.low == doctest::Approx(0.40383).epsilon(1e-4));
    CHECK(ci.high == doctest::Approx(0.59617).epsilon(1e-4));
    CHECK(wilson_interval(0, 100).low == 0.0);
    CHECK(wilson_interval(100, 100).high == 1.0);
    const auto none = wilson_interval(0, 0);
    CHECK(none.low == 0.0);
    CHECK(none.high == 1.0);
}

TEST_CASE("result table") {
    ResultTable t({"a", "b", "c"});
    t.add_row({std::string("x"), std::int64_t{3}, 0.25});
    t.add_metadata("seed", "7");
    CHECK(t.body() == "a,b,c\nx,3,0.25\n");
    CHECK(t.to_csv() == "# seed: 7\na,b,c\nx,3,0.25\n");
    CHECK(t.number(0, "c") == 0.25);
    CHECK(t.number(0, "b") == 3.0);
    CHECK(t.text(0, "a") == "x");
    CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
    CHECK_THROWS_AS(t.column_index("zzz"), DomainError);
    CHECK(sibling_path("out/res.csv", "summary") == std::filesystem::path("out/res_summary.csv"));
}

TEST_CASE("run_trials") {
    auto fn = [](std::size_t i, std::uint64_t seed) {
        Rng rng(seed);
        return static_cast<double>(i) + uniform01(rng);
    };
    const auto one = run_trials(1, 5, 1, fn);
    const auto one_par = run_trials(1, 5, 4, fn);
    CHECK(*one.results[0] == *one_par.results[0]);

    const auto seq = run_trials(64, 5, 1, fn);
    const auto par = run_trials(64, 5, 8, fn);
    REQUIRE(seq.results.size() == 64);
    for (std::size_t i = 0; i < 64; ++i) CHECK(*seq.results[i] == *par.results[i]);
    CHECK(run_trials(64, 6, 1, fn).results[0] != seq.results[0]);

    SUBCASE("a throwing trial is recorded and the run continues") {
        const auto b = run_trials(10, 1, 3, [](std::size_t i, std::uint64_t) -> int {
            if (i == 4) throw std::runtime_error("boom");
            return static_cast<int>(i);
        });
        CHECK(b.failed == 1);
        REQUIRE(b.errors.size() == 1);
        CHECK(b.errors[0] == "4: boom");
        CHECK_FALSE(b.results[4].has_value());
        CHECK(*b.results[9] == 9);
    }
}

TEST_CASE("derive_seed") {
    CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
    CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 3, 5));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("config defaults") {
    const auto c = resolve_config(nullptr, {}, std::string("adhoc"));
    CHECK(c.scenario == Scenario::adhoc);
    CHECK(c.trials == 2000);
    CHECK(c.seed == 1);
    const RadioTable r = radio_table(c.doc);
    CHECK(r.user.tx_power_dbm == 20.0);
    CHECK(r.uav.tx_power_dbm == 30.0);
    CHECK(r.haps.tx_power_dbm == 36.0);
    CHECK(r.satellite.tx_power_dbm == 45.0);
    CHECK(r.user.antenna_gain_dbi == 3.0);
    CHECK(r.uav.antenna_gain_dbi == 10.0);
    CHECK(r.haps.antenna_gain_dbi == 30.0);
    CHECK(r.satellite.antenna_gain_dbi == 50.0);
    CHECK(r.user.altitude_m == 0.0);
    CHECK(r.uav.altitude_m == doctest::Approx(50.0));
    CHECK(r.haps.altitude_m == doctest::Approx(20e3));
    CHECK(r.satellite.altitude_m == doctest::Approx(550e3));
    CHECK(r.rf.carrier_hz == doctest::Approx(2e9));
    CHECK(r.rf.bandwidth_hz == doctest::Approx(40e6));
    CHECK(r.mmwave.carrier_hz == doctest::Approx(28e9));
    CHECK(r.mmwave.bandwidth_hz == doctest::Approx(100e6));
    CHECK(r.noise_psd_dbm_hz == -174.0);
    CHECK(r.shadowed_rician.omega == 1.29);
    CHECK(r.shadowed_rician.b0 == 0.158);
    CHECK(r.shadowed_rician.m == 19.4);
    CHECK(r.nakagami.m == 2.0);
    CHECK(r.antenna_elements == 32);
    CHECK(r.packet_size_bits == doctest::Approx(5e6));

    const auto a = adhoc_config(c);
    CHECK(a.n_uav == 1000);
    CHECK(a.disc_radius_m == doctest::Approx(20e3));
    CHECK(a.comm_range_m == doctest::Approx(10e3));
    CHECK(a.beta_per_km == 0.08);
    CHECK(a.olos_penalty_db == 20.0);
    CHECK(a.short_hop_half_angle_deg == 30.0);

    const auto empty = temp_file("ntn_empty.json", "");
    CHECK(load_config(empty, {}, std::string("adhoc")).echo() == c.echo());

    CHECK(default_trials(Scenario::coverage) == 10000);
    CHECK(resolve_config(nullptr, {}, std::string("iab")).trials == 1);
}

TEST_CASE("config overrides and echo") {
    const auto c = resolve_config(nullptr, {"channel.exp_distance_beta_per_km=0.16", "adhoc.distances_km=[4,8]"},
                                  std::string("adhoc"));
    CHECK(c.echo().find("\"exp_distance_beta_per_km\":0.16") != std::string::npos);
    CHECK(adhoc_config(c).beta_per_km == 0.16);
    CHECK(adhoc_config(c).distances_km == std::vector<double>{4, 8});

    SUBCASE("echo round-trips") {
        const auto again = resolve_config(nlohmann::json::parse(c.echo()));
        CHECK(again.echo() == c.echo());
    }
    SUBCASE("file then override then CLI scenario") {
        const auto f = temp_file("ntn_cfg.json", R"({"scenario": "coverage", "seed": 9, "coverage": {"n_haps": [4]}})");
        const auto v = load_config(f, {"seed=11"});
        CHECK(v.scenario == Scenario::coverage);
        CHECK(v.seed == 11);
        CHECK(coverage_config(v).haps_counts == std::vector<std::size_t>{4});
        CHECK(load_config(f, {}, std::string("iab")).scenario == Scenario::iab);
    }
    SUBCASE("string literal values") {
        const auto v = resolve_config(nullptr, {"scenario=iab"});
        CHECK(v.scenario == Scenario::iab);
    }
    SUBCASE("changing one radio value reaches every scenario") {
        for (const char* s : {"adhoc", "cellfree-energy", "coverage", "iab"}) {
            const auto v = resolve_config(nullptr, {"radio.transmit_power_dbm.haps=40"}, std::string(s));
            CHECK(adhoc_config(v).radio.haps.tx_power_dbm == 40.0);
            CHECK(cellfree_config(v).radio.haps.tx_power_dbm == 40.0);
            CHECK(coverage_config(v).radio.haps.tx_power_dbm == 40.0);
            CHECK(iab_config(v).radio.haps.tx_power_dbm == 40.0);
        }
    }
}

TEST_CASE("config validation names the key") {
    const auto scenario = std::optional<std::string>("adhoc");
    CHECK(error_of([&] { resolve_config(nullptr, {"trials=-3"}, scenario); }).find("trials") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"trials=0"}, scenario); }).find("trials") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"adhoc.bogus=1"}, scenario); }).find("adhoc.bogus") !=
          std::string::npos);
    CHECK(error_of([&] { resolve_config(nlohmann::json{{"radio", {{"colour", 1}}}}, {}, scenario); })
              .find("radio.colour") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"adhoc.n_uav=\"many\""}, scenario); }).find("adhoc.n_uav") !=
          std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"adhoc.disc_radius_km=-1"}, scenario); })
              .find("adhoc.disc_radius_km") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"iab.ring_radii_km=[20,10,30]"}, std::string("iab")); })
              .find("iab.ring_radii_km") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"radio.nakagami_m=0"}, scenario); }).find("nakagami_m") !=
          std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {}); }).find("scenario") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {}, std::string("nope")); }).find("scenario") != std::string::npos);
    CHECK(error_of([&] { resolve_config(nullptr, {"novalue"}, scenario); }).find("novalue") != std::string::npos);
    CHECK_THROWS_AS(load_config(std::filesystem::path("/nonexistent/x.json"), {}, scenario), ConfigError);
    const auto bad = temp_file("ntn_bad.json", "{not json");
    CHECK_THROWS_AS(load_config(bad, {}, scenario), ConfigError);
}
