#include "ntn/adhoc.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace ntn;

namespace {

AdhocConfig small_config() {
    AdhocConfig c;
    c.capacity_draws = 2000;
    c.trials = 60;
    c.distances_km = {5, 15, 30};
    return c;
}

std::vector<Point3> uavs_for_trial(const AdhocConfig& c, std::uint64_t seed) {
    return sample_bpp_disc(c.n_uav, c.disc_radius_m, c.radio.uav.altitude_m, seed).positions();
}

} // namespace

TEST_CASE("next_hop_long") {
    const Point3 cur{0, 0, 50};
    CHECK(next_hop_long(cur, {8e3, 0, 50}, {}, {}, 10e3) == kReceiver);

    const Point3 rx{20e3, 0, 50};
    const std::vector<Point3> cands{{13e3, 2e3, 50}, {15e3, 0, 50}}; // 7.3 km and 5 km from rx, too far from cur
    CHECK_THROWS_AS(next_hop_long(cur, rx, cands, {}, 10e3), RouteStuck);
    const std::vector<Point3> near{{5e3, 0, 50}, {6e3, 0, 50}, {9e3, 5e3, 50}};
    CHECK(next_hop_long(cur, rx, near, {}, 10e3) == 1);
    const std::vector<char> visited{0, 1, 0};
    CHECK(next_hop_long(cur, rx, near, visited, 10e3) == 0);
    CHECK_THROWS_AS(next_hop_long(cur, rx, {}, {}, 10e3), RouteStuck);
}

TEST_CASE("next_hop_short") {
    const Point3 cur{0, 0, 50};
    const Point3 rx{20e3, 0, 50};
    const std::vector<Point3> single{{2e3, 300, 50}};
    CHECK(next_hop_short(cur, rx, single, {}, 30.0) == 0);

    const std::vector<Point3> two{{1e3, 0, 50}, {0, 500, 50}}; // second is 90 degrees off axis
    CHECK(next_hop_short(cur, rx, two, {}, 30.0) == 0);

    const std::vector<Point3> behind{{-1e3, 0, 50}, {0, -2e3, 50}};
    CHECK_THROWS_AS(next_hop_short(cur, rx, behind, {}, 30.0, 10e3), RouteStuck);
    CHECK_THROWS_AS(next_hop_short(cur, rx, {}, {}, 30.0, 10e3), RouteStuck);

    const Point3 close_rx{800, 0, 50};
    CHECK(next_hop_short(cur, close_rx, two, {}, 30.0, 10e3) == kReceiver);
    CHECK(next_hop_short(cur, {1500, 0, 50}, two, {}, 30.0, 10e3) == 0);
}

TEST_CASE("route examples") {
    auto c = small_config();
    const Point3 tx{-2.5e3, 0, 50}, rx{2.5e3, 0, 50};

    SUBCASE("5 km with LoS forced is a single hop") {
        c.beta_per_km = 0.0;
        const AdhocLinks links(c);
        Rng rng(1);
        const auto r = route(c, links, HopStrategy::long_hop, false, tx, rx, {}, rng);
        REQUIRE(r.hops.size() == 1);
        CHECK(r.hops[0].los_state == LosState::los);
        CHECK(r.propagation_latency_s == doctest::Approx(5e3 / kSpeedOfLight));
        CHECK(r.propagation_latency_s == doctest::Approx(16.678e-6).epsilon(1e-4));
        CHECK(r.transmission_latency_s == doctest::Approx(5e6 / links.uav_uav(5e3, LosState::los)));
        CHECK(r.total_latency_s == r.propagation_latency_s + r.transmission_latency_s);
    }

    SUBCASE("all hops obstructed with HAPS goes tx->HAPS->rx") {
        c.beta_per_km = 1e9;
        const AdhocLinks links(c);
        const auto uavs = uavs_for_trial(c, 3);
        for (auto strategy : {HopStrategy::long_hop, HopStrategy::short_hop}) {
            Rng rng(2);
            const auto r = route(c, links, strategy, true, {-15e3, 0, 50}, {15e3, 0, 50}, uavs, rng);
            REQUIRE(r.hops.size() == 2);
            CHECK(r.used_haps);
            CHECK(r.hops[0].to == links.haps_position());
            CHECK(r.hops[1].to == Point3{15e3, 0, 50});
            for (const auto& h : r.hops) CHECK(h.distance_m >= 20e3 - 50);
        }
    }

    SUBCASE("obstructed hops without HAPS pay the excess loss") {
        c.beta_per_km = 1e9;
        const AdhocLinks links(c);
        Rng rng(2);
        const auto r = route(c, links, HopStrategy::long_hop, false, tx, rx, {}, rng);
        REQUIRE(r.hops.size() == 1);
        CHECK(r.hops[0].los_state == LosState::olos);
        CHECK(r.hops[0].capacity_bps == doctest::Approx(links.uav_uav(5e3, LosState::olos)));
        CHECK(links.uav_uav(5e3, LosState::olos) < links.uav_uav(5e3, LosState::los));
    }

    SUBCASE("tx equal to rx") {
        const AdhocLinks links(c);
        Rng rng(1);
        const auto r = route(c, links, HopStrategy::short_hop, true, tx, tx, {}, rng);
        CHECK(r.hops.empty());
        CHECK(r.total_latency_s == 0.0);
    }

    SUBCASE("hop cap") {
        c.max_hops = 1;
        c.beta_per_km = 0.0;
        const AdhocLinks links(c);
        const auto uavs = uavs_for_trial(c, 4);
        Rng rng(1);
        CHECK_THROWS_AS(route(c, links, HopStrategy::short_hop, false, {-15e3, 0, 50}, {15e3, 0, 50}, uavs, rng),
                        RouteLoop);
    }
}

TEST_CASE("route properties") {
    auto c = small_config();
    const AdhocLinks links(c);
    std::size_t short_more = 0, n = 0;
    double sum_on = 0.0, sum_off = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const auto uavs = uavs_for_trial(c, 1000 + t);
        const Point3 tx{-12e3, 0, 50}, rx{12e3, 0, 50};
        Rng a(t), b(t);
        const auto lo = route(c, links, HopStrategy::long_hop, false, tx, rx, uavs, a);
        const auto sh = route(c, links, HopStrategy::short_hop, false, tx, rx, uavs, b);
        ++n;
        if (sh.hops.size() >= lo.hops.size()) ++short_more;
        for (const auto& r : {lo, sh}) {
            CHECK(r.total_latency_s == r.propagation_latency_s + r.transmission_latency_s);
            double prop = 0.0, tx_lat = 0.0;
            for (const auto& h : r.hops) {
                prop += h.distance_m / kSpeedOfLight;
                tx_lat += c.radio.packet_size_bits / h.capacity_bps;
            }
            CHECK(r.propagation_latency_s == doctest::Approx(prop));
            CHECK(r.transmission_latency_s == doctest::Approx(tx_lat));
        }
        Rng on(t + 7), off(t + 7);
        sum_on += route(c, links, HopStrategy::long_hop, true, tx, rx, uavs, on).total_latency_s;
        sum_off += route(c, links, HopStrategy::long_hop, false, tx, rx, uavs, off).total_latency_s;
    }
    CHECK(static_cast<double>(short_more) / static_cast<double>(n) >= 0.95);
    CHECK(sum_on <= sum_off);
}

TEST_CASE("sweep_latency") {
    const auto c = small_config();
    const auto sweep = sweep_latency(c, 1);
    REQUIRE(sweep.points.size() == 3 * 5);
    const auto t = sweep.table();
    CHECK(t.columns() == std::vector<std::string>{"strategy", "haps_available", "distance_km", "mean_total_s",
                                                  "mean_prop_s", "mean_tx_s", "stuck_rate", "trials"});
    for (const auto& p : sweep.points) {
        CHECK(p.mean_total_s == doctest::Approx(p.mean_prop_s + p.mean_tx_s).epsilon(1e-12));
        CHECK(p.mean_tx_s > p.mean_prop_s);
        CHECK(p.stuck_rate >= 0.0);
    }
    // same seed -> same table, independent of threads
    CHECK(sweep_latency(c, 3).table().body() == t.body());
    auto other = c;
    other.seed = 2;
    CHECK(sweep_latency(other, 1).table().body() != t.body());

    auto bad = c;
    bad.distances_km = {50};
    CHECK_THROWS_AS(sweep_latency(bad), ConfigError);
}
