#include "ntn/adhoc.hpp"

#include "ntn/trials.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace ntn {

namespace {

bool is_visited(std::span<const char> visited, std::size_t i) { return !visited.empty() && visited[i]; }

void check_visited(std::span<const Point3> candidates, std::span<const char> visited) {
    if (!visited.empty() && visited.size() != candidates.size())
        throw DomainError("visited mask does not match the candidate list");
}

constexpr std::array kCurves{
    std::pair{HopStrategy::long_hop, false},  std::pair{HopStrategy::long_hop, true},
    std::pair{HopStrategy::short_hop, false}, std::pair{HopStrategy::short_hop, true},
    std::pair{HopStrategy::haps_relay, true},
};

} // namespace

void AdhocConfig::validate() const {
    if (!(disc_radius_m > 0.0)) throw ConfigError("adhoc.disc_radius_km must be positive");
    if (!(comm_range_m > 0.0)) throw ConfigError("adhoc.comm_range_km must be positive");
    if (comm_range_m > 2.0 * disc_radius_m) throw ConfigError("adhoc.comm_range_km exceeds the disc diameter");
    if (!(radio.packet_size_bits > 0.0)) throw ConfigError("radio.packet_size_mbit must be positive");
    if (!(beta_per_km >= 0.0)) throw ConfigError("channel.exp_distance_beta_per_km must be non-negative");
    if (!(olos_penalty_db >= 0.0)) throw ConfigError("channel.olos_excess_loss_db must be non-negative");
    if (!(short_hop_half_angle_deg > 0.0 && short_hop_half_angle_deg <= 180.0))
        throw ConfigError("adhoc.short_hop_half_angle_deg must lie in (0, 180]");
    if (max_hops < 1) throw ConfigError("adhoc.max_hops must be >= 1");
    if (capacity_draws < 1) throw ConfigError("channel.capacity_draws must be >= 1");
    for (double d : distances_km)
        if (!(d >= 0.0 && d * 1e3 <= 2.0 * disc_radius_m))
            throw ConfigError(fmt::format("adhoc.distances_km: {} km is outside [0, disc diameter]", d));
}

std::string to_string(HopStrategy s) {
    switch (s) {
    case HopStrategy::long_hop: return "long-hop";
    case HopStrategy::short_hop: return "short-hop";
    case HopStrategy::haps_relay: return "haps-relay";
    }
    return "?";
}

std::size_t next_hop_long(const Point3& current, const Point3& receiver, std::span<const Point3> candidates,
                          std::span<const char> visited, double comm_range_m) {
    check_visited(candidates, visited);
    if (distance(current, receiver) <= comm_range_m) return kReceiver;
    std::size_t best = kReceiver;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (is_visited(visited, i) || distance(current, candidates[i]) > comm_range_m) continue;
        const double d = distance(candidates[i], receiver);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best == kReceiver) throw RouteStuck("no candidate within communication range");
    return best;
}

std::size_t next_hop_short(const Point3& current, const Point3& receiver, std::span<const Point3> candidates,
                           std::span<const char> visited, double half_angle_deg, double comm_range_m) {
    check_visited(candidates, visited);
    const Point3 dir = receiver - current;
    const double dir_norm = norm(dir);
    const double to_receiver = dir_norm;
    if (dir_norm == 0.0) return kReceiver;
    const double cos_half = std::cos(half_angle_deg * std::numbers::pi / 180.0);

    std::size_t best = kReceiver;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (is_visited(visited, i)) continue;
        const Point3 v = candidates[i] - current;
        const double d = norm(v);
        if (d == 0.0 || d > comm_range_m || d >= best_d) continue;
        if (dot(v, dir) < cos_half * d * dir_norm) continue;
        best_d = d;
        best = i;
    }
    if (to_receiver <= comm_range_m && to_receiver <= best_d) return kReceiver;
    if (best == kReceiver) throw RouteStuck("no candidate inside the forwarding cone");
    return best;
}

AdhocLinks::AdhocLinks(const AdhocConfig& config)
    : config_(&config),
      nakagami_(config.radio.nakagami, config.capacity_draws, derive_seed(config.seed, streams::capacity_table, 0)),
      shadowed_rician_(config.radio.shadowed_rician, config.capacity_draws,
                       derive_seed(config.seed, streams::capacity_table, 1)),
      haps_{0.0, 0.0, config.radio.haps.altitude_m},
      noise_dbm_(noise_power_dbm(config.radio.noise_psd_dbm_hz, config.radio.rf.bandwidth_hz)) {}

double AdhocLinks::uav_uav(double distance_m, LosState state) const {
    const auto& r = config_->radio;
    const double penalty = state == LosState::los ? 0.0 : config_->olos_penalty_db;
    const double snr = r.uav.tx_power_dbm + 2.0 * config_->uav_uav_antenna_gain_dbi -
                       fspl_db(distance_m, r.rf.carrier_hz) - penalty - noise_dbm_;
    return nakagami_.capacity(r.rf.bandwidth_hz, snr);
}

double AdhocLinks::uav_to_haps(double distance_m) const {
    const auto& r = config_->radio;
    const double snr = r.uav.tx_power_dbm + r.uav.antenna_gain_dbi + r.haps.antenna_gain_dbi -
                       fspl_db(distance_m, r.rf.carrier_hz) - noise_dbm_;
    return shadowed_rician_.capacity(r.rf.bandwidth_hz, snr);
}

double AdhocLinks::haps_to_uav(double distance_m) const {
    const auto& r = config_->radio;
    const double snr = r.haps.tx_power_dbm + r.haps.antenna_gain_dbi + r.uav.antenna_gain_dbi -
                       fspl_db(distance_m, r.rf.carrier_hz) - noise_dbm_;
    return shadowed_rician_.capacity(r.rf.bandwidth_hz, snr);
}

RouteResult route(const AdhocConfig& config, const AdhocLinks& links, HopStrategy strategy, bool haps_available,
                  const Point3& tx, const Point3& rx, std::span<const Point3> uavs, Rng& rng) {
    RouteResult result;
    const double packet = config.radio.packet_size_bits;
    auto add_hop = [&](const Point3& from, const Point3& to, LosState state, double capacity, bool via_haps) {
        const double d = distance(from, to);
        result.hops.push_back({from, to, d, state, capacity, via_haps});
        result.propagation_latency_s += d / kSpeedOfLight;
        result.transmission_latency_s += packet / capacity;
    };
    auto finish = [&] {
        result.total_latency_s = result.propagation_latency_s + result.transmission_latency_s;
        return result;
    };
    auto relay_via_haps = [&](const Point3& from) {
        const Point3& h = links.haps_position();
        add_hop(from, h, LosState::los, links.uav_to_haps(distance(from, h)), true);
        add_hop(h, rx, LosState::los, links.haps_to_uav(distance(h, rx)), true);
        result.used_haps = true;
    };

    if (tx == rx) return finish();
    if (strategy == HopStrategy::haps_relay) {
        relay_via_haps(tx);
        return finish();
    }

    const BlockageModel blockage{ExpDistance{config.beta_per_km}, config.olos_penalty_db};
    std::vector<char> visited(uavs.size(), 0);
    Point3 current = tx;
    for (std::size_t hop = 0;; ++hop) {
        if (hop >= config.max_hops)
            throw RouteLoop(fmt::format("route exceeded {} hops", config.max_hops));
        const std::size_t next =
            strategy == HopStrategy::long_hop
                ? next_hop_long(current, rx, uavs, visited, config.comm_range_m)
                : next_hop_short(current, rx, uavs, visited, config.short_hop_half_angle_deg, config.comm_range_m);
        const Point3 target = next == kReceiver ? rx : uavs[next];
        const double d = distance(current, target);
        const LosState state = sample_los_state(blockage, {d, 0.0}, rng);
        if (state != LosState::los && haps_available) {
            relay_via_haps(current);
            return finish();
        }
        add_hop(current, target, state, links.uav_uav(d, state), false);
        if (next == kReceiver) return finish();
        visited[next] = 1;
        current = target;
    }
}

ResultTable LatencySweep::table() const {
    ResultTable t({"strategy", "haps_available", "distance_km", "mean_total_s", "mean_prop_s", "mean_tx_s",
                   "stuck_rate", "trials"});
    for (const auto& p : points)
        t.add_row({to_string(p.strategy), std::string(p.haps_available ? "true" : "false"), p.distance_km,
                   p.mean_total_s, p.mean_prop_s, p.mean_tx_s, p.stuck_rate, static_cast<std::int64_t>(p.trials)});
    return t;
}

LatencySweep sweep_latency(const AdhocConfig& config, unsigned threads) {
    config.validate();
    const AdhocLinks links(config);
    const std::size_t n_dist = config.distances_km.size();
    const std::size_t n_curves = kCurves.size();

    struct Latency {
        double total, prop, tx;
    };
    using TrialOut = std::vector<std::optional<Latency>>;

    auto batch = run_trials(config.trials, config.seed, threads, [&](std::size_t, std::uint64_t trial_seed) {
        const Deployment uavs = sample_bpp_disc(config.n_uav, config.disc_radius_m, config.radio.uav.altitude_m,
                                                derive_seed(trial_seed, streams::deployment));
        const std::vector<Point3> pts = uavs.positions();
        TrialOut out(n_dist * n_curves);
        for (std::size_t k = 0; k < n_dist; ++k) {
            const double half = config.distances_km[k] * 1e3 / 2.0;
            const Point3 tx{-half, 0.0, config.radio.uav.altitude_m};
            const Point3 rx{half, 0.0, config.radio.uav.altitude_m};
            for (std::size_t c = 0; c < n_curves; ++c) {
                const auto [strategy, haps] = kCurves[c];
                // One blockage stream per strategy, shared by HAPS on/off and by every distance.
                Rng rng(derive_seed(trial_seed, streams::blockage, static_cast<std::uint64_t>(strategy)));
                try {
                    const RouteResult r = route(config, links, strategy, haps, tx, rx, pts, rng);
                    out[k * n_curves + c] = Latency{r.total_latency_s, r.propagation_latency_s,
                                                    r.transmission_latency_s};
                } catch (const RouteStuck&) {
                } catch (const RouteLoop&) {
                }
            }
        }
        return out;
    });

    LatencySweep sweep;
    sweep.failed_trials = batch.failed;
    for (std::size_t k = 0; k < n_dist; ++k) {
        for (std::size_t c = 0; c < n_curves; ++c) {
            double total = 0.0, prop = 0.0, tx = 0.0;
            std::size_t ok = 0, attempted = 0;
            for (const auto& trial : batch.results) {
                if (!trial) continue;
                ++attempted;
                if (const auto& l = (*trial)[k * n_curves + c]) {
                    total += l->total;
                    prop += l->prop;
                    tx += l->tx;
                    ++ok;
                }
            }
            LatencyPoint p;
            p.strategy = kCurves[c].first;
            p.haps_available = kCurves[c].second;
            p.distance_km = config.distances_km[k];
            const double n = ok ? static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
            p.mean_total_s = total / n;
            p.mean_prop_s = prop / n;
            p.mean_tx_s = tx / n;
            p.stuck_rate = attempted ? static_cast<double>(attempted - ok) / static_cast<double>(attempted) : 0.0;
            p.trials = ok;
            sweep.points.push_back(p);
        }
    }
    return sweep;
}

} // namespace ntn
