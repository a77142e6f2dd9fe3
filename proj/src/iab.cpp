#include "ntn/iab.hpp"

#include "ntn/errors.hpp"
#include "ntn/trials.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ntn {

void IabConfig::validate() const {
    if (!(disc_radius_m > 0.0)) throw ConfigError("iab.disc_radius_km must be positive");
    if (ring_radii_m.size() != ring_counts.size())
        throw ConfigError("iab.ring_radii_km and iab.ring_counts must have the same length");
    for (std::size_t k = 0; k < ring_radii_m.size(); ++k) {
        if (!(ring_radii_m[k] > 0.0)) throw ConfigError("iab.ring_radii_km entries must be positive");
        if (k > 0 && !(ring_radii_m[k] > ring_radii_m[k - 1]))
            throw ConfigError("iab.ring_radii_km must be strictly increasing");
        if (ring_counts[k] < 1) throw ConfigError("iab.ring_counts entries must be >= 1");
    }
    if (!(mbs_height_m > 0.0)) throw ConfigError("iab.mbs_height_m must be positive");
    if (!(grid_step_m > 0.0)) throw ConfigError("iab.grid_step_km must be positive");
    if (!(user_density_per_km2 >= 0.0)) throw ConfigError("iab.user_density_per_km2 must be non-negative");
    if (!(active_fraction > 0.0 && active_fraction <= 1.0))
        throw ConfigError("iab.active_fraction must lie in (0, 1]");
    if (target_rate_bps && !(*target_rate_bps >= 0.0)) throw ConfigError("iab.target_rate_mbps must be >= 0");
    if (capacity_draws < 1) throw ConfigError("channel.capacity_draws must be >= 1");
}

std::vector<std::size_t> IabTopology::children(std::size_t id) const {
    std::vector<std::size_t> out;
    for (const auto& n : nodes)
        if (n.parent && *n.parent == id) out.push_back(n.id);
    return out;
}

int IabTopology::depth(std::size_t id) const {
    int d = 0;
    for (auto p = nodes.at(id).parent; p; p = nodes.at(*p).parent) {
        if (++d > static_cast<int>(nodes.size())) throw ScenarioError("IAB parent map contains a cycle");
    }
    return d;
}

int IabTopology::max_depth() const {
    int d = 0;
    for (const auto& n : nodes) d = std::max(d, depth(n.id));
    return d;
}

IabTopology build_topology(const IabConfig& config) {
    config.validate();
    IabTopology t;
    t.nodes.push_back({0, 0, {{0.0, 0.0, config.mbs_height_m}, PlatformKind::mbs}, std::nullopt});
    if (!config.haps_enabled) return t;

    std::size_t prev_begin = 0, prev_end = 1;
    for (std::size_t k = 0; k < config.ring_radii_m.size(); ++k) {
        const std::size_t count = config.ring_counts[k];
        const double offset = std::numbers::pi / static_cast<double>(count);
        const std::size_t begin = t.nodes.size();
        for (std::size_t i = 0; i < count; ++i) {
            const double phi = offset + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
            const Point3 p{config.ring_radii_m[k] * std::cos(phi), config.ring_radii_m[k] * std::sin(phi),
                           config.radio.haps.altitude_m};
            std::size_t parent = prev_begin;
            for (std::size_t j = prev_begin; j < prev_end; ++j)
                if (horizontal_distance(p, t.nodes[j].node.position) <
                    horizontal_distance(p, t.nodes[parent].node.position) - 1e-6)
                    parent = j;
            t.nodes.push_back({t.nodes.size(), static_cast<int>(k + 1), {p, PlatformKind::haps}, parent});
        }
        prev_begin = begin;
        prev_end = t.nodes.size();
    }
    return t;
}

IabLinks::IabLinks(const IabConfig& config)
    : config_(&config),
      nakagami_(config.radio.nakagami, config.capacity_draws, derive_seed(config.seed, streams::capacity_table, 0)),
      shadowed_rician_(config.radio.shadowed_rician, config.capacity_draws,
                       derive_seed(config.seed, streams::capacity_table, 1)),
      blockage_{config.sigmoid, config.nlos_excess_loss_db},
      noise_dbm_(noise_power_dbm(config.radio.noise_psd_dbm_hz, config.radio.mmwave.bandwidth_hz)) {}

double IabLinks::mean_rx_dbm(const IabNode& node, const Point3& ground) const {
    const auto& r = config_->radio;
    const double d = distance(node.node.position, ground);
    const double rx = r.haps.tx_power_dbm + r.haps.antenna_gain_dbi + r.user.antenna_gain_dbi -
                      fspl_db(d, r.mmwave.carrier_hz);
    if (node.node.kind != PlatformKind::mbs) return rx + linear_to_db(mean_fading_power(r.shadowed_rician));
    const double p = los_probability(blockage_, {d, elevation_angle(ground, node.node.position)});
    return rx + linear_to_db(p + (1.0 - p) * db_to_linear(-blockage_.excess_loss_db));
}

double IabLinks::se(const IabNode& node, const Point3& ground, double eirp_dbm, double rx_gain_dbi) const {
    const double d = distance(node.node.position, ground);
    const double snr = eirp_dbm + rx_gain_dbi - fspl_db(d, config_->radio.mmwave.carrier_hz) - noise_dbm_;
    if (node.node.kind != PlatformKind::mbs) return shadowed_rician_.spectral_efficiency(snr);
    const double p = los_probability(blockage_, {d, elevation_angle(ground, node.node.position)});
    return p * nakagami_.spectral_efficiency(snr) +
           (1.0 - p) * nakagami_.spectral_efficiency(snr - blockage_.excess_loss_db);
}

double IabLinks::access_se(const IabNode& node, const Point3& ground) const {
    const auto& r = config_->radio;
    return se(node, ground, r.haps.tx_power_dbm + r.haps.antenna_gain_dbi, r.user.antenna_gain_dbi);
}

double IabLinks::uplink_se(const IabNode& node, const Point3& ground) const {
    const auto& r = config_->radio;
    return se(node, ground, r.user.tx_power_dbm + r.user.antenna_gain_dbi, r.haps.antenna_gain_dbi);
}

double IabLinks::backhaul_se(const IabNode& a, const IabNode& b) const {
    const auto& r = config_->radio;
    const double snr = r.haps.tx_power_dbm + 2.0 * r.haps.antenna_gain_dbi -
                       fspl_db(distance(a.node.position, b.node.position), r.mmwave.carrier_hz) - noise_dbm_;
    return shadowed_rician_.spectral_efficiency(snr);
}

std::size_t IabLinks::associate(const IabTopology& topology, const Point3& ground) const {
    if (topology.nodes.empty()) throw ScenarioError("IAB topology has no nodes");
    std::size_t best = 0;
    double best_rx = -std::numeric_limits<double>::infinity();
    for (const auto& n : topology.nodes) {
        const double rx = mean_rx_dbm(n, ground);
        if (rx > best_rx) {
            best_rx = rx;
            best = n.id;
        }
    }
    return best;
}

CellMap map_cells(const IabTopology& topology, const IabLinks& links, double grid_step_m, double disc_radius_m) {
    if (!(grid_step_m > 0.0)) throw ConfigError("iab.grid_step_km must be positive");
    CellMap map;
    map.point_area_km2 = grid_step_m * grid_step_m / 1e6;
    map.area_km2.assign(topology.nodes.size(), 0.0);
    map.mean_access_se.assign(topology.nodes.size(), 0.0);
    const auto half = static_cast<long>(std::floor(disc_radius_m / grid_step_m + 1e-9));
    for (long iy = -half; iy <= half; ++iy) {
        for (long ix = -half; ix <= half; ++ix) {
            const double x = static_cast<double>(ix) * grid_step_m;
            const double y = static_cast<double>(iy) * grid_step_m;
            if (x * x + y * y > disc_radius_m * disc_radius_m * (1.0 + 1e-12)) continue;
            const Point3 g{x, y, 0.0};
            // Ties (points equidistant from symmetric nodes) share their area equally;
            // the reported serving node is the lowest id among them.
            std::vector<double> rx(topology.nodes.size());
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rx.size(); ++i) {
                rx[i] = links.mean_rx_dbm(topology.nodes[i], g);
                best = std::max(best, rx[i]);
            }
            std::vector<std::size_t> tied;
            for (std::size_t i = 0; i < rx.size(); ++i)
                if (rx[i] >= best - 1e-9) tied.push_back(i);
            const std::size_t node = tied.front();
            map.points.push_back({x, y, node, links.access_se(topology.nodes[node], g)});
            const double w = map.point_area_km2 / static_cast<double>(tied.size());
            for (std::size_t i : tied) {
                map.area_km2[i] += w;
                map.mean_access_se[i] += w * links.access_se(topology.nodes[i], g);
            }
        }
    }
    for (std::size_t i = 0; i < topology.nodes.size(); ++i)
        if (map.area_km2[i] > 0.0) map.mean_access_se[i] /= map.area_km2[i];
    return map;
}

ResourceAllocation allocate_resources(const IabTopology& topology, const CellMap& cells, const IabLinks& links,
                                      const DemandModel& demand) {
    const std::size_t n = topology.nodes.size();
    const double bw = links.bandwidth_hz();
    ResourceAllocation a;
    a.bandwidth_hz = bw;
    a.demand_users.assign(n, 0.0);
    a.subtree_demand_users.assign(n, 0.0);
    a.access_share.assign(n, 0.0);
    a.backhaul_share.assign(n, 0.0);
    a.backhaul_se.assign(n, 0.0);
    a.used_share.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        a.demand_users[i] = cells.area_km2.at(i) * demand.user_density_per_km2 * demand.active_fraction;
        if (const auto p = topology.nodes[i].parent)
            a.backhaul_se[i] = links.backhaul_se(topology.nodes[*p], topology.nodes[i]);
    }
    // Children always carry larger ids than their parent.
    for (std::size_t i = n; i-- > 0;) {
        a.subtree_demand_users[i] += a.demand_users[i];
        if (const auto p = topology.nodes[i].parent) a.subtree_demand_users[*p] += a.subtree_demand_users[i];
    }

    // Share of node i's resources needed per bit/s of per-user rate.
    auto access_unit = [&](std::size_t i) {
        return a.demand_users[i] > 0.0 ? a.demand_users[i] / (bw * cells.mean_access_se[i]) : 0.0;
    };
    auto backhaul_unit = [&](std::size_t i) {
        return a.subtree_demand_users[i] > 0.0 ? a.subtree_demand_users[i] / (bw * a.backhaul_se[i]) : 0.0;
    };
    std::vector<double> usage(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        usage[i] += access_unit(i);
        if (const auto p = topology.nodes[i].parent) usage[*p] += backhaul_unit(i);
    }
    double r_max = std::numeric_limits<double>::infinity();
    for (double u : usage)
        if (u > 0.0) r_max = std::min(r_max, 1.0 / u);
    a.max_rate_bps = r_max;
    a.per_user_rate_bps = r_max;
    if (demand.target_rate_bps) {
        a.saturated = *demand.target_rate_bps > r_max;
        a.per_user_rate_bps = std::min(*demand.target_rate_bps, r_max);
    }
    if (!std::isfinite(a.per_user_rate_bps)) return a;

    const double r = a.per_user_rate_bps;
    for (std::size_t i = 0; i < n; ++i) {
        a.access_share[i] = std::min(1.0, r * access_unit(i));
        a.used_share[i] += a.access_share[i];
        if (const auto p = topology.nodes[i].parent) {
            a.backhaul_share[i] = std::min(1.0, r * backhaul_unit(i));
            a.used_share[*p] += a.backhaul_share[i];
        }
    }
    return a;
}

std::vector<double> downlink_heatmap(const IabTopology& topology, const CellMap& cells,
                                     const ResourceAllocation& allocation) {
    std::vector<double> out;
    out.reserve(cells.points.size());
    const double bw = allocation.bandwidth_hz;
    for (const auto& g : cells.points) {
        const std::size_t i = g.node;
        const double n_i = allocation.demand_users.at(i);
        if (!(n_i > 0.0) || !std::isfinite(allocation.per_user_rate_bps)) {
            out.push_back(0.0);
            continue;
        }
        double value = allocation.access_share[i] * bw * g.access_se / n_i;
        if (topology.nodes[i].parent)
            value = std::min(value, allocation.backhaul_share[i] * bw * allocation.backhaul_se[i] /
                                        allocation.subtree_demand_users[i]);
        out.push_back(value);
    }
    return out;
}

UplinkAggregate uplink_aggregate(const IabTopology& topology, const ResourceAllocation& allocation,
                                 const IabLinks& links, std::span<const Point3> users) {
    const std::size_t n = topology.nodes.size();
    const double bw = links.bandwidth_hz();
    UplinkAggregate u;
    u.own_bps.assign(n, 0.0);
    u.aggregate_bps.assign(n, 0.0);
    u.users.assign(n, 0);
    std::vector<double> se_sum(n, 0.0);
    for (const auto& p : users) {
        const std::size_t i = links.associate(topology, p);
        se_sum[i] += links.uplink_se(topology.nodes[i], p);
        ++u.users[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (u.users[i] > 0)
            u.own_bps[i] = allocation.access_share[i] * bw * se_sum[i] / static_cast<double>(u.users[i]);
    for (std::size_t i = n; i-- > 0;) {
        u.aggregate_bps[i] += u.own_bps[i];
        if (const auto p = topology.nodes[i].parent) {
            u.aggregate_bps[i] =
                std::min(u.aggregate_bps[i], allocation.backhaul_share[i] * bw * allocation.backhaul_se[i]);
            u.aggregate_bps[*p] += u.aggregate_bps[i];
        }
    }
    return u;
}

double IabResult::total_downlink_bps() const {
    double total = 0.0;
    for (std::size_t i = 0; i < topology.nodes.size(); ++i)
        total += allocation.access_share[i] * allocation.bandwidth_hz * cells.mean_access_se[i];
    return total;
}

double IabResult::total_uplink_bps() const {
    double total = 0.0;
    for (double x : uplink.own_bps) total += x;
    return total;
}

ResultTable IabResult::heatmap_table() const {
    ResultTable t({"x_km", "y_km", "capacity_mbps", "serving_node"});
    for (std::size_t k = 0; k < cells.points.size(); ++k) {
        const auto& g = cells.points[k];
        t.add_row({g.x_m / 1e3, g.y_m / 1e3, heatmap_bps[k] / 1e6, static_cast<std::int64_t>(g.node)});
    }
    return t;
}

ResultTable IabResult::aggregates_table() const {
    ResultTable t({"node_id", "layer", "uplink_mbps", "downlink_share"});
    for (const auto& n : topology.nodes) {
        // HAPS: share of the parent's resources spent on this node's backhaul; MBS: total share in use.
        const double share = n.parent ? allocation.backhaul_share[n.id] : allocation.used_share[n.id];
        t.add_row({static_cast<std::int64_t>(n.id), static_cast<std::int64_t>(n.layer),
                   uplink.aggregate_bps[n.id] / 1e6, share});
    }
    return t;
}

IabResult run_iab(const IabConfig& config, unsigned threads) {
    config.validate();
    IabResult result;
    result.topology = build_topology(config);
    const IabLinks links(config);
    result.cells = map_cells(result.topology, links, config.grid_step_m, config.disc_radius_m);
    result.allocation = allocate_resources(result.topology, result.cells, links,
                                           {config.user_density_per_km2, config.active_fraction,
                                            config.target_rate_bps});
    result.heatmap_bps = downlink_heatmap(result.topology, result.cells, result.allocation);

    auto batch = run_trials(config.trials, config.seed, threads, [&](std::size_t, std::uint64_t ts) {
        const auto users = sample_ppp_disc(config.user_density_per_km2 * config.active_fraction,
                                           config.disc_radius_m, 0.0, derive_seed(ts, streams::users))
                               .positions();
        return uplink_aggregate(result.topology, result.allocation, links, users);
    });
    result.failed_trials = batch.failed;

    const std::size_t n = result.topology.nodes.size();
    result.uplink.own_bps.assign(n, 0.0);
    result.uplink.aggregate_bps.assign(n, 0.0);
    result.uplink.users.assign(n, 0);
    std::size_t ok = 0;
    for (const auto& trial : batch.results) {
        if (!trial) continue;
        ++ok;
        for (std::size_t i = 0; i < n; ++i) {
            result.uplink.own_bps[i] += trial->own_bps[i];
            result.uplink.aggregate_bps[i] += trial->aggregate_bps[i];
            result.uplink.users[i] += trial->users[i];
        }
    }
    if (ok > 0)
        for (std::size_t i = 0; i < n; ++i) {
            result.uplink.own_bps[i] /= static_cast<double>(ok);
            result.uplink.aggregate_bps[i] /= static_cast<double>(ok);
        }
    return result;
}

} // namespace ntn
