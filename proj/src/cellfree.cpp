#include "ntn/cellfree.hpp"

#include "ntn/errors.hpp"
#include "ntn/stats.hpp"
#include "ntn/trials.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ntn {

std::string to_string(Association mode) { return mode == Association::cellular ? "cellular" : "cell-free"; }

void CellfreeConfig::validate() const {
    if (!(disc_radius_m > 0.0)) throw ConfigError("cellfree.disc_radius_km must be positive");
    if (n_uav < 1) throw ConfigError("cellfree.n_uav must be >= 1");
    if (haps_counts.empty()) throw ConfigError("cellfree.haps_counts must not be empty");
    for (auto n : haps_counts)
        if (n < 1) throw ConfigError("cellfree.haps_counts entries must be >= 1");
    if (!(user_density_per_km2 >= 0.0)) throw ConfigError("cellfree.user_density_per_km2 must be non-negative");
    if (!(active_fraction > 0.0 && active_fraction <= 1.0))
        throw ConfigError("cellfree.active_fraction must lie in (0, 1]");
    if (sub_bands < 1) throw ConfigError("cellfree.sub_bands must be >= 1");
    if (!(nlos_excess_loss_db >= 0.0)) throw ConfigError("channel.nlos_excess_loss_db must be non-negative");
    if (capacity_draws < 1) throw ConfigError("channel.capacity_draws must be >= 1");
    if (!(ee_grid_step_mbj > 0.0) || !(ee_grid_max_mbj > 0.0))
        throw ConfigError("cellfree.ee_grid_step_mbj and ee_grid_max_mbj must be positive");
}

std::size_t associate(std::span<const UavLink> links, Association mode) {
    if (links.empty()) throw ConfigError("association needs at least one UAV");
    std::size_t best = 0;
    for (std::size_t i = 1; i < links.size(); ++i) {
        const bool better = mode == Association::cellular ? links[i].distance_m < links[best].distance_m
                                                          : links[i].mean_rx_dbm > links[best].mean_rx_dbm;
        if (better) best = i;
    }
    return best;
}

double energy_efficiency(double capacity_bps, double tx_power_dbm) {
    const double watts = dbm_to_watts(tx_power_dbm);
    if (!(watts > 0.0)) throw DomainError("energy_efficiency: transmit power must be positive");
    return capacity_bps / watts / 1e6;
}

double ee_total(double ee_access, double ee_backhaul) {
    if (ee_access < 0.0 || ee_backhaul < 0.0) throw DomainError("ee_total: efficiencies must be non-negative");
    const double sum = ee_access + ee_backhaul;
    if (sum == 0.0) return 0.0;
    if (std::isinf(ee_access)) return ee_backhaul;
    if (std::isinf(ee_backhaul)) return ee_access;
    return ee_access * ee_backhaul / sum;
}

std::vector<double> EeCurve::totals() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.ee_total);
    return out;
}

const EeCurve& EeResult::curve(Association mode, std::size_t n_haps) const {
    for (const auto& c : curves)
        if (c.mode == mode && c.n_haps == n_haps) return c;
    throw DomainError(fmt::format("no EE curve for {} with {} HAPS", to_string(mode), n_haps));
}

ResultTable EeResult::cdf_table(const CellfreeConfig& config) const {
    ResultTable t({"mode", "n_haps", "ee_mbj", "cdf_value"});
    const auto steps = static_cast<std::size_t>(std::floor(config.ee_grid_max_mbj / config.ee_grid_step_mbj + 1e-9));
    for (const auto& c : curves) {
        if (c.records.empty()) continue;
        const EmpiricalCdf cdf(c.totals());
        for (std::size_t i = 0; i <= steps; ++i) {
            const double x = config.ee_grid_step_mbj * static_cast<double>(i);
            t.add_row({to_string(c.mode), static_cast<std::int64_t>(c.n_haps), x, cdf(x)});
        }
    }
    return t;
}

ResultTable EeResult::summary_table() const {
    ResultTable t({"mode", "n_haps", "statistic", "value"});
    for (const auto& c : curves) {
        const auto mode = to_string(c.mode);
        const auto n = static_cast<std::int64_t>(c.n_haps);
        t.add_row({mode, n, std::string("samples"), static_cast<double>(c.records.size())});
        if (c.records.empty()) continue;
        const auto totals = c.totals();
        const EmpiricalCdf cdf(totals);
        const double below = static_cast<double>(std::count_if(totals.begin(), totals.end(),
                                                               [](double x) { return x < 40.0; })) /
                             static_cast<double>(totals.size());
        t.add_row({mode, n, std::string("mean"), mean(totals)});
        t.add_row({mode, n, std::string("cdf_40"), cdf(40.0)});
        t.add_row({mode, n, std::string("fraction_ge_40"), 1.0 - below});
        t.add_row({mode, n, std::string("q25"), cdf.quantile(0.25)});
        t.add_row({mode, n, std::string("q50"), cdf.quantile(0.5)});
        t.add_row({mode, n, std::string("q75"), cdf.quantile(0.75)});
    }
    return t;
}

EeResult simulate_ee_cdf(const CellfreeConfig& config, unsigned threads) {
    config.validate();
    const auto& radio = config.radio;
    const ErgodicCapacityTable access_table(radio.nakagami, config.capacity_draws,
                                            derive_seed(config.seed, streams::capacity_table, 0));
    const ErgodicCapacityTable backhaul_table(radio.shadowed_rician, config.capacity_draws,
                                              derive_seed(config.seed, streams::capacity_table, 1));
    const BlockageModel blockage{config.sigmoid, config.nlos_excess_loss_db};
    const AntennaPattern pattern = CosineArray{radio.antenna_elements};
    const Band band = radio.mmwave;
    const double noise_dbm = noise_power_dbm(radio.noise_psd_dbm_hz, band.bandwidth_hz);
    const double noise_mw = db_to_linear(noise_dbm);
    const std::size_t max_haps = *std::max_element(config.haps_counts.begin(), config.haps_counts.end());
    constexpr Association kModes[] = {Association::cellular, Association::cell_free};
    const std::size_t n_curves = 2 * config.haps_counts.size();

    using TrialOut = std::vector<std::vector<EnergyRecord>>;
    auto batch = run_trials(config.trials, config.seed, threads, [&](std::size_t, std::uint64_t ts) {
        const Deployment all_users = sample_ppp_disc(config.user_density_per_km2, config.disc_radius_m, 0.0,
                                                     derive_seed(ts, streams::users));
        Rng thin(derive_seed(ts, streams::users, 1));
        std::vector<Point3> users;
        for (const auto& n : all_users.nodes)
            if (uniform01(thin) < config.active_fraction) users.push_back(n.position);

        const auto uavs = sample_bpp_disc(config.n_uav, config.disc_radius_m, radio.uav.altitude_m,
                                          derive_seed(ts, streams::deployment))
                              .positions();
        const auto haps = sample_bpp_disc(max_haps, config.disc_radius_m, radio.haps.altitude_m,
                                          derive_seed(ts, streams::haps), PlatformKind::haps)
                              .positions();

        Rng band_rng(derive_seed(ts, streams::sub_bands));
        std::uniform_int_distribution<int> pick_band(0, config.sub_bands - 1);
        std::vector<int> sub_band(users.size());
        for (auto& b : sub_band) b = pick_band(band_rng);

        // Realized blockage and mean received power for every (user, UAV) pair.
        const std::size_t nu = users.size(), nv = uavs.size();
        std::vector<UavLink> links(nu * nv);
        Rng los_rng(derive_seed(ts, streams::blockage));
        const double link_gain = radio.uav.tx_power_dbm + radio.uav.antenna_gain_dbi + radio.user.antenna_gain_dbi;
        for (std::size_t u = 0; u < nu; ++u) {
            for (std::size_t j = 0; j < nv; ++j) {
                UavLink& l = links[u * nv + j];
                l.uav = j;
                l.distance_m = distance(users[u], uavs[j]);
                l.los_state = sample_los_state(blockage, {l.distance_m, elevation_angle(users[u], uavs[j])}, los_rng);
                l.mean_rx_dbm = link_gain - fspl_db(l.distance_m, band.carrier_hz) -
                                blockage_loss_db(blockage, l.los_state);
            }
        }

        TrialOut out(n_curves);
        for (std::size_t m = 0; m < 2; ++m) {
            std::vector<std::size_t> serving(nu);
            for (std::size_t u = 0; u < nu; ++u)
                serving[u] = associate(std::span(links).subspan(u * nv, nv), kModes[m]);

            // Backhaul efficiency of each UAV towards its nearest HAPS, per HAPS count.
            std::vector<std::vector<double>> ee_bh(config.haps_counts.size(), std::vector<double>(nv, -1.0));
            auto backhaul = [&](std::size_t h_idx, std::size_t j) {
                double& cached = ee_bh[h_idx][j];
                if (cached >= 0.0) return cached;
                double d = std::numeric_limits<double>::infinity();
                for (std::size_t h = 0; h < config.haps_counts[h_idx]; ++h) d = std::min(d, distance(uavs[j], haps[h]));
                const double snr = radio.haps.tx_power_dbm + radio.haps.antenna_gain_dbi + radio.uav.antenna_gain_dbi -
                                   fspl_db(d, band.carrier_hz) - noise_dbm;
                cached = energy_efficiency(backhaul_table.capacity(band.bandwidth_hz, snr), radio.haps.tx_power_dbm);
                return cached;
            };

            for (std::size_t u = 0; u < nu; ++u) {
                const std::size_t s = serving[u];
                double interference_mw = 0.0;
                for (std::size_t k = 0; k < nu; ++k) {
                    if (k == u || sub_band[k] != sub_band[u]) continue;
                    const std::size_t j = serving[k];
                    if (users[k] == users[u]) continue;
                    const double rolloff =
                        antenna_rolloff_db(pattern, off_boresight_angle(uavs[j], users[k], users[u]));
                    interference_mw += db_to_linear(links[u * nv + j].mean_rx_dbm + rolloff);
                }
                const double sinr = links[u * nv + s].mean_rx_dbm - linear_to_db(interference_mw + noise_mw);
                const double ee_acc =
                    energy_efficiency(access_table.capacity(band.bandwidth_hz, sinr), radio.uav.tx_power_dbm);
                for (std::size_t h = 0; h < config.haps_counts.size(); ++h) {
                    const double ee_b = backhaul(h, s);
                    out[m * config.haps_counts.size() + h].push_back({ee_acc, ee_b, ee_total(ee_acc, ee_b)});
                }
            }
        }
        return out;
    });

    EeResult result;
    result.failed_trials = batch.failed;
    for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t h = 0; h < config.haps_counts.size(); ++h) {
            EeCurve c;
            c.mode = kModes[m];
            c.n_haps = config.haps_counts[h];
            for (const auto& trial : batch.results)
                if (trial) {
                    const auto& recs = (*trial)[m * config.haps_counts.size() + h];
                    c.records.insert(c.records.end(), recs.begin(), recs.end());
                }
            result.curves.push_back(std::move(c));
        }
    }
    return result;
}

} // namespace ntn
