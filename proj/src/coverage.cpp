#include "ntn/coverage.hpp"

#include "ntn/errors.hpp"
#include "ntn/stats.hpp"
#include "ntn/trials.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ntn {

namespace {

constexpr double kNotCovered = -std::numeric_limits<double>::infinity();

double access_rx_dbm(const RadioTable& radio, double receiver_gain_dbi, double distance_m) {
    return radio.user.tx_power_dbm + radio.user.antenna_gain_dbi + receiver_gain_dbi -
           fspl_db(distance_m, radio.mmwave.carrier_hz);
}

} // namespace

std::string to_string(CoverageMode mode) { return mode == CoverageMode::direct ? "direct" : "relayed"; }

std::vector<double> CoverageConfig::default_thresholds() {
    std::vector<double> t;
    for (int x = -20; x <= 20; x += 2) t.push_back(x);
    return t;
}

void CoverageConfig::validate() const {
    if (satellite_counts.empty()) throw ConfigError("coverage.n_satellites must not be empty");
    for (auto n : satellite_counts)
        if (n < 1) throw ConfigError("coverage.n_satellites entries must be >= 1");
    if (haps_counts.empty() && std::count(modes.begin(), modes.end(), CoverageMode::relayed))
        throw ConfigError("coverage.n_haps must not be empty in relayed mode");
    if (!(disc_radius_m > 0.0)) throw ConfigError("coverage.disc_radius_km must be positive");
    if (!(user_density_per_km2 >= 0.0)) throw ConfigError("coverage.user_density_per_km2 must be non-negative");
    if (!(active_fraction > 0.0 && active_fraction <= 1.0))
        throw ConfigError("coverage.active_fraction must lie in (0, 1]");
    if (sub_bands < 1) throw ConfigError("coverage.sub_bands must be >= 1");
    if (!(elevation_mask_deg >= 0.0 && elevation_mask_deg < 90.0))
        throw ConfigError("channel.elevation_mask_deg must lie in [0, 90)");
    if (thresholds_db.empty()) throw ConfigError("coverage.thresholds_db must not be empty");
    for (double t : thresholds_db)
        if (!std::isfinite(t)) throw ConfigError("coverage.thresholds_db entries must be finite");
    if (modes.empty()) throw ConfigError("coverage.modes must not be empty");
}

double access_sinr_db(const AccessLink& link, std::span<const Emitter> interferers, const RadioTable& radio) {
    const AntennaPattern pattern = CosineArray{radio.antenna_elements};
    const double signal_dbm = access_rx_dbm(radio, link.receiver_gain_dbi, distance(link.user, link.receiver)) +
                              linear_to_db(link.fading_power);
    double denominator_mw = db_to_linear(noise_power_dbm(radio.noise_psd_dbm_hz, radio.mmwave.bandwidth_hz));
    for (const auto& e : interferers) {
        const double angle = off_boresight_angle(link.receiver, link.user, e.position);
        const double rx = access_rx_dbm(radio, link.receiver_gain_dbi, distance(e.position, link.receiver)) +
                          antenna_rolloff_db(pattern, angle) + linear_to_db(e.fading_power);
        denominator_mw += db_to_linear(rx);
    }
    return signal_dbm - linear_to_db(denominator_mw);
}

double link_sinr_satellite_user(const Point3& user, const Point3& satellite, double satellite_fading,
                                std::span<const Emitter> interferers, const RadioTable& radio,
                                double elevation_mask_deg) {
    if (!(elevation_angle_spherical(user, satellite) > elevation_mask_deg))
        throw OutageNoVisibility("serving satellite is below the elevation mask");
    return access_sinr_db({user, satellite, radio.satellite.antenna_gain_dbi, satellite_fading}, interferers, radio);
}

double feeder_snr_db(const Point3& haps, const Point3& satellite, const RadioTable& radio) {
    return radio.haps.tx_power_dbm + radio.haps.antenna_gain_dbi + radio.satellite.antenna_gain_dbi -
           fspl_db(distance(haps, satellite), radio.mmwave.carrier_hz) -
           noise_power_dbm(radio.noise_psd_dbm_hz, radio.mmwave.bandwidth_hz);
}

std::optional<std::size_t> nearest_visible_satellite(const Point3& from, std::span<const Point3> satellites,
                                                     double elevation_mask_deg) {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < satellites.size(); ++i) {
        const double d = distance(from, satellites[i]);
        if (d < best_d && elevation_angle_spherical(from, satellites[i]) > elevation_mask_deg) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

bool relayed_coverage(double sinr_haps_user_db, double sinr_sat_haps_db, double threshold_db) {
    return std::min(sinr_haps_user_db, sinr_sat_haps_db) > threshold_db;
}

ResultTable CoverageSweep::table() const {
    ResultTable t({"mode", "n_haps", "n_sats", "threshold_db", "coverage", "ci_low", "ci_high", "trials"});
    for (const auto& p : points)
        t.add_row({to_string(p.mode), static_cast<std::int64_t>(p.n_haps), static_cast<std::int64_t>(p.n_sats),
                   p.threshold_db, p.coverage, p.ci_low, p.ci_high, static_cast<std::int64_t>(p.trials)});
    return t;
}

std::vector<CoveragePoint> CoverageSweep::curve(CoverageMode mode, std::size_t n_haps, std::size_t n_sats) const {
    std::vector<CoveragePoint> out;
    for (const auto& p : points)
        if (p.mode == mode && p.n_haps == n_haps && p.n_sats == n_sats) out.push_back(p);
    return out;
}

double CoverageSweep::at(CoverageMode mode, std::size_t n_haps, std::size_t n_sats, double threshold_db) const {
    for (const auto& p : points)
        if (p.mode == mode && p.n_haps == n_haps && p.n_sats == n_sats && p.threshold_db == threshold_db)
            return p.coverage;
    throw DomainError(fmt::format("no coverage point for {} n_haps={} n_sats={} threshold={}", to_string(mode),
                                  n_haps, n_sats, threshold_db));
}

CoverageSweep sweep_coverage(const CoverageConfig& config, unsigned threads) {
    config.validate();
    const auto& radio = config.radio;
    const FadingModel fading = radio.shadowed_rician;
    validate(fading);
    const std::size_t max_sats = *std::max_element(config.satellite_counts.begin(), config.satellite_counts.end());
    const std::size_t max_haps =
        config.haps_counts.empty() ? 0 : *std::max_element(config.haps_counts.begin(), config.haps_counts.end());
    const bool want_direct = std::count(config.modes.begin(), config.modes.end(), CoverageMode::direct) > 0;
    const bool want_relayed = std::count(config.modes.begin(), config.modes.end(), CoverageMode::relayed) > 0;
    const double co_band_density =
        config.user_density_per_km2 * config.active_fraction / static_cast<double>(config.sub_bands);

    // Configuration order: direct per satellite count, then relayed per (HAPS, satellite) count.
    struct Key {
        CoverageMode mode;
        std::size_t n_haps, n_sats;
    };
    std::vector<Key> keys;
    if (want_direct)
        for (auto s : config.satellite_counts) keys.push_back({CoverageMode::direct, 0, s});
    if (want_relayed)
        for (auto h : config.haps_counts)
            for (auto s : config.satellite_counts) keys.push_back({CoverageMode::relayed, h, s});

    const Point3 user{0.0, 0.0, 0.0};

    auto batch = run_trials(config.trials, config.seed, threads, [&](std::size_t, std::uint64_t ts) {
        const auto co_band = sample_ppp_disc(co_band_density, config.disc_radius_m, 0.0,
                                             derive_seed(ts, streams::users))
                                 .positions();
        const auto sats = sample_bpp_sphere(max_sats, radio.satellite.altitude_m,
                                            derive_seed(ts, streams::satellites))
                              .positions();
        const auto haps = sample_bpp_disc(max_haps, config.disc_radius_m, radio.haps.altitude_m,
                                          derive_seed(ts, streams::haps), PlatformKind::haps)
                              .positions();

        // Fading draws depend only on the receiver identity, so nested sweeps share them.
        auto sinr_at = [&](std::uint64_t tier, std::size_t receiver_index, const Point3& receiver, double gain) {
            Rng rng(derive_seed(ts, streams::fading, tier, receiver_index));
            const double signal_fading = sample_fading_power(fading, rng);
            std::vector<Emitter> emitters;
            emitters.reserve(co_band.size());
            for (const auto& p : co_band) emitters.push_back({p, sample_fading_power(fading, rng)});
            return access_sinr_db({user, receiver, gain, signal_fading}, emitters, radio);
        };

        std::vector<double> out;
        out.reserve(keys.size());
        for (const auto& key : keys) {
            const auto sat_span = std::span(sats).first(key.n_sats);
            if (key.mode == CoverageMode::direct) {
                const auto j = nearest_visible_satellite(user, sat_span, config.elevation_mask_deg);
                out.push_back(j ? sinr_at(0, *j, sats[*j], radio.satellite.antenna_gain_dbi) : kNotCovered);
                continue;
            }
            if (key.n_haps == 0) {
                out.push_back(kNotCovered);
                continue;
            }
            std::size_t h = 0;
            for (std::size_t i = 1; i < key.n_haps; ++i)
                if (distance(user, haps[i]) < distance(user, haps[h])) h = i;
            const auto j = nearest_visible_satellite(haps[h], sat_span, config.elevation_mask_deg);
            if (!j) {
                out.push_back(kNotCovered);
                continue;
            }
            const double access = sinr_at(1, h, haps[h], radio.haps.antenna_gain_dbi);
            out.push_back(std::min(access, feeder_snr_db(haps[h], sats[*j], radio)));
        }
        return out;
    });

    CoverageSweep sweep;
    sweep.failed_trials = batch.failed;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        for (double tau : config.thresholds_db) {
            CoveragePoint p;
            p.mode = keys[k].mode;
            p.n_haps = keys[k].n_haps;
            p.n_sats = keys[k].n_sats;
            p.threshold_db = tau;
            for (const auto& trial : batch.results) {
                if (!trial) continue;
                ++p.trials;
                if ((*trial)[k] > tau) ++p.covered;
            }
            p.coverage = p.trials ? static_cast<double>(p.covered) / static_cast<double>(p.trials) : 0.0;
            const Interval ci = wilson_interval(p.covered, p.trials);
            p.ci_low = ci.low;
            p.ci_high = ci.high;
            sweep.points.push_back(p);
        }
    }
    return sweep;
}

} // namespace ntn
