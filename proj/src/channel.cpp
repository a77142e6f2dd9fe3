#include "ntn/channel.hpp"

#include "ntn/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ntn {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double fspl_db(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0)) throw DomainError("fspl_db: distance must be positive");
    if (!(frequency_hz > 0.0)) throw DomainError("fspl_db: frequency must be positive");
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * frequency_hz / kSpeedOfLight);
}

double noise_power_dbm(double noise_psd_dbm_hz, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw DomainError("noise_power_dbm: bandwidth must be positive");
    return noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz);
}

// --- fading ----------------------------------------------------------------

void validate(const FadingModel& model) {
    std::visit(overloaded{
                   [](const NoFading&) {},
                   [](const Nakagami& f) {
                       if (!(f.m > 0.0)) throw ConfigError("nakagami_m must be positive");
                   },
                   [](const ShadowedRician& f) {
                       if (!(f.m > 0.0)) throw ConfigError("shadowed_rician.m must be positive");
                       if (!(f.omega >= 0.0)) throw ConfigError("shadowed_rician.omega must be non-negative");
                       if (!(f.b0 > 0.0)) throw ConfigError("shadowed_rician.b0 must be positive");
                   },
               },
               model);
}

double mean_fading_power(const FadingModel& model) {
    return std::visit(overloaded{
                          [](const NoFading&) { return 1.0; },
                          [](const Nakagami&) { return 1.0; },
                          [](const ShadowedRician& f) { return f.omega + 2.0 * f.b0; },
                      },
                      model);
}

double sample_fading_power(const FadingModel& model, Rng& rng) {
    return std::visit(overloaded{
                          [](const NoFading&) { return 1.0; },
                          [&rng](const Nakagami& f) {
                              return std::gamma_distribution<double>(f.m, 1.0 / f.m)(rng);
                          },
                          [&rng](const ShadowedRician& f) {
                              // |Z e^{j phi} + X + jY|^2, Z^2 ~ Gamma(m, omega/m), X, Y ~ N(0, b0).
                              const double los_power =
                                  f.omega > 0.0 ? std::gamma_distribution<double>(f.m, f.omega / f.m)(rng) : 0.0;
                              const double amplitude = std::sqrt(los_power);
                              const double phase = 2.0 * std::numbers::pi * uniform01(rng);
                              std::normal_distribution<double> scatter(0.0, std::sqrt(f.b0));
                              const double re = amplitude * std::cos(phase) + scatter(rng);
                              const double im = amplitude * std::sin(phase) + scatter(rng);
                              return re * re + im * im;
                          },
                      },
                      model);
}

// --- blockage --------------------------------------------------------------

const char* to_string(LosState state) {
    switch (state) {
    case LosState::los: return "LOS";
    case LosState::olos: return "OLOS";
    case LosState::nlos: return "NLOS";
    }
    return "?";
}

double los_probability(const BlockageModel& model, const LinkGeometry& geometry) {
    return std::visit(overloaded{
                          [](const AlwaysLos&) { return 1.0; },
                          [&](const ExpDistance& law) {
                              return std::exp(-law.beta_per_km * geometry.distance_m / 1e3);
                          },
                          [&](const ElevationSigmoid& law) {
                              return 1.0 / (1.0 + law.a * std::exp(-law.b * (geometry.elevation_deg - law.a)));
                          },
                      },
                      model.law);
}

LosState blocked_state(const BlockageModel& model) {
    return std::holds_alternative<ExpDistance>(model.law) ? LosState::olos : LosState::nlos;
}

LosState sample_los_state(const BlockageModel& model, const LinkGeometry& geometry, Rng& rng) {
    const double u = uniform01(rng);
    return u < los_probability(model, geometry) ? LosState::los : blocked_state(model);
}

double blockage_loss_db(const BlockageModel& model, LosState state) {
    return state == LosState::los ? 0.0 : model.excess_loss_db;
}

// --- antennas --------------------------------------------------------------

double cosine_exponent(int n_elements) {
    if (n_elements < 1) throw ConfigError("cosine antenna element count must be >= 1");
    return std::max(1.0, n_elements / 2.0 - 1.0);
}

double antenna_gain_dbi(const AntennaPattern& pattern, double off_boresight_deg) {
    if (!(off_boresight_deg >= 0.0 && off_boresight_deg <= 180.0))
        throw DomainError("antenna_gain_dbi: angle must lie in [0, 180] degrees");
    return std::visit(overloaded{
                          [](const FlatPattern& p) { return p.gain_dbi; },
                          [&](const CosineArray& p) {
                              const double q = cosine_exponent(p.n_elements);
                              const double c = std::cos(off_boresight_deg * kDegToRad);
                              if (off_boresight_deg >= 90.0 || c <= 0.0)
                                  return -std::numeric_limits<double>::infinity();
                              return linear_to_db(2.0 * (q + 1.0)) + 10.0 * q * std::log10(c);
                          },
                      },
                      pattern);
}

double antenna_rolloff_db(const AntennaPattern& pattern, double off_boresight_deg) {
    return antenna_gain_dbi(pattern, off_boresight_deg) - antenna_gain_dbi(pattern, 0.0);
}

// --- links -----------------------------------------------------------------

LinkSample make_link_sample(double tx_power_dbm, double total_gain_dbi, double distance_m,
                            double frequency_hz, LosState state, double blockage_penalty_db,
                            double fading_power) {
    LinkSample s;
    s.distance_m = distance_m;
    s.los_state = state;
    s.path_loss_db = fspl_db(distance_m, frequency_hz);
    s.blockage_loss_db = blockage_penalty_db;
    s.fading_power = fading_power;
    s.rx_power_dbm =
        tx_power_dbm + total_gain_dbi - s.path_loss_db - blockage_penalty_db + linear_to_db(fading_power);
    return s;
}

double sinr_db(const LinkSample& serving, std::span<const LinkSample> interferers, double noise_dbm) {
    if (!(serving.distance_m > 0.0) || std::isnan(serving.rx_power_dbm))
        throw DomainError("sinr_db: empty serving link");
    double denominator_mw = db_to_linear(noise_dbm);
    for (const auto& i : interferers) denominator_mw += db_to_linear(i.rx_power_dbm);
    return serving.rx_power_dbm - linear_to_db(denominator_mw);
}

double sinr_db(const LinkSample& serving, std::span<const LinkSample> interferers, const RadioParams& radio) {
    return sinr_db(serving, interferers, radio.noise_dbm());
}

double shannon_capacity(double bandwidth_hz, double sinr_db) {
    if (!(bandwidth_hz > 0.0)) throw DomainError("shannon_capacity: bandwidth must be positive");
    if (sinr_db == -std::numeric_limits<double>::infinity()) return 0.0;
    return bandwidth_hz * std::log2(1.0 + db_to_linear(sinr_db));
}

CapacityEstimate average_capacity(const LinkGeometry& geometry, const ChannelModel& channel,
                                  const RadioParams& radio, std::size_t draws, Rng& rng) {
    if (draws < 1) throw DomainError("average_capacity: at least one draw is required");
    const double mean_snr_db = radio.tx_power_dbm + radio.tx_gain_dbi + radio.rx_gain_dbi -
                               fspl_db(geometry.distance_m, radio.band.carrier_hz) - radio.noise_dbm();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const LosState state = sample_los_state(channel.blockage, geometry, rng);
        const double h = sample_fading_power(channel.fading, rng);
        const double snr_db = mean_snr_db - blockage_loss_db(channel.blockage, state) + linear_to_db(h);
        const double c = shannon_capacity(radio.band.bandwidth_hz, snr_db);
        sum += c;
        sum_sq += c * c;
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    const double var = draws > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

const PlatformRadio& RadioTable::platform(PlatformKind kind) const {
    switch (kind) {
    case PlatformKind::user: return user;
    case PlatformKind::uav: return uav;
    case PlatformKind::haps:
    case PlatformKind::mbs: return haps;
    case PlatformKind::satellite: return satellite;
    }
    return user;
}

} // namespace ntn
