#pragma once

#include "ntn/geometry.hpp"
#include "ntn/rng.hpp"

#include <cstddef>
#include <span>
#include <variant>

namespace ntn {

inline constexpr double kSpeedOfLight = 299792458.0;

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);

/// Free-space (Friis) path loss, 20 log10(4 pi d f / c).
double fspl_db(double distance_m, double frequency_hz);

/// Thermal noise power over `bandwidth_hz` for a noise PSD given in dBm/Hz.
double noise_power_dbm(double noise_psd_dbm_hz, double bandwidth_hz);

// ---------------------------------------------------------------------------
// Radio parameters

struct Band {
    double carrier_hz = 0.0;
    double bandwidth_hz = 0.0;
};

struct PlatformRadio {
    double tx_power_dbm = 0.0;
    double antenna_gain_dbi = 0.0;
    double altitude_m = 0.0;
};

/// Parameters of one link direction.
struct RadioParams {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    Band band;
    double noise_psd_dbm_hz = -174.0;

    double noise_dbm() const { return noise_power_dbm(noise_psd_dbm_hz, band.bandwidth_hz); }
};

// ---------------------------------------------------------------------------
// Small-scale fading

struct NoFading {};

/// Unit-mean Nakagami-m power gain, Gamma(m, 1/m).
struct Nakagami {
    double m = 2.0;
};

/// Shadowed-Rician power gain: Nakagami-m shadowed LoS amplitude of average
/// power `omega` plus a complex Gaussian scattered part of power 2 * b0.
struct ShadowedRician {
    double omega = 1.29;
    double b0 = 0.158;
    double m = 19.4;
};

using FadingModel = std::variant<NoFading, Nakagami, ShadowedRician>;

void validate(const FadingModel& model);
double mean_fading_power(const FadingModel& model);
double sample_fading_power(const FadingModel& model, Rng& rng);

// ---------------------------------------------------------------------------
// Blockage

enum class LosState { los, olos, nlos };

const char* to_string(LosState state);

struct AlwaysLos {};

/// P(LoS) = exp(-beta d), d in km. Blocked links are obstructed-LoS.
struct ExpDistance {
    double beta_per_km = 0.08;
};

/// P(LoS) = 1 / (1 + a exp(-b (theta - a))), theta in degrees. Blocked links are NLoS.
struct ElevationSigmoid {
    double a = 9.61;
    double b = 0.16;
};

struct BlockageModel {
    std::variant<AlwaysLos, ExpDistance, ElevationSigmoid> law;
    double excess_loss_db = 20.0;
};

struct LinkGeometry {
    double distance_m = 0.0;
    double elevation_deg = 90.0;
};

double los_probability(const BlockageModel& model, const LinkGeometry& geometry);

/// Consumes exactly one uniform draw for every blockage law, so streams stay
/// aligned between geometries (common random numbers).
LosState sample_los_state(const BlockageModel& model, const LinkGeometry& geometry, Rng& rng);

/// State the model assigns to a blocked link: OLoS for the distance law, NLoS otherwise.
LosState blocked_state(const BlockageModel& model);

double blockage_loss_db(const BlockageModel& model, LosState state);

// ---------------------------------------------------------------------------
// Antenna patterns

struct FlatPattern {
    double gain_dbi = 0.0;
};

/// G(theta) = G_max cos^q(theta) on the front hemisphere, 0 behind, with
/// q = N/2 - 1 and G_max = 2 (q + 1) so the pattern integrates to 4 pi.
struct CosineArray {
    int n_elements = 32;
};

using AntennaPattern = std::variant<FlatPattern, CosineArray>;

double cosine_exponent(int n_elements);
double antenna_gain_dbi(const AntennaPattern& pattern, double off_boresight_deg);

/// Gain relative to boresight, <= 0 dB; -infinity behind the array.
double antenna_rolloff_db(const AntennaPattern& pattern, double off_boresight_deg);

// ---------------------------------------------------------------------------
// Link evaluation

struct LinkSample {
    double distance_m = 0.0;
    LosState los_state = LosState::los;
    double path_loss_db = 0.0;
    double blockage_loss_db = 0.0;
    double fading_power = 1.0;
    double rx_power_dbm = 0.0;
};

/// rx = tx + gains - path loss - blockage penalty + 10 log10(fading).
LinkSample make_link_sample(double tx_power_dbm, double total_gain_dbi, double distance_m,
                            double frequency_hz, LosState state, double blockage_penalty_db,
                            double fading_power);

double sinr_db(const LinkSample& serving, std::span<const LinkSample> interferers, double noise_dbm);
double sinr_db(const LinkSample& serving, std::span<const LinkSample> interferers, const RadioParams& radio);

/// B log2(1 + sinr). -infinity dB gives 0.
double shannon_capacity(double bandwidth_hz, double sinr_db);

struct ChannelModel {
    BlockageModel blockage;
    FadingModel fading;
};

struct CapacityEstimate {
    double mean_bps = 0.0;
    double std_error_bps = 0.0;
};

/// Monte Carlo mean of the Shannon capacity over blockage-state and fading
/// draws with the geometry held fixed (noise-limited).
CapacityEstimate average_capacity(const LinkGeometry& geometry, const ChannelModel& channel,
                                  const RadioParams& radio, std::size_t draws, Rng& rng);

} // namespace ntn

namespace ntn {

/// Per-platform radio parameters with the default simulation values.
struct RadioTable {
    PlatformRadio user{20.0, 3.0, 0.0};
    PlatformRadio uav{30.0, 10.0, 50.0};
    PlatformRadio haps{36.0, 30.0, 20e3};
    PlatformRadio satellite{45.0, 50.0, 550e3};
    Band rf{2e9, 40e6};
    Band mmwave{28e9, 100e6};
    double noise_psd_dbm_hz = -174.0;
    ShadowedRician shadowed_rician{};
    Nakagami nakagami{};
    int antenna_elements = 32;
    double packet_size_bits = 5e6;

    const PlatformRadio& platform(PlatformKind kind) const;
};

} // namespace ntn
