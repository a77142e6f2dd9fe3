#pragma once

#include "ntn/channel.hpp"
#include "ntn/errors.hpp"
#include "ntn/geometry.hpp"
#include "ntn/result_table.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ntn {

enum class CoverageMode { direct, relayed };

std::string to_string(CoverageMode mode);

struct CoverageConfig {
    RadioTable radio;
    std::vector<std::size_t> satellite_counts{100, 200};
    std::vector<std::size_t> haps_counts{8, 16};
    double disc_radius_m = 50e3;
    double user_density_per_km2 = 1.0;
    double active_fraction = 0.1;
    int sub_bands = 10;
    double elevation_mask_deg = 10.0;
    std::vector<double> thresholds_db = default_thresholds();
    std::vector<CoverageMode> modes{CoverageMode::direct, CoverageMode::relayed};
    std::size_t trials = 10000;
    std::uint64_t seed = 1;

    static std::vector<double> default_thresholds();
    void validate() const;
};

/// Transmitter whose signal reaches the receiver under evaluation.
struct Emitter {
    Point3 position;
    double fading_power = 1.0;
};

/// Uplink access receiver (satellite or HAPS) with its beam on `user`.
struct AccessLink {
    Point3 user;
    Point3 receiver;
    double receiver_gain_dbi = 0.0;
    double fading_power = 1.0;
};

/// SINR at an access receiver: the serving user plus co-band users seen through
/// the receiver's cosine roll-off, mmWave noise. Emitter fading draws are supplied.
double access_sinr_db(const AccessLink& link, std::span<const Emitter> interferers, const RadioTable& radio);

/// Same for a satellite receiver. Throws OutageNoVisibility when the satellite
/// is below the elevation mask seen from the user.
double link_sinr_satellite_user(const Point3& user, const Point3& satellite, double satellite_fading,
                                std::span<const Emitter> interferers, const RadioTable& radio,
                                double elevation_mask_deg);

class OutageNoVisibility : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

/// Free-space, fading-free SNR of the satellite->HAPS feeder link.
double feeder_snr_db(const Point3& haps, const Point3& satellite, const RadioTable& radio);

/// Index of the visible satellite nearest to `from` (elevation above the mask), if any.
std::optional<std::size_t> nearest_visible_satellite(const Point3& from, std::span<const Point3> satellites,
                                                     double elevation_mask_deg);

/// Covered iff both hops exceed the threshold.
bool relayed_coverage(double sinr_haps_user_db, double sinr_sat_haps_db, double threshold_db);

struct CoveragePoint {
    CoverageMode mode = CoverageMode::direct;
    std::size_t n_haps = 0;
    std::size_t n_sats = 0;
    double threshold_db = 0.0;
    std::size_t covered = 0;
    std::size_t trials = 0;
    double coverage = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

struct CoverageSweep {
    std::vector<CoveragePoint> points;
    std::size_t failed_trials = 0;

    ResultTable table() const;
    std::vector<CoveragePoint> curve(CoverageMode mode, std::size_t n_haps, std::size_t n_sats) const;
    double at(CoverageMode mode, std::size_t n_haps, std::size_t n_sats, double threshold_db) const;
};

/// Monte Carlo coverage per threshold and per (mode, n_haps, n_sats). Each trial
/// draws one SINR per configuration and compares it with every threshold.
CoverageSweep sweep_coverage(const CoverageConfig& config, unsigned threads = 1);

} // namespace ntn
