#pragma once

#include "ntn/capacity_table.hpp"
#include "ntn/channel.hpp"
#include "ntn/geometry.hpp"
#include "ntn/result_table.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ntn {

enum class Association { cellular, cell_free };

std::string to_string(Association mode);

struct CellfreeConfig {
    RadioTable radio;
    double disc_radius_m = 50e3;
    std::size_t n_uav = 100;
    std::vector<std::size_t> haps_counts{4, 8, 16};
    double user_density_per_km2 = 1.0;
    double active_fraction = 0.1;
    int sub_bands = 10;
    ElevationSigmoid sigmoid{};
    double nlos_excess_loss_db = 20.0;
    std::size_t capacity_draws = 10000;
    double ee_grid_max_mbj = 1000.0;
    double ee_grid_step_mbj = 1.0;
    std::size_t trials = 16;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Access-link candidate seen from one user: UAV index, distance and realized blockage.
struct UavLink {
    std::size_t uav = 0;
    double distance_m = 0.0;
    LosState los_state = LosState::los;
    double mean_rx_dbm = 0.0;
};

/// CELLULAR: nearest UAV. CELL_FREE: strongest mean received power (blockage and
/// antenna gain included, fading averaged out). Returns the position in `links`.
std::size_t associate(std::span<const UavLink> links, Association mode);

/// Capacity over transmit power, Mb/J.
double energy_efficiency(double capacity_bps, double tx_power_dbm);

/// Product over sum; 0 when both are 0.
double ee_total(double ee_access, double ee_backhaul);

struct EnergyRecord {
    double ee_access = 0.0;
    double ee_backhaul = 0.0;
    double ee_total = 0.0;
};

struct EeCurve {
    Association mode = Association::cellular;
    std::size_t n_haps = 0;
    std::vector<EnergyRecord> records;
    std::vector<double> totals() const;
};

struct EeResult {
    std::vector<EeCurve> curves;
    std::size_t failed_trials = 0;

    /// Empirical CDF of ee_total on the configured EE grid.
    ResultTable cdf_table(const CellfreeConfig& config) const;
    /// mode, n_haps, statistic, value.
    ResultTable summary_table() const;
    const EeCurve& curve(Association mode, std::size_t n_haps) const;
};

/// Per-trial sample of users, UAVs and HAPS; every active user contributes one
/// record per (mode, HAPS count).
EeResult simulate_ee_cdf(const CellfreeConfig& config, unsigned threads = 1);

} // namespace ntn
