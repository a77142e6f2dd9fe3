#pragma once

#include "ntn/capacity_table.hpp"
#include "ntn/channel.hpp"
#include "ntn/errors.hpp"
#include "ntn/geometry.hpp"
#include "ntn/result_table.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ntn {

struct AdhocConfig {
    RadioTable radio;
    std::size_t n_uav = 1000;
    double disc_radius_m = 20e3;
    double comm_range_m = 10e3;
    double beta_per_km = 0.08;
    double olos_penalty_db = 20.0;
    double short_hop_half_angle_deg = 30.0;
    double uav_uav_antenna_gain_dbi = 0.0;
    std::size_t max_hops = 200;
    std::size_t capacity_draws = 10000;
    std::vector<double> distances_km{2, 5, 10, 15, 20, 25, 30};
    std::size_t trials = 2000;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class HopStrategy { long_hop, short_hop, haps_relay };

std::string to_string(HopStrategy s);

class RouteStuck : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class RouteLoop : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

/// Index returned by the next-hop rules when the packet goes straight to the receiver.
inline constexpr std::size_t kReceiver = std::numeric_limits<std::size_t>::max();

/// Long hop: among unvisited candidates within `comm_range_m` of `current`, the
/// one closest to the receiver. The receiver itself when it is within range.
/// `visited` may be empty (nothing visited) or hold one flag per candidate.
std::size_t next_hop_long(const Point3& current, const Point3& receiver, std::span<const Point3> candidates,
                          std::span<const char> visited, double comm_range_m);

/// Short hop: the nearest unvisited candidate inside the cone of `half_angle_deg`
/// around current->receiver and within `comm_range_m`; the receiver when it is
/// in range and no in-cone candidate is nearer.
std::size_t next_hop_short(const Point3& current, const Point3& receiver, std::span<const Point3> candidates,
                           std::span<const char> visited, double half_angle_deg,
                           double comm_range_m = std::numeric_limits<double>::infinity());

struct Hop {
    Point3 from;
    Point3 to;
    double distance_m = 0.0;
    LosState los_state = LosState::los;
    double capacity_bps = 0.0;
    bool via_haps = false;
};

struct RouteResult {
    std::vector<Hop> hops;
    double propagation_latency_s = 0.0;
    double transmission_latency_s = 0.0;
    double total_latency_s = 0.0;
    bool used_haps = false;
};

/// Ergodic link capacities for the ad-hoc links.
class AdhocLinks {
public:
    explicit AdhocLinks(const AdhocConfig& config);

    double uav_uav(double distance_m, LosState state) const;
    double uav_to_haps(double distance_m) const;
    double haps_to_uav(double distance_m) const;
    const Point3& haps_position() const { return haps_; }

private:
    const AdhocConfig* config_;
    ErgodicCapacityTable nakagami_;
    ErgodicCapacityTable shadowed_rician_;
    Point3 haps_;
    double noise_dbm_;
};

/// Store-and-forward route from tx to rx. One uniform per hop decides the
/// blockage state; with HAPS available, the first obstructed hop is replaced by
/// current->HAPS->rx and the route ends.
RouteResult route(const AdhocConfig& config, const AdhocLinks& links, HopStrategy strategy, bool haps_available,
                  const Point3& tx, const Point3& rx, std::span<const Point3> uavs, Rng& rng);

struct LatencyPoint {
    HopStrategy strategy = HopStrategy::long_hop;
    bool haps_available = false;
    double distance_km = 0.0;
    double mean_total_s = 0.0;
    double mean_prop_s = 0.0;
    double mean_tx_s = 0.0;
    double stuck_rate = 0.0;
    std::size_t trials = 0;
};

struct LatencySweep {
    std::vector<LatencyPoint> points;
    std::size_t failed_trials = 0;
    ResultTable table() const;
};

LatencySweep sweep_latency(const AdhocConfig& config, unsigned threads = 1);

} // namespace ntn
