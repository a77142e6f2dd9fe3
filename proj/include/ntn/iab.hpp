#pragma once

#include "ntn/capacity_table.hpp"
#include "ntn/channel.hpp"
#include "ntn/geometry.hpp"
#include "ntn/result_table.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ntn {

struct IabConfig {
    RadioTable radio;
    double disc_radius_m = 50e3;
    std::vector<double> ring_radii_m{12.5e3, 25e3, 37.5e3};
    std::vector<std::size_t> ring_counts{4, 8, 16};
    double mbs_height_m = 10.0;
    double grid_step_m = 1e3;
    double user_density_per_km2 = 1.0;
    double active_fraction = 0.1;
    ElevationSigmoid sigmoid{};
    double nlos_excess_loss_db = 20.0;
    bool haps_enabled = true;
    std::optional<double> target_rate_bps;
    std::size_t capacity_draws = 10000;
    std::size_t trials = 1;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Node 0 is the MBS; HAPS follow ring by ring.
struct IabNode {
    std::size_t id = 0;
    int layer = 0;
    Node node;
    std::optional<std::size_t> parent;
};

struct IabTopology {
    std::vector<IabNode> nodes;

    std::vector<std::size_t> children(std::size_t id) const;
    /// Number of backhaul links from `id` up to the MBS.
    int depth(std::size_t id) const;
    int max_depth() const;
};

/// MBS at the center; HAPS equally spaced on each ring, ring k rotated by
/// 180/count_k degrees; parent = nearest node of the previous layer.
IabTopology build_topology(const IabConfig& config);

/// Mean-SNR link models of the IAB scenario on the mmWave band.
class IabLinks {
public:
    explicit IabLinks(const IabConfig& config);

    /// Mean received power at a ground point, fading and blockage averaged.
    double mean_rx_dbm(const IabNode& node, const Point3& ground) const;
    /// Downlink access spectral efficiency, bits/s/Hz.
    double access_se(const IabNode& node, const Point3& ground) const;
    /// Uplink spectral efficiency of a user at `ground` towards `node`.
    double uplink_se(const IabNode& node, const Point3& ground) const;
    /// Backhaul spectral efficiency between two nodes.
    double backhaul_se(const IabNode& a, const IabNode& b) const;
    /// Strongest mean-power node for a ground point.
    std::size_t associate(const IabTopology& topology, const Point3& ground) const;

    double bandwidth_hz() const { return config_->radio.mmwave.bandwidth_hz; }

private:
    double se(const IabNode& node, const Point3& ground, double eirp_dbm, double rx_gain_dbi) const;

    const IabConfig* config_;
    ErgodicCapacityTable nakagami_;
    ErgodicCapacityTable shadowed_rician_;
    BlockageModel blockage_;
    double noise_dbm_;
};

struct GridPoint {
    double x_m = 0.0;
    double y_m = 0.0;
    std::size_t node = 0;
    double access_se = 0.0;
};

/// Association of the analysis grid and per-node cell statistics.
struct CellMap {
    std::vector<GridPoint> points;
    double point_area_km2 = 1.0;
    std::vector<double> area_km2;
    std::vector<double> mean_access_se;
};

CellMap map_cells(const IabTopology& topology, const IabLinks& links, double grid_step_m, double disc_radius_m);

struct DemandModel {
    double user_density_per_km2 = 1.0;
    double active_fraction = 0.1;
    std::optional<double> target_rate_bps;
};

/// Shares of each node's transmit resources: access share a_i, and the
/// backhaul share b_i that the parent spends on the link to node i.
struct ResourceAllocation {
    double bandwidth_hz = 0.0;
    double per_user_rate_bps = 0.0;
    double max_rate_bps = 0.0;
    bool saturated = false;
    std::vector<double> demand_users;
    std::vector<double> subtree_demand_users;
    std::vector<double> access_share;
    std::vector<double> backhaul_share;
    std::vector<double> backhaul_se;
    /// a_i + sum of children's b_c.
    std::vector<double> used_share;
};

/// Equal per-user downlink rate: a_i = r N_i / (B SE_i), b_i = r D_i / (B SE_bh_i)
/// with D_i the subtree demand; r is the largest rate with every node's budget <= 1,
/// or the target rate when it fits.
ResourceAllocation allocate_resources(const IabTopology& topology, const CellMap& cells, const IabLinks& links,
                                      const DemandModel& demand);

/// Per-user downlink capacity at every grid point, bits/s.
std::vector<double> downlink_heatmap(const IabTopology& topology, const CellMap& cells,
                                     const ResourceAllocation& allocation);

struct UplinkAggregate {
    std::vector<double> own_bps;
    std::vector<double> aggregate_bps;
    /// Users served by each node (summed over draws in run_iab).
    std::vector<std::size_t> users;
};

/// Per-node uplink rate of the users it serves (access share x mean uplink SE),
/// accumulated up the tree and capped by each backhaul link.
UplinkAggregate uplink_aggregate(const IabTopology& topology, const ResourceAllocation& allocation,
                                 const IabLinks& links, std::span<const Point3> users);

struct IabResult {
    IabTopology topology;
    CellMap cells;
    ResourceAllocation allocation;
    std::vector<double> heatmap_bps;
    UplinkAggregate uplink;
    std::size_t failed_trials = 0;

    double total_downlink_bps() const;
    double total_uplink_bps() const;
    ResultTable heatmap_table() const;
    ResultTable aggregates_table() const;
};

/// Topology, allocation and heat map are deterministic; uplink aggregates are
/// averaged over `config.trials` user draws.
IabResult run_iab(const IabConfig& config, unsigned threads = 1);

} // namespace ntn
