#pragma once

#include "ntn/channel.hpp"

#include <cstdint>
#include <vector>

namespace ntn {

/// Ergodic spectral efficiency E[log2(1 + snr * h)] versus mean SNR, tabulated
/// from one fixed set of fading draws and linearly interpolated. Sharing the
/// draw set keeps the estimate exactly non-decreasing in SNR.
class ErgodicCapacityTable {
public:
    ErgodicCapacityTable(const FadingModel& fading, std::size_t draws, std::uint64_t seed,
                         double min_snr_db = -60.0, double max_snr_db = 90.0, double step_db = 0.05);

    /// bits/s/Hz at `snr_db` (mean SNR before small-scale fading).
    double spectral_efficiency(double snr_db) const;

    double capacity(double bandwidth_hz, double snr_db) const {
        return bandwidth_hz * spectral_efficiency(snr_db);
    }

    double mean_power() const { return mean_power_; }
    std::size_t draws() const { return draws_.size(); }

private:
    double exact(double snr_linear) const;

    std::vector<double> draws_;
    std::vector<double> table_;
    double mean_power_ = 1.0;
    double min_db_;
    double step_db_;
};

} // namespace ntn
