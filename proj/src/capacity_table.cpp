#include "ntn/capacity_table.hpp"

#include "ntn/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ntn {

ErgodicCapacityTable::ErgodicCapacityTable(const FadingModel& fading, std::size_t draws, std::uint64_t seed,
                                           double min_snr_db, double max_snr_db, double step_db)
    : min_db_(min_snr_db), step_db_(step_db) {
    if (draws < 1) throw ConfigError("capacity table needs at least one fading draw");
    if (!(step_db > 0.0) || !(max_snr_db > min_snr_db)) throw ConfigError("capacity table grid is empty");
    validate(fading);
    Rng rng(seed);
    draws_.resize(draws);
    double sum = 0.0;
    for (auto& h : draws_) {
        h = sample_fading_power(fading, rng);
        sum += h;
    }
    mean_power_ = sum / static_cast<double>(draws);

    const auto points = static_cast<std::size_t>(std::floor((max_snr_db - min_snr_db) / step_db)) + 1;
    table_.resize(points);
    for (std::size_t i = 0; i < points; ++i)
        table_[i] = exact(db_to_linear(min_snr_db + step_db * static_cast<double>(i)));
}

double ErgodicCapacityTable::exact(double snr_linear) const {
    double sum = 0.0;
    for (double h : draws_) sum += std::log2(1.0 + snr_linear * h);
    return sum / static_cast<double>(draws_.size());
}

double ErgodicCapacityTable::spectral_efficiency(double snr_db) const {
    if (std::isnan(snr_db)) throw DomainError("spectral_efficiency: SNR is NaN");
    if (snr_db == -std::numeric_limits<double>::infinity()) return 0.0;
    const double pos = (snr_db - min_db_) / step_db_;
    if (pos <= 0.0) {
        // log2(1 + x) ~ x / ln 2 in the low-SNR regime.
        return db_to_linear(snr_db) * mean_power_ / std::numbers::ln2;
    }
    const auto last = table_.size() - 1;
    if (pos >= static_cast<double>(last)) {
        // High SNR: slope of log2(snr) is 1/(10 log10 2) per dB.
        const double top_db = min_db_ + step_db_ * static_cast<double>(last);
        return table_[last] + (snr_db - top_db) / (10.0 * std::log10(2.0));
    }
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
}

} // namespace ntn
