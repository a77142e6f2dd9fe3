#include "ntn/stats.hpp"

#include "ntn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ntn {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw DomainError("empirical CDF of an empty sample");
    for (double x : sorted_)
        if (!std::isfinite(x)) throw DomainError("empirical CDF sample is not finite");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
    const double n = static_cast<double>(sorted_.size());
    auto k = static_cast<std::size_t>(std::ceil(p * n - 1e-12));
    k = std::clamp<std::size_t>(k, 1, sorted_.size());
    return sorted_[k - 1];
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
            successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

} // namespace ntn
