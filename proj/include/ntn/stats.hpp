#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ntn {

double mean(std::span<const double> xs);

/// Right-continuous empirical CDF, F(x) = #{samples <= x} / n.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    double operator()(double x) const;

    /// Smallest sample s with F(s) >= p, p in (0, 1].
    double quantile(double p) const;

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials`; z = 1.96 gives 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

} // namespace ntn
