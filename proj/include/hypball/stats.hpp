#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hypball::stats {

/// Welford accumulator. Summation order is the call order, so results are
/// bit-stable for a fixed input sequence.
class Running {
public:
    void add(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }
    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double variance() const noexcept {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    /// Standard error of the mean.
    [[nodiscard]] double std_error() const noexcept {
        return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct MeanAndError {
    double value = 0.0;
    double std_error = 0.0;
};

/// Acceptance band for "a >= b" comparisons of estimates: three combined
/// standard errors plus a relative floor for rounding in zero-variance cases.
inline double tolerance(double combined_std_error, double scale) noexcept {
    return 3.0 * combined_std_error + 1e-10 * std::max(1.0, std::abs(scale));
}

/// Delete-one-group jackknife for a smooth functional of group means.
///
/// `groups[g]` holds the per-group sample means of a vector statistic and
/// `weights[g]` the group sizes. `functional` maps a vector of pooled means to a scalar.
MeanAndError jackknife(const std::vector<std::vector<double>>& groups, std::span<const double> weights,
                       const std::function<double(std::span<const double>)>& functional);

}  // namespace hypball::stats
