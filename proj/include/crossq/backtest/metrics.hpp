#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace crossq::backtest {

/// Tracking errors below this are treated as zero.
inline constexpr double kZeroTrackingError = 1e-14;

struct Metrics {
    std::size_t months = 0;
    /// prod(1 + alpha)^(12/T) - 1
    double er = 0.0;
    /// sqrt(12/(T-1) * sum (alpha - mean)^2); undefined for T < 2.
    std::optional<double> te;
    /// er / te; undefined when te is undefined or zero.
    std::optional<double> ir;
};

/// UsageError on an empty series.
Metrics compute_metrics(std::span<const double> alphas);

} // namespace crossq::backtest
