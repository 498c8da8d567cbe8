#include "crossq/backtest/metrics.hpp"

#include <cmath>

#include "crossq/error.hpp"

namespace crossq::backtest {

Metrics compute_metrics(std::span<const double> alphas) {
    if (alphas.empty()) {
        throw UsageError("compute_metrics: empty excess-return series");
    }
    Metrics m;
    m.months = alphas.size();
    const double t = static_cast<double>(alphas.size());

    double growth = 1.0;
    double sum = 0.0;
    for (double a : alphas) {
        growth *= 1.0 + a;
        sum += a;
    }
    if (!(growth > 0.0)) {
        throw NumericalError("compute_metrics: cumulative excess growth is not positive");
    }
    m.er = std::pow(growth, 12.0 / t) - 1.0;

    if (alphas.size() >= 2) {
        const double mean = sum / t;
        double ss = 0.0;
        for (double a : alphas) {
            ss += (a - mean) * (a - mean);
        }
        double te = std::sqrt(12.0 / (t - 1.0) * ss);
        if (te < kZeroTrackingError) {
            te = 0.0;
        }
        m.te = te;
        if (te > 0.0) {
            m.ir = m.er / te;
        }
    }
    return m;
}

} // namespace crossq::backtest
