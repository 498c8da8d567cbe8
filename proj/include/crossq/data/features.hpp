#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "crossq/data/panel.hpp"

namespace crossq::data {

inline constexpr int kBetaWindow = 60;

/// p_t / p_{t-k} - 1 from a stock's monthly prices; missing when either price
/// is absent.
double momentum(const std::map<YearMonth, double> &prices, YearMonth t, int k_months);

/// log(market value); DataError for non-positive input.
double size_feature(double market_value);

/// OLS slope (with intercept) of stock on market returns. Missing when fewer
/// than `window` pairs are supplied; the last `window` pairs are used.
double beta_feature(std::span<const double> stock_returns, std::span<const double> market_returns,
                    int window = kBetaWindow);

enum class FeatureSource { ingested, momentum, size, beta };

struct FeatureSpec {
    std::string name;
    FeatureSource source = FeatureSource::ingested;
    int months = 0;      // momentum horizon / beta window
    std::string column;  // ingested column (source column of size)

    bool operator==(const FeatureSpec &) const = default;
};

std::string to_string(FeatureSource source);
FeatureSource parse_feature_source(const std::string &name);

/// The ten factor features: value (B/P, E/P, S/P), quality (ROE), momentum
/// (1, 3, 6, 12 months), size (log market value) and 60-month beta.
std::vector<FeatureSpec> default_feature_specs();

/// Rebuilds the feature matrix from `specs`. Derived features at date t use
/// only prices dated <= t and benchmark returns for months ending <= t.
PanelData build_features(const PanelData &raw, const BenchmarkSeries &market,
                         const std::vector<FeatureSpec> &specs);

} // namespace crossq::data
