#pragma once

#include <cstdint>
#include <vector>

#include "crossq/data/panel.hpp"

namespace crossq::data {

struct InteractionTerm {
    int j = 0;
    int k = 0;
    double coefficient = 0.0;

    bool operator==(const InteractionTerm &) const = default;
};

/// Planted-signal market. Features are i.i.d. U[-1, 1]; the forward return is
/// market_t + w.x + sum c_jk x_j x_k + noise_sigma * eps.
struct SyntheticSpec {
    int n_stocks = 200;
    int n_months = 120; // months with a realized forward return
    int n_features = 10;
    std::uint64_t seed = 0;
    std::vector<double> linear_weights;
    std::vector<InteractionTerm> interactions;
    double noise_sigma = 0.05;
    double market_drift = 0.005;
    double market_sigma = 0.04;
    double delist_probability = 0.0;
    YearMonth start{2008, 6};
    bool nonlinear = false; // requires a nonzero interaction

    /// ConfigError naming the first invalid field.
    void validate() const;
};

struct SyntheticMarket {
    PanelData panel;
    BenchmarkSeries benchmark;
};

SyntheticMarket generate_synthetic(const SyntheticSpec &spec);

} // namespace crossq::data
