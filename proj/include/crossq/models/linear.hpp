#pragma once

#include <span>

#include <Eigen/Core>
#include <json.hpp>

#include "crossq/models/predictor.hpp"

namespace crossq::linear {

inline constexpr double kRidgeFallback = 1e-8;

struct LinearModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;

    double predict(std::span<const double> x) const;

    nlohmann::ordered_json to_json() const;
    static LinearModel from_json(const nlohmann::ordered_json &doc);
};

/// Least squares through the normal equations. A singular Gram matrix is
/// retried once with kRidgeFallback on the diagonal; NumericalError (with the
/// condition estimate) if that also fails. With fit_intercept=false the
/// intercept is pinned to 0.
LinearModel ols_fit(const FeatureMatrix &x, std::span<const double> y, bool fit_intercept = true);

} // namespace crossq::linear
