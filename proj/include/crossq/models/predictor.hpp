#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "crossq/util/year_month.hpp"

namespace crossq {

using Json = nlohmann::ordered_json;

/// Samples x features, one row per stock-month.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> row_span(const FeatureMatrix &x, Eigen::Index i) {
    return {x.row(i).data(), static_cast<std::size_t>(x.cols())};
}

/// A fitted model that turns a month's feature rows into per-stock scores.
/// Scores are on the target scale; only their order matters to the portfolio.
class Predictor {
  public:
    virtual ~Predictor() = default;

    virtual std::string kind() const = 0;
    virtual std::size_t parameter_count() const = 0;
    virtual double predict(std::span<const double> x) const = 0;

    /// Scores one cross-section. `date` only matters to models whose output is
    /// not a pure function of the features (the random baseline).
    virtual std::vector<double> score(const FeatureMatrix &x, YearMonth date) const;

    virtual Json to_json() const = 0;
};

} // namespace crossq
