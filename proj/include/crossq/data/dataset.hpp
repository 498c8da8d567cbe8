#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crossq/data/panel.hpp"
#include "crossq/models/predictor.hpp"

namespace crossq::data {

/// Stacked training rows: features and targets ranked within each month.
struct RankedWindow {
    FeatureMatrix x;
    std::vector<double> y;
    std::vector<YearMonth> dates;
    std::vector<std::string> stock_ids;
};

/// Rows of months [first, last] with every feature and the forward return
/// present. Months with fewer than two such rows are dropped with a warning.
RankedWindow ranked_training_window(const PanelData &panel, YearMonth first, YearMonth last);

/// One scoring cross-section: rows with every feature present, features
/// ranked within the month. forward_returns may hold missing values.
struct RankedMonth {
    YearMonth date;
    std::vector<std::string> stock_ids;
    FeatureMatrix x;
    std::vector<double> forward_returns;
};

/// nullopt (with a warning) when the month is absent or has fewer than two
/// complete rows.
std::optional<RankedMonth> ranked_month(const PanelData &panel, YearMonth date);

} // namespace crossq::data
