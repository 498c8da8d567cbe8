#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crossq/util/year_month.hpp"

namespace crossq::data {

/// Missing numeric values are quiet NaNs.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

struct Observation {
    std::string stock_id;
    double price = kMissing;
    std::vector<double> features;
    /// (p_{t+1} - p_t) / p_t, missing unless both months have a price.
    double forward_return = kMissing;

    bool operator==(const Observation &other) const;
};

/// One month of the panel; rows sorted by stock id.
struct CrossSection {
    YearMonth date;
    std::vector<Observation> rows;

    const Observation *find(const std::string &stock_id) const;
    bool operator==(const CrossSection &) const = default;
};

/// Monthly cross-sections in ascending date order. Universes may differ
/// between months.
struct PanelData {
    std::vector<std::string> feature_names;
    std::vector<CrossSection> sections;

    std::size_t n_features() const { return feature_names.size(); }
    const CrossSection *find(YearMonth date) const;
    std::optional<YearMonth> first_date() const;
    std::optional<YearMonth> last_date() const;

    /// Checks ordering, uniqueness, widths and the forward-return identity;
    /// throws DataError describing the first violation.
    void validate() const;

    bool operator==(const PanelData &) const = default;
};

/// Benchmark return over the month that follows each date (aligned with the
/// panel's forward returns).
struct BenchmarkSeries {
    std::map<YearMonth, double> returns;

    std::optional<double> at(YearMonth date) const;
    bool operator==(const BenchmarkSeries &) const = default;
};

/// (p1 - p0) / p0
inline double simple_return(double p0, double p1) { return (p1 - p0) / p0; }

/// Fills every forward return from consecutive monthly prices. A return is
/// missing when the stock has no price in the next calendar month. DataError
/// naming (stock, date) on a non-positive price.
PanelData compute_forward_returns(PanelData panel);

/// Equal-weight mean forward return of each month's universe.
BenchmarkSeries equal_weight_benchmark(const PanelData &panel);

} // namespace crossq::data
