#pragma once

#include <span>
#include <string>
#include <vector>

namespace crossq::backtest {

/// floor(N/5) ids with the highest scores, best first; equal scores are
/// ordered by ascending id. Empty (with a warning) when N < 5.
std::vector<std::string> select_top_quintile(std::span<const std::string> ids, std::span<const double> scores);

/// Equal-weight mean. UsageError on an empty holding set.
double portfolio_return(std::span<const double> returns);

} // namespace crossq::backtest
