#include "crossq/backtest/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crossq/error.hpp"
#include "crossq/util/log.hpp"

namespace crossq::backtest {

std::vector<std::string> select_top_quintile(std::span<const std::string> ids, std::span<const double> scores) {
    if (ids.size() != scores.size()) {
        throw UsageError("select_top_quintile: " + std::to_string(ids.size()) + " ids but " +
                         std::to_string(scores.size()) + " scores");
    }
    const std::size_t n = ids.size();
    if (n < 5) {
        log::warn("cross-section of " + std::to_string(n) + " stocks is too small for a quintile");
        return {};
    }
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw NumericalError("select_top_quintile: non-finite score");
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t k = n / 5;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) {
                              return scores[a] > scores[b];
                          }
                          return ids[a] < ids[b];
                      });
    std::vector<std::string> holdings;
    holdings.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        holdings.push_back(ids[order[i]]);
    }
    return holdings;
}

double portfolio_return(std::span<const double> returns) {
    if (returns.empty()) {
        throw UsageError("portfolio_return: empty holdings");
    }
    double sum = 0.0;
    for (double r : returns) {
        sum += r;
    }
    return sum / static_cast<double>(returns.size());
}

} // namespace crossq::backtest
