#include "crossq/data/rank.hpp"

#include <algorithm>
#include <numeric>

#include "crossq/error.hpp"

namespace crossq::data {

std::vector<double> rank_transform(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw UsageError("rank transform needs at least two values");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n - 1);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // ranks i .. j-1 share their mean
        const double rank = 0.5 * static_cast<double>(i + j - 1);
        for (std::size_t k = i; k < j; ++k) {
            out[order[k]] = rank * scale;
        }
        i = j;
    }
    return out;
}

} // namespace crossq::data
