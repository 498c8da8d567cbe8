#include "crossq/training/loss.hpp"

#include "crossq/error.hpp"

namespace crossq::training {

double mse(std::span<const double> pred, std::span<const double> target) {
    if (pred.empty()) {
        throw UsageError("mse of an empty sample");
    }
    if (pred.size() != target.size()) {
        throw UsageError("mse inputs differ in length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        total += d * d;
    }
    return total / static_cast<double>(pred.size());
}

} // namespace crossq::training
