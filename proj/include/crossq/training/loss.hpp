#pragma once

#include <span>

namespace crossq::training {

/// Mean of squared differences; UsageError on empty or mismatched input.
double mse(std::span<const double> pred, std::span<const double> target);

} // namespace crossq::training
