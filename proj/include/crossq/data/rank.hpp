#pragma once

#include <span>
#include <vector>

namespace crossq::data {

/// Ascending ranks scaled to [0, 1] by 1/(N-1); tied values share the mean of
/// their rank range. UsageError when fewer than two values are given.
std::vector<double> rank_transform(std::span<const double> values);

} // namespace crossq::data
