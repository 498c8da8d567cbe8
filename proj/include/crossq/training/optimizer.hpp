#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossq/training/train_config.hpp"

namespace crossq::training {

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;

    explicit AdamState(std::size_t size = 0) : first_moment(size, 0.0), second_moment(size, 0.0) {}
};

/// Bias-corrected Adam update at step t >= 1.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState &state,
               std::int64_t t, const TrainConfig &cfg);

/// params -= learning_rate * grad
void sgd_step(std::span<double> params, std::span<const double> grad, const TrainConfig &cfg);

} // namespace crossq::training
