#include "crossq/training/optimizer.hpp"

#include <cmath>

#include "crossq/error.hpp"

namespace crossq::training {

void adam_step(std::span<double> params, std::span<const double> grad, AdamState &state,
               std::int64_t t, const TrainConfig &cfg) {
    if (params.size() != grad.size() || state.first_moment.size() != params.size() ||
        state.second_moment.size() != params.size()) {
        throw UsageError("adam_step: parameter, gradient and moment sizes differ");
    }
    if (t < 1) {
        throw UsageError("adam_step: step counter must start at 1");
    }
    const double b1 = cfg.adam_beta1;
    const double b2 = cfg.adam_beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double &m = state.first_moment[i];
        double &v = state.second_moment[i];
        m = b1 * m + (1.0 - b1) * grad[i];
        v = b2 * v + (1.0 - b2) * grad[i] * grad[i];
        const double m_hat = m / correction1;
        const double v_hat = v / correction2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    }
}

void sgd_step(std::span<double> params, std::span<const double> grad, const TrainConfig &cfg) {
    if (params.size() != grad.size()) {
        throw UsageError("sgd_step: parameter and gradient sizes differ");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] -= cfg.learning_rate * grad[i];
    }
}

} // namespace crossq::training
