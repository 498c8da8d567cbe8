#pragma once

#include <cstdint>
#include <string>

namespace crossq::training {

enum class OptimizerKind { adam, sgd };

/// automatic resolves to to_symmetric for the circuit model and none otherwise.
enum class TargetRescale { automatic, none, to_symmetric };

struct TrainConfig {
    OptimizerKind optimizer = OptimizerKind::adam;
    double learning_rate = 1e-2;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int epochs = 20;
    int batch_size = 64;
    std::uint64_t seed = 0;
    TargetRescale target_rescale = TargetRescale::automatic;

    /// ConfigError naming the first invalid field.
    void validate() const;
};

std::string to_string(OptimizerKind kind);
std::string to_string(TargetRescale rescale);
OptimizerKind parse_optimizer(const std::string &name);
TargetRescale parse_target_rescale(const std::string &name);

/// y -> 2y - 1 and its inverse.
inline double to_symmetric(double y) { return 2.0 * y - 1.0; }
inline double from_symmetric(double v) { return 0.5 * (v + 1.0); }

} // namespace crossq::training
