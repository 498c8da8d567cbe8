#include "crossq/training/train_config.hpp"

#include "crossq/error.hpp"

namespace crossq::training {

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("train.epochs must be >= 1");
    }
    if (batch_size < 1) {
        throw ConfigError("train.batch_size must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("train.learning_rate must be > 0");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) {
        throw ConfigError("train.adam_beta1 must lie in [0, 1)");
    }
    if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        throw ConfigError("train.adam_beta2 must lie in [0, 1)");
    }
    if (!(adam_eps > 0.0)) {
        throw ConfigError("train.adam_eps must be > 0");
    }
}

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::adam ? "adam" : "sgd"; }

std::string to_string(TargetRescale rescale) {
    switch (rescale) {
    case TargetRescale::automatic: return "auto";
    case TargetRescale::none: return "none";
    case TargetRescale::to_symmetric: return "to_symmetric";
    }
    return "auto";
}

OptimizerKind parse_optimizer(const std::string &name) {
    if (name == "adam") {
        return OptimizerKind::adam;
    }
    if (name == "sgd") {
        return OptimizerKind::sgd;
    }
    throw ConfigError("train.optimizer: unknown optimizer '" + name + "' (adam, sgd)");
}

TargetRescale parse_target_rescale(const std::string &name) {
    if (name == "auto") {
        return TargetRescale::automatic;
    }
    if (name == "none") {
        return TargetRescale::none;
    }
    if (name == "to_symmetric") {
        return TargetRescale::to_symmetric;
    }
    throw ConfigError("train.target_rescale: unknown value '" + name + "' (auto, none, to_symmetric)");
}

} // namespace crossq::training
