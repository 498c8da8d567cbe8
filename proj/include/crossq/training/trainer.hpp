#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crossq/models/predictor.hpp"
#include "crossq/training/train_config.hpp"

namespace crossq::training {

enum class ModelFamily { linear, nn, qcl, tn, random };

std::string to_string(ModelFamily family);
ModelFamily parse_family(const std::string &name);

/// Architecture and initialization of one predictor.
struct ModelSpec {
    ModelFamily family = ModelFamily::linear;
    std::string preset = "linear";

    bool fit_intercept = true;          // linear
    std::vector<int> layer_sizes;       // nn, input size first, output 1 last
    int depth = 3;                      // qcl
    double tau = 1.0;                   // qcl
    std::optional<std::uint64_t> hamiltonian_seed; // qcl, defaults to the run seed
    int bond_dim = 2;                   // tn
    double init_noise = 1e-2;           // tn

    /// ConfigError naming the offending field when inconsistent with n_features.
    void validate(int n_features) const;
};

/// The named configurations: linear, nn1 (n,7,1), nn2 (n,5,4,1), qcl (d=3),
/// tn (m=2), random. Layer inputs follow n_features.
ModelSpec make_preset(const std::string &name, int n_features);

std::size_t parameter_count(const ModelSpec &spec, int n_features);

/// Parameter count quoted for the ten-feature preset in the reference
/// experiment, when it exists.
std::optional<std::size_t> reference_parameter_count(const std::string &preset);

/// The rescale actually applied for this family.
TargetRescale resolve_rescale(TargetRescale requested, ModelFamily family);

struct TrainedPredictor {
    std::unique_ptr<Predictor> model;
    /// Full-window MSE after each epoch on the (possibly rescaled) training
    /// targets. Closed-form fits record a single entry.
    std::vector<double> loss_trace;
};

/// Fits `spec` on one window. Gradient models run `cfg.epochs` shuffled
/// mini-batch passes from a fresh seeded initialization; least squares is
/// solved directly. NumericalError names the epoch, batch and loss when the
/// objective turns non-finite.
TrainedPredictor fit(const ModelSpec &spec, const FeatureMatrix &x, std::span<const double> y,
                     const TrainConfig &cfg, unsigned threads = 1);

} // namespace crossq::training
