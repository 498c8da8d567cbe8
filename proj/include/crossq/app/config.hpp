#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crossq/backtest/runner.hpp"
#include "crossq/data/synthetic.hpp"
#include "crossq/models/predictor.hpp"
#include "crossq/training/train_config.hpp"
#include "crossq/training/trainer.hpp"

namespace crossq::app {

/// Model section of the run config: a preset plus optional overrides. The
/// input width comes from the data, so the final ModelSpec is resolved late.
struct ModelConfig {
    std::string preset = "linear";
    std::optional<training::ModelFamily> family; // required for preset "custom"
    std::optional<bool> fit_intercept;
    std::optional<std::vector<int>> hidden_layers;
    std::optional<int> depth;
    std::optional<double> tau;
    std::optional<std::uint64_t> hamiltonian_seed;
    std::optional<int> bond_dim;
    std::optional<double> init_noise;

    /// ConfigError when a field does not apply to the chosen family.
    training::ModelSpec resolve(int n_features) const;
};

/// Panel and benchmark CSV paths.
struct DataPaths {
    std::filesystem::path panel;
    std::filesystem::path benchmark;
};

struct RunConfig {
    ModelConfig model;
    training::TrainConfig train;
    std::uint64_t seed = 0;
    int train_months = 36;
    int test_months = 12;
    std::optional<YearMonth> first_month;
    std::optional<YearMonth> last_month;
    bool include_partial = false;
    /// Exactly one of these is set.
    std::optional<DataPaths> paths;
    std::optional<data::SyntheticSpec> synthetic;
    std::filesystem::path output_dir = "out";
    unsigned threads = 1;

    backtest::BacktestConfig backtest_config() const;
    /// Train settings with the run seed applied.
    training::TrainConfig train_config() const;
};

/// Parses and validates a config document. Unknown fields, wrong types and
/// out-of-range values raise ConfigError naming the field.
RunConfig parse_run_config(const Json &doc);
RunConfig load_run_config(const std::filesystem::path &path);

/// Every field with its effective value; parsing the echo yields the same
/// config.
Json to_json(const RunConfig &config);
Json to_json(const data::SyntheticSpec &spec);
data::SyntheticSpec parse_synthetic(const Json &doc);

} // namespace crossq::app
