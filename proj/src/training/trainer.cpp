#include "crossq/training/trainer.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crossq/error.hpp"
#include "crossq/models/linear.hpp"
#include "crossq/models/mps.hpp"
#include "crossq/models/neural_net.hpp"
#include "crossq/models/qcl.hpp"
#include "crossq/training/loss.hpp"
#include "crossq/training/optimizer.hpp"
#include "crossq/util/parallel.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::training {

namespace {

constexpr std::uint64_t kShuffleSalt = 0x5EED5;

class LinearPredictor final : public Predictor {
  public:
    explicit LinearPredictor(linear::LinearModel model) : model_(std::move(model)) {}
    std::string kind() const override { return "linear"; }
    std::size_t parameter_count() const override { return static_cast<std::size_t>(model_.weights.size()) + 1; }
    double predict(std::span<const double> x) const override { return model_.predict(x); }
    Json to_json() const override { return model_.to_json(); }

  private:
    linear::LinearModel model_;
};

class NeuralNetPredictor final : public Predictor {
  public:
    explicit NeuralNetPredictor(nn::NeuralNet net) : net_(std::move(net)) {}
    std::string kind() const override { return "nn"; }
    std::size_t parameter_count() const override { return net_.parameter_count(); }
    double predict(std::span<const double> x) const override { return net_.predict(x); }
    Json to_json() const override { return net_.to_json(); }

  private:
    nn::NeuralNet net_;
};

class QclPredictor final : public Predictor {
  public:
    QclPredictor(qcl::QclModel model, bool symmetric_targets)
        : model_(std::move(model)), symmetric_(symmetric_targets) {}
    std::string kind() const override { return "qcl"; }
    std::size_t parameter_count() const override { return model_.parameter_count(); }
    double predict(std::span<const double> x) const override {
        const double raw = model_.forward(x);
        return symmetric_ ? from_symmetric(raw) : raw;
    }
    Json to_json() const override {
        Json doc = model_.to_json();
        doc["target_rescale"] = symmetric_ ? "to_symmetric" : "none";
        return doc;
    }

  private:
    qcl::QclModel model_;
    bool symmetric_;
};

class MpsPredictor final : public Predictor {
  public:
    explicit MpsPredictor(mps::MpsWeights w) : w_(std::move(w)) {}
    std::string kind() const override { return "tn"; }
    std::size_t parameter_count() const override { return w_.parameter_count(); }
    double predict(std::span<const double> x) const override { return mps::mps_forward(w_, x); }
    Json to_json() const override { return w_.to_json(); }

  private:
    mps::MpsWeights w_;
};

/// Scores drawn afresh for every month; a null strategy for calibration.
class RandomPredictor final : public Predictor {
  public:
    explicit RandomPredictor(std::uint64_t seed) : seed_(seed) {}
    std::string kind() const override { return "random"; }
    std::size_t parameter_count() const override { return 0; }
    double predict(std::span<const double> x) const override {
        std::uint64_t h = seed_;
        for (double v : x) {
            h = mix_seed(h, std::bit_cast<std::uint64_t>(v));
        }
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    }
    std::vector<double> score(const FeatureMatrix &x, YearMonth date) const override {
        Rng rng(mix_seed(seed_, static_cast<std::uint64_t>(date.ordinal())));
        std::vector<double> out(static_cast<std::size_t>(x.rows()));
        for (double &v : out) {
            v = rng.uniform();
        }
        return out;
    }
    Json to_json() const override { return Json{{"seed", seed_}}; }

  private:
    std::uint64_t seed_;
};

struct MpsTrainable {
    mps::MpsWeights w;
    std::vector<double> parameters() const { return w.parameters(); }
    void set_parameters(std::span<const double> p) { w.set_parameters(p); }
    double predict(std::span<const double> x) const { return mps::mps_forward(w, x); }
    double value_and_gradient(std::span<const double> x, std::span<double> g) const {
        return mps::mps_value_and_gradient(w, x, g);
    }
};

std::string describe_loss(int epoch, std::size_t batch, double loss) {
    std::ostringstream os;
    os << "non-finite training loss " << loss << " at epoch " << epoch << ", batch " << batch;
    return os.str();
}

double window_mse(const auto &model, const FeatureMatrix &x, std::span<const double> y, unsigned threads) {
    std::vector<double> pred(y.size());
    parallel_for(y.size(), threads, [&](std::size_t i) {
        pred[i] = model.predict(row_span(x, static_cast<Eigen::Index>(i)));
    });
    return mse(pred, y);
}

/// Shuffled mini-batch descent on the mean squared error.
template <class Model>
std::vector<double> descend(Model &model, const FeatureMatrix &x, std::span<const double> y,
                            const TrainConfig &cfg, unsigned threads) {
    const std::size_t samples = y.size();
    std::vector<double> params = model.parameters();
    const std::size_t count = params.size();
    AdamState adam(count);
    std::int64_t step = 0;

    std::vector<std::size_t> order(samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(cfg.seed, kShuffleSalt));

    const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
    std::vector<double> sample_grads(batch_size * count);
    std::vector<double> sample_values(batch_size);
    std::vector<double> grad(count);
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        std::size_t batch = 0;
        for (std::size_t start = 0; start < samples; start += batch_size, ++batch) {
            const std::size_t size = std::min(batch_size, samples - start);
            parallel_for(size, threads, [&](std::size_t b) {
                const auto row = static_cast<Eigen::Index>(order[start + b]);
                sample_values[b] = model.value_and_gradient(
                    row_span(x, row), std::span<double>(sample_grads).subspan(b * count, count));
            });

            // fixed-order reduction keeps results independent of the thread count
            std::fill(grad.begin(), grad.end(), 0.0);
            double loss = 0.0;
            for (std::size_t b = 0; b < size; ++b) {
                const double residual = sample_values[b] - y[order[start + b]];
                loss += residual * residual;
                const double scale = 2.0 * residual / static_cast<double>(size);
                const double *g = sample_grads.data() + b * count;
                for (std::size_t k = 0; k < count; ++k) {
                    grad[k] += scale * g[k];
                }
            }
            loss /= static_cast<double>(size);
            if (!std::isfinite(loss)) {
                throw NumericalError(describe_loss(epoch + 1, batch + 1, loss));
            }

            if (cfg.optimizer == OptimizerKind::adam) {
                adam_step(params, grad, adam, ++step, cfg);
            } else {
                sgd_step(params, grad, cfg);
            }
            model.set_parameters(params);
        }
        const double epoch_loss = window_mse(model, x, y, threads);
        if (!std::isfinite(epoch_loss)) {
            throw NumericalError(describe_loss(epoch + 1, batch, epoch_loss));
        }
        trace.push_back(epoch_loss);
    }
    return trace;
}

} // namespace

std::string to_string(ModelFamily family) {
    switch (family) {
    case ModelFamily::linear: return "linear";
    case ModelFamily::nn: return "nn";
    case ModelFamily::qcl: return "qcl";
    case ModelFamily::tn: return "tn";
    case ModelFamily::random: return "random";
    }
    return "linear";
}

ModelFamily parse_family(const std::string &name) {
    for (auto f : {ModelFamily::linear, ModelFamily::nn, ModelFamily::qcl, ModelFamily::tn, ModelFamily::random}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw ConfigError("model family '" + name + "' is not one of linear, nn, qcl, tn, random");
}

void ModelSpec::validate(int n_features) const {
    if (n_features < 1) {
        throw ConfigError("at least one feature is required");
    }
    switch (family) {
    case ModelFamily::linear:
    case ModelFamily::random:
        break;
    case ModelFamily::nn:
        if (layer_sizes.size() < 2) {
            throw ConfigError("nn.layer_sizes needs at least two entries");
        }
        if (layer_sizes.front() != n_features) {
            throw ConfigError("nn.layer_sizes[0] = " + std::to_string(layer_sizes.front()) +
                              " does not match the feature count " + std::to_string(n_features));
        }
        if (layer_sizes.back() != 1) {
            throw ConfigError("nn.layer_sizes must end with 1");
        }
        for (int s : layer_sizes) {
            if (s < 1) {
                throw ConfigError("nn.layer_sizes entries must be positive");
            }
        }
        break;
    case ModelFamily::qcl:
        if (depth < 1) {
            throw ConfigError("qcl.depth must be >= 1");
        }
        if (!(tau > 0.0)) {
            throw ConfigError("qcl.tau must be > 0");
        }
        if (n_features > quantum::kMaxDenseQubits) {
            throw ConfigError("qcl supports at most " + std::to_string(quantum::kMaxDenseQubits) +
                              " features (one qubit each), got " + std::to_string(n_features));
        }
        break;
    case ModelFamily::tn:
        if (bond_dim < 1) {
            throw ConfigError("tn.bond_dim must be >= 1");
        }
        if (n_features < 2) {
            throw ConfigError("tn needs at least 2 features");
        }
        if (!(init_noise >= 0.0)) {
            throw ConfigError("tn.init_noise must be >= 0");
        }
        break;
    }
}

ModelSpec make_preset(const std::string &name, int n_features) {
    ModelSpec spec;
    spec.preset = name;
    if (name == "linear") {
        spec.family = ModelFamily::linear;
    } else if (name == "nn1") {
        spec.family = ModelFamily::nn;
        spec.layer_sizes = {n_features, 7, 1};
    } else if (name == "nn2") {
        spec.family = ModelFamily::nn;
        spec.layer_sizes = {n_features, 5, 4, 1};
    } else if (name == "qcl") {
        spec.family = ModelFamily::qcl;
        spec.depth = 3;
    } else if (name == "tn") {
        spec.family = ModelFamily::tn;
        spec.bond_dim = 2;
    } else if (name == "random") {
        spec.family = ModelFamily::random;
    } else {
        throw ConfigError("model: unknown preset '" + name + "' (linear, nn1, nn2, qcl, tn, random, custom)");
    }
    return spec;
}

std::size_t parameter_count(const ModelSpec &spec, int n_features) {
    switch (spec.family) {
    case ModelFamily::linear: return static_cast<std::size_t>(n_features) + (spec.fit_intercept ? 1 : 0);
    case ModelFamily::nn: return nn::NeuralNet::parameter_count(spec.layer_sizes);
    case ModelFamily::qcl: return qcl::QclParameters::count(n_features, spec.depth);
    case ModelFamily::tn: return mps::MpsWeights::parameter_count(n_features, spec.bond_dim);
    case ModelFamily::random: return 0;
    }
    return 0;
}

std::optional<std::size_t> reference_parameter_count(const std::string &preset) {
    if (preset == "nn1") {
        return 92;
    }
    if (preset == "nn2") {
        return 93;
    }
    if (preset == "qcl") {
        return 90;
    }
    if (preset == "tn") {
        return 76;
    }
    return std::nullopt;
}

TargetRescale resolve_rescale(TargetRescale requested, ModelFamily family) {
    if (requested != TargetRescale::automatic) {
        return requested;
    }
    return family == ModelFamily::qcl ? TargetRescale::to_symmetric : TargetRescale::none;
}

TrainedPredictor fit(const ModelSpec &spec, const FeatureMatrix &x, std::span<const double> y,
                     const TrainConfig &cfg, unsigned threads) {
    cfg.validate();
    const int n = static_cast<int>(x.cols());
    spec.validate(n);
    if (x.rows() == 0) {
        throw DataError("empty training window");
    }
    if (static_cast<Eigen::Index>(y.size()) != x.rows()) {
        throw UsageError("target length does not match the number of samples");
    }

    const bool symmetric = resolve_rescale(cfg.target_rescale, spec.family) == TargetRescale::to_symmetric;
    std::vector<double> target(y.begin(), y.end());
    if (symmetric) {
        for (double &v : target) {
            v = to_symmetric(v);
        }
    }

    TrainedPredictor out;
    switch (spec.family) {
    case ModelFamily::linear: {
        auto model = linear::ols_fit(x, target, spec.fit_intercept);
        std::vector<double> pred(target.size());
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pred[i] = model.predict(row_span(x, static_cast<Eigen::Index>(i)));
        }
        out.loss_trace = {mse(pred, target)};
        if (symmetric) {
            // keep predictions on the original target scale
            model.weights *= 0.5;
            model.intercept = 0.5 * (model.intercept + 1.0);
        }
        out.model = std::make_unique<LinearPredictor>(std::move(model));
        break;
    }
    case ModelFamily::nn: {
        auto net = nn::make_nn(spec.layer_sizes, cfg.seed);
        out.loss_trace = descend(net, x, target, cfg, threads);
        if (symmetric) {
            auto &w = net.weight(net.layer_count() - 1);
            auto &b = net.bias(net.layer_count() - 1);
            w *= 0.5;
            b = (b.array() + 1.0) * 0.5;
        }
        out.model = std::make_unique<NeuralNetPredictor>(std::move(net));
        break;
    }
    case ModelFamily::qcl: {
        auto model = qcl::init_qcl(n, spec.depth, spec.tau, cfg.seed, spec.hamiltonian_seed.value_or(cfg.seed));
        out.loss_trace = descend(model, x, target, cfg, threads);
        out.model = std::make_unique<QclPredictor>(std::move(model), symmetric);
        break;
    }
    case ModelFamily::tn: {
        if (symmetric) {
            throw ConfigError("train.target_rescale=to_symmetric is not supported for the tn model");
        }
        MpsTrainable model{mps::init_mps(n, spec.bond_dim, cfg.seed, spec.init_noise)};
        out.loss_trace = descend(model, x, target, cfg, threads);
        out.model = std::make_unique<MpsPredictor>(std::move(model.w));
        break;
    }
    case ModelFamily::random:
        out.model = std::make_unique<RandomPredictor>(cfg.seed);
        break;
    }
    return out;
}

} // namespace crossq::training
