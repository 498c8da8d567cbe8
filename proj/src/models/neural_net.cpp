#include "crossq/models/neural_net.hpp"

#include <cmath>
#include <string>

#include "crossq/error.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::nn {

std::vector<double> NeuralNetGradient::flatten() const {
    std::vector<double> flat;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto &w = weights[l];
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                flat.push_back(w(i, j));
            }
        }
        flat.insert(flat.end(), biases[l].data(), biases[l].data() + biases[l].size());
    }
    return flat;
}

NeuralNet::NeuralNet(std::vector<int> layer_sizes) : layer_sizes_(std::move(layer_sizes)) {
    if (layer_sizes_.size() < 2) {
        throw ConfigError("a network needs at least an input and an output layer");
    }
    if (layer_sizes_.back() != 1) {
        throw ConfigError("the output layer must have exactly one unit");
    }
    for (int s : layer_sizes_) {
        if (s < 1) {
            throw ConfigError("layer sizes must be positive");
        }
    }
    for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
        weights_.push_back(Eigen::MatrixXd::Zero(layer_sizes_[l + 1], layer_sizes_[l]));
        biases_.push_back(Eigen::VectorXd::Zero(layer_sizes_[l + 1]));
    }
}

std::size_t NeuralNet::parameter_count(const std::vector<int> &layer_sizes) {
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        total += static_cast<std::size_t>(layer_sizes[l + 1]) * (layer_sizes[l] + 1);
    }
    return total;
}

std::size_t NeuralNet::parameter_count() const { return parameter_count(layer_sizes_); }

std::vector<double> NeuralNet::parameters() const {
    return NeuralNetGradient{weights_, biases_}.flatten();
}

void NeuralNet::set_parameters(std::span<const double> values) {
    if (values.size() != parameter_count()) {
        throw UsageError("expected " + std::to_string(parameter_count()) + " network parameters, got " +
                         std::to_string(values.size()));
    }
    std::size_t k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        auto &w = weights_[l];
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                w(i, j) = values[k++];
            }
        }
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) {
            biases_[l](i) = values[k++];
        }
    }
}

void NeuralNet::check_input(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != layer_sizes_.front()) {
        throw UsageError("input has " + std::to_string(x.size()) + " features, network expects " +
                         std::to_string(layer_sizes_.front()));
    }
}

double NeuralNet::predict(std::span<const double> x) const {
    check_input(x);
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Eigen::VectorXd z = weights_[l] * a + biases_[l];
        if (l + 1 < weights_.size()) {
            a = z.unaryExpr([](double v) { return relu(v); });
        } else {
            a = std::move(z);
        }
    }
    return a(0);
}

NeuralNetGradient NeuralNet::gradient(std::span<const double> x, double upstream) const {
    check_input(x);
    const std::size_t layers = weights_.size();
    std::vector<Eigen::VectorXd> activations;
    std::vector<Eigen::VectorXd> pre;
    activations.reserve(layers + 1);
    pre.reserve(layers);
    activations.emplace_back(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
    for (std::size_t l = 0; l < layers; ++l) {
        pre.push_back(weights_[l] * activations.back() + biases_[l]);
        if (l + 1 < layers) {
            activations.push_back(pre.back().unaryExpr([](double v) { return relu(v); }));
        }
    }

    NeuralNetGradient g;
    g.weights.resize(layers);
    g.biases.resize(layers);
    Eigen::VectorXd delta = Eigen::VectorXd::Constant(1, upstream);
    for (std::size_t l = layers; l-- > 0;) {
        g.weights[l] = delta * activations[l].transpose();
        g.biases[l] = delta;
        if (l > 0) {
            Eigen::VectorXd back = weights_[l].transpose() * delta;
            for (Eigen::Index i = 0; i < back.size(); ++i) {
                if (!(pre[l - 1](i) > 0.0)) {
                    back(i) = 0.0;
                }
            }
            delta = std::move(back);
        }
    }
    return g;
}

double NeuralNet::value_and_gradient(std::span<const double> x, std::span<double> grad) const {
    if (grad.size() != parameter_count()) {
        throw UsageError("gradient buffer has wrong length");
    }
    const auto flat = gradient(x, 1.0).flatten();
    std::copy(flat.begin(), flat.end(), grad.begin());
    return predict(x);
}

nlohmann::ordered_json NeuralNet::to_json() const {
    nlohmann::ordered_json doc;
    doc["layer_sizes"] = layer_sizes_;
    doc["values"] = parameters();
    return doc;
}

NeuralNet NeuralNet::from_json(const nlohmann::ordered_json &doc) {
    NeuralNet net(doc.at("layer_sizes").get<std::vector<int>>());
    net.set_parameters(doc.at("values").get<std::vector<double>>());
    return net;
}

NeuralNet make_nn(const std::vector<int> &layer_sizes, std::uint64_t seed) {
    NeuralNet net(layer_sizes);
    Rng rng(seed);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const double scale = std::sqrt(2.0 / layer_sizes[l]);
        auto &w = net.weight(l);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                w(i, j) = scale * rng.normal();
            }
        }
    }
    return net;
}

double nn_forward(const NeuralNet &net, std::span<const double> x) { return net.predict(x); }

NeuralNetGradient nn_gradient(const NeuralNet &net, std::span<const double> x, double upstream) {
    return net.gradient(x, upstream);
}

} // namespace crossq::nn
