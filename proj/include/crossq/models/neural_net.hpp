#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace crossq::nn {

struct NeuralNetGradient {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    /// Same layout as NeuralNet::parameters().
    std::vector<double> flatten() const;
};

/// Feed-forward net: affine maps with ReLU between them and a linear output.
/// W_l is n_{l+1} x n_l.
class NeuralNet {
  public:
    explicit NeuralNet(std::vector<int> layer_sizes);

    const std::vector<int> &layer_sizes() const { return layer_sizes_; }
    std::size_t layer_count() const { return weights_.size(); }

    Eigen::MatrixXd &weight(std::size_t l) { return weights_[l]; }
    const Eigen::MatrixXd &weight(std::size_t l) const { return weights_[l]; }
    Eigen::VectorXd &bias(std::size_t l) { return biases_[l]; }
    const Eigen::VectorXd &bias(std::size_t l) const { return biases_[l]; }

    std::size_t parameter_count() const;
    static std::size_t parameter_count(const std::vector<int> &layer_sizes);

    /// Per layer: W row-major, then b.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> values);

    double predict(std::span<const double> x) const;

    /// upstream * dF/dparams by reverse-mode accumulation; ReLU'(0) = 0.
    NeuralNetGradient gradient(std::span<const double> x, double upstream) const;

    /// predict(x), with dF/dparams written into `grad` in parameters() order.
    double value_and_gradient(std::span<const double> x, std::span<double> grad) const;

    nlohmann::ordered_json to_json() const;
    static NeuralNet from_json(const nlohmann::ordered_json &doc);

  private:
    void check_input(std::span<const double> x) const;

    std::vector<int> layer_sizes_;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
};

/// He initialization: weights ~ N(0, 2 / n_in), biases 0.
NeuralNet make_nn(const std::vector<int> &layer_sizes, std::uint64_t seed);

double nn_forward(const NeuralNet &net, std::span<const double> x);
NeuralNetGradient nn_gradient(const NeuralNet &net, std::span<const double> x, double upstream);

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

} // namespace crossq::nn
