#include "crossq/app/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <span>

#include <Eigen/Core>

#include "crossq/error.hpp"
#include "crossq/models/mps.hpp"
#include "crossq/models/neural_net.hpp"
#include "crossq/models/qcl.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::app {

namespace {

using Objective = std::function<double(std::span<const double>)>;

/// max_i |grad_i - (f(p + eps e_i) - f(p - eps e_i)) / 2eps|
double max_fd_deviation(const Objective &f, std::vector<double> params, std::span<const double> grad,
                        double eps) {
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + eps;
        const double up = f(params);
        params[i] = saved - eps;
        const double down = f(params);
        params[i] = saved;
        worst = std::max(worst, std::abs(grad[i] - (up - down) / (2.0 * eps)));
    }
    return worst;
}

std::vector<double> draw(Rng &rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double &e : v) {
        e = rng.uniform(lo, hi);
    }
    return v;
}

void check_fixtures(int fixtures) {
    if (fixtures < 1) {
        throw ConfigError("fixtures must be at least 1, got " + std::to_string(fixtures));
    }
}

/// Smallest |pre-activation| over all hidden units.
double kink_distance(const nn::NeuralNet &net, std::span<const double> x) {
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l + 1 < net.layer_count(); ++l) {
        Eigen::VectorXd z = net.weight(l) * a + net.bias(l);
        margin = std::min(margin, z.cwiseAbs().minCoeff());
        a = z.cwiseMax(0.0);
    }
    return margin;
}

} // namespace

std::string GradcheckResult::summary() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s: %d fixtures, %zu parameters, eps=%.0e, max deviation %.3e (tolerance %.0e) %s",
                  model.c_str(), fixtures, parameters, epsilon, max_deviation, tolerance, passed() ? "PASS" : "FAIL");
    return buf;
}

GradcheckResult gradcheck_qcl(int n_qubits, int depth, int fixtures, std::uint64_t seed, double epsilon,
                              double tolerance) {
    check_fixtures(fixtures);
    GradcheckResult result{"qcl n=" + std::to_string(n_qubits) + " d=" + std::to_string(depth), fixtures, 0,
                           epsilon, tolerance, 0.0};
    Rng rng(mix_seed(seed, 0x6C9C));
    qcl::QclModel model = qcl::init_qcl(n_qubits, depth, 1.0, seed);
    result.parameters = model.parameter_count();
    for (int f = 0; f < fixtures; ++f) {
        model.set_parameters(draw(rng, model.parameter_count(), 0.0, 2.0 * std::numbers::pi));
        const std::vector<double> x = draw(rng, static_cast<std::size_t>(n_qubits), -1.0, 1.0);
        const std::vector<double> grad = model.gradient(x);
        qcl::QclModel probe = model;
        const Objective objective = [&](std::span<const double> theta) {
            probe.set_parameters(theta);
            return probe.forward(x);
        };
        result.max_deviation =
            std::max(result.max_deviation, max_fd_deviation(objective, model.parameters(), grad, epsilon));
    }
    return result;
}

GradcheckResult gradcheck_mps(int n_sites, int bond_dim, int fixtures, std::uint64_t seed, double epsilon,
                              double tolerance) {
    check_fixtures(fixtures);
    GradcheckResult result{"tn n=" + std::to_string(n_sites) + " m=" + std::to_string(bond_dim), fixtures, 0,
                           epsilon, tolerance, 0.0};
    Rng rng(mix_seed(seed, 0x6C9D));
    for (int f = 0; f < fixtures; ++f) {
        mps::MpsWeights w(n_sites, bond_dim);
        std::vector<double> values(w.parameter_count());
        for (double &v : values) {
            v = rng.normal(0.0, 0.5);
        }
        w.set_parameters(values);
        result.parameters = w.parameter_count();
        const std::vector<double> x = draw(rng, static_cast<std::size_t>(n_sites), 0.0, 1.0);
        std::vector<double> grad(w.parameter_count());
        mps::mps_value_and_gradient(w, x, grad);
        mps::MpsWeights probe = w;
        const Objective objective = [&](std::span<const double> p) {
            probe.set_parameters(p);
            return mps::mps_forward(probe, x);
        };
        result.max_deviation = std::max(result.max_deviation, max_fd_deviation(objective, values, grad, epsilon));
    }
    return result;
}

GradcheckResult gradcheck_nn(const std::vector<int> &layer_sizes, int fixtures, std::uint64_t seed, double epsilon,
                             double tolerance, double kink_margin) {
    check_fixtures(fixtures);
    std::string name = "nn [";
    for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
        name += (i ? "," : "") + std::to_string(layer_sizes[i]);
    }
    GradcheckResult result{name + "]", fixtures, 0, epsilon, tolerance, 0.0};
    Rng rng(mix_seed(seed, 0x6C9E));
    constexpr int kMaxDraws = 10000;
    int accepted = 0;
    for (int attempt = 0; accepted < fixtures; ++attempt) {
        if (attempt == kMaxDraws) {
            throw NumericalError("gradcheck_nn: no fixture kept every pre-activation " + std::to_string(kink_margin) +
                                 " away from zero after " + std::to_string(kMaxDraws) + " draws");
        }
        nn::NeuralNet net = nn::make_nn(layer_sizes, mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            for (Eigen::Index i = 0; i < net.bias(l).size(); ++i) {
                net.bias(l)(i) = rng.normal(0.0, 0.1);
            }
        }
        const std::vector<double> x = draw(rng, static_cast<std::size_t>(layer_sizes.front()), 0.0, 1.0);
        if (kink_distance(net, x) < kink_margin) {
            continue;
        }
        ++accepted;
        result.parameters = net.parameter_count();
        std::vector<double> grad(net.parameter_count());
        net.value_and_gradient(x, grad);
        nn::NeuralNet probe = net;
        const Objective objective = [&](std::span<const double> p) {
            probe.set_parameters(p);
            return probe.predict(x);
        };
        result.max_deviation =
            std::max(result.max_deviation, max_fd_deviation(objective, net.parameters(), grad, epsilon));
    }
    return result;
}

} // namespace crossq::app
