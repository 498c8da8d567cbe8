#include "crossq/models/qcl.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "crossq/error.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::qcl {

using quantum::Axis;
using quantum::StateVector;

quantum::StateVector encode(std::span<const double> x) {
    StateVector state(static_cast<int>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = x[j];
        if (!(std::abs(v) <= 1.0)) {
            throw DataError("feature " + std::to_string(j) + " = " + std::to_string(v) +
                            " outside [-1, 1] required by the encoding circuit");
        }
        const int q = static_cast<int>(j);
        state.rotate(Axis::Y, q, std::asin(v));
        state.rotate(Axis::Z, q, std::acos(v * v));
    }
    return state;
}

QclModel::QclModel(QclParameters params, quantum::RandomHamiltonianSpec hamiltonian)
    : params_(std::move(params)), hamiltonian_(std::move(hamiltonian)) {
    if (params_.depth < 1) {
        throw ConfigError("circuit depth must be >= 1");
    }
    if (params_.n_qubits != hamiltonian_.n_qubits) {
        throw ConfigError("parameter and Hamiltonian qubit counts differ");
    }
    if (params_.theta.size() != QclParameters::count(params_.n_qubits, params_.depth)) {
        throw ConfigError("expected " +
                          std::to_string(QclParameters::count(params_.n_qubits, params_.depth)) +
                          " angles, got " + std::to_string(params_.theta.size()));
    }
    evolution_ = std::make_shared<const quantum::DenseUnitary>(
        quantum::exponentiate_hamiltonian(hamiltonian_));

    for (int layer = 0; layer < params_.depth; ++layer) {
        gates_.push_back(Gate{.is_evolution = true});
        for (int q = 0; q < params_.n_qubits; ++q) {
            gates_.push_back({false, Axis::X, q, params_.index(layer, q, 2)});
            gates_.push_back({false, Axis::Z, q, params_.index(layer, q, 1)});
            gates_.push_back({false, Axis::X, q, params_.index(layer, q, 0)});
        }
    }
}

void QclModel::set_parameters(std::span<const double> theta) {
    if (theta.size() != params_.theta.size()) {
        throw UsageError("expected " + std::to_string(params_.theta.size()) + " angles, got " +
                         std::to_string(theta.size()));
    }
    params_.theta.assign(theta.begin(), theta.end());
}

void QclModel::check_input(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != params_.n_qubits) {
        throw UsageError("input has " + std::to_string(x.size()) + " features, circuit has " +
                         std::to_string(params_.n_qubits) + " qubits");
    }
}

void QclModel::apply_gate(StateVector &state, const Gate &gate, double angle) const {
    if (gate.is_evolution) {
        quantum::apply_unitary_inplace(state, *evolution_);
    } else {
        state.rotate(gate.axis, gate.qubit, angle);
    }
}

double QclModel::run_from(StateVector state, std::size_t first_gate) const {
    for (std::size_t g = first_gate; g < gates_.size(); ++g) {
        apply_gate(state, gates_[g], params_.theta[gates_[g].param]);
    }
    return state.expectation_z(0);
}

double QclModel::forward(std::span<const double> x) const {
    check_input(x);
    return run_from(encode(x), 0);
}

std::vector<double> QclModel::gradient(std::span<const double> x) const {
    std::vector<double> grad(params_.theta.size());
    value_and_gradient(x, grad);
    return grad;
}

double QclModel::value_and_gradient(std::span<const double> x, std::span<double> grad) const {
    check_input(x);
    if (grad.size() != params_.theta.size()) {
        throw UsageError("gradient buffer has wrong length");
    }
    constexpr double shift = std::numbers::pi / 2.0;

    // The state just before gate g is shared by both shifted circuits of that
    // gate, so the prefix is advanced once instead of being rebuilt.
    StateVector prefix = encode(x);
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        const Gate &gate = gates_[g];
        if (!gate.is_evolution) {
            const double angle = params_.theta[gate.param];
            StateVector plus = prefix;
            plus.rotate(gate.axis, gate.qubit, angle + shift);
            StateVector minus = prefix;
            minus.rotate(gate.axis, gate.qubit, angle - shift);
            const double f_plus = run_from(std::move(plus), g + 1);
            const double f_minus = run_from(std::move(minus), g + 1);
            grad[gate.param] = kShiftSign * 0.5 * (f_plus - f_minus);
        }
        apply_gate(prefix, gate, params_.theta[gate.param]);
    }
    return prefix.expectation_z(0);
}

nlohmann::ordered_json QclModel::to_json() const {
    nlohmann::ordered_json doc;
    doc["n_qubits"] = params_.n_qubits;
    doc["depth"] = params_.depth;
    doc["tau"] = hamiltonian_.tau;
    doc["hamiltonian_seed"] = hamiltonian_.seed;
    doc["theta"] = params_.theta;
    return doc;
}

QclModel QclModel::from_json(const nlohmann::ordered_json &doc) {
    QclParameters params;
    params.n_qubits = doc.at("n_qubits").get<int>();
    params.depth = doc.at("depth").get<int>();
    params.theta = doc.at("theta").get<std::vector<double>>();
    auto spec = quantum::make_random_hamiltonian(params.n_qubits, doc.at("tau").get<double>(),
                                                 doc.at("hamiltonian_seed").get<std::uint64_t>());
    return QclModel(std::move(params), std::move(spec));
}

QclModel init_qcl(int n_qubits, int depth, double tau, std::uint64_t seed,
                  std::uint64_t hamiltonian_seed) {
    if (n_qubits < 1 || n_qubits > quantum::kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                          std::to_string(quantum::kMaxQubits) + "]");
    }
    if (depth < 1) {
        throw ConfigError("circuit depth must be >= 1");
    }
    QclParameters params;
    params.n_qubits = n_qubits;
    params.depth = depth;
    params.theta.resize(QclParameters::count(n_qubits, depth));
    Rng rng(mix_seed(seed, 0x51C1));
    for (double &t : params.theta) {
        t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return QclModel(std::move(params), quantum::make_random_hamiltonian(n_qubits, tau, hamiltonian_seed));
}

double qcl_forward(const QclModel &model, std::span<const double> x) { return model.forward(x); }

std::vector<double> qcl_gradient(const QclModel &model, std::span<const double> x) {
    return model.gradient(x);
}

} // namespace crossq::qcl
