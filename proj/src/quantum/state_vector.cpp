#include "crossq/quantum/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "crossq/error.hpp"

namespace crossq::quantum {

StateVector::StateVector(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    n_qubits_ = n_qubits;
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw UsageError("amplitude count " + std::to_string(dim) + " is not a power of two >= 2");
    }
    const int n = std::countr_zero(dim);
    if (n > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n) + " exceeds " + std::to_string(kMaxQubits));
    }
    StateVector s;
    s.n_qubits_ = n;
    s.amps_ = std::move(amplitudes);
    return s;
}

double StateVector::squared_norm() const {
    double total = 0.0;
    for (const Complex &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw UsageError("qubit index " + std::to_string(qubit) + " out of range for " +
                         std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::rotate(Axis axis, int qubit, double angle) {
    check_qubit(qubit);
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t dim = amps_.size();

    // e^{i a P/2} = cos(a/2) I + i sin(a/2) P
    switch (axis) {
    case Axis::X: {
        const Complex is{0.0, s};
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Complex a0 = amps_[i];
                const Complex a1 = amps_[i + stride];
                amps_[i] = c * a0 + is * a1;
                amps_[i + stride] = is * a0 + c * a1;
            }
        }
        break;
    }
    case Axis::Y: {
        // i Y = [[0, 1], [-1, 0]]
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Complex a0 = amps_[i];
                const Complex a1 = amps_[i + stride];
                amps_[i] = c * a0 + s * a1;
                amps_[i + stride] = -s * a0 + c * a1;
            }
        }
        break;
    }
    case Axis::Z: {
        const Complex up{c, s};
        const Complex down{c, -s};
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                amps_[i] *= up;
                amps_[i + stride] *= down;
            }
        }
        break;
    }
    }
}

double StateVector::expectation_z(int qubit) const {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    double total = 0.0;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        const double p = std::norm(amps_[b]);
        total += (b & mask) ? -p : p;
    }
    return std::clamp(total, -1.0, 1.0);
}

double DenseUnitary::unitarity_error() const {
    const Eigen::MatrixXcd product = matrix.adjoint() * matrix;
    const auto dim = product.rows();
    return (product - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

DenseUnitary DenseUnitary::identity(int n_qubits) {
    const auto dim = Eigen::Index{1} << n_qubits;
    return {n_qubits, Eigen::MatrixXcd::Identity(dim, dim)};
}

StateVector init_zero_state(int n_qubits) { return StateVector(n_qubits); }

StateVector apply_rotation(StateVector state, Axis axis, int qubit, double angle) {
    state.rotate(axis, qubit, angle);
    return state;
}

void apply_unitary_inplace(StateVector &state, const DenseUnitary &u) {
    if (u.dimension() != state.dimension()) {
        throw UsageError("unitary dimension " + std::to_string(u.dimension()) +
                         " does not match state dimension " + std::to_string(state.dimension()));
    }
    auto amps = state.amplitudes();
    Eigen::Map<Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
    Eigen::VectorXcd out = u.matrix * v;
    v = out;
}

StateVector apply_unitary(StateVector state, const DenseUnitary &u) {
    apply_unitary_inplace(state, u);
    return state;
}

double expectation_z(const StateVector &state, int qubit) { return state.expectation_z(qubit); }

} // namespace crossq::quantum
