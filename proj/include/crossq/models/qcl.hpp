#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "crossq/quantum/hamiltonian.hpp"
#include "crossq/quantum/state_vector.hpp"

namespace crossq::qcl {

/// Sign applied to the two-point parameter-shift difference. With rotations
/// written as e^{+i a P/2} the expectation is A + B cos(a) + C sin(a), whose
/// derivative is +1/2 [F(a + pi/2) - F(a - pi/2)]; the unit tests re-derive it
/// against finite differences.
inline constexpr double kShiftSign = 1.0;

/// Rotation angles of the depth-d ansatz, stored layer-major as
/// theta[layer][qubit][slot]. The per-qubit block is R_X(slot 0) R_Z(slot 1)
/// R_X(slot 2) as an operator product, so slot 2 acts on the state first.
/// Layer 0 is applied first.
struct QclParameters {
    int n_qubits = 0;
    int depth = 0;
    std::vector<double> theta;

    static std::size_t count(int n_qubits, int depth) {
        return 3 * static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(depth);
    }

    std::size_t index(int layer, int qubit, int slot) const {
        return (static_cast<std::size_t>(layer) * n_qubits + qubit) * 3 + slot;
    }
};

/// V(x) |0...0>: per qubit R_Y(asin x_j) then R_Z(acos x_j^2).
/// Throws DataError naming the feature when |x_j| > 1.
quantum::StateVector encode(std::span<const double> x);

class QclModel {
  public:
    QclModel(QclParameters params, quantum::RandomHamiltonianSpec hamiltonian);

    int n_qubits() const { return params_.n_qubits; }
    int depth() const { return params_.depth; }
    std::size_t parameter_count() const { return params_.theta.size(); }

    const QclParameters &params() const { return params_; }
    const quantum::RandomHamiltonianSpec &hamiltonian() const { return hamiltonian_; }
    const quantum::DenseUnitary &evolution() const { return *evolution_; }

    std::vector<double> parameters() const { return params_.theta; }
    void set_parameters(std::span<const double> theta);

    /// <Z_1> of the output state.
    double forward(std::span<const double> x) const;

    /// Parameter-shift gradient of forward(x); 2 shifted circuits per angle.
    std::vector<double> gradient(std::span<const double> x) const;

    /// forward(x), with the parameter-shift gradient written into `grad`.
    double value_and_gradient(std::span<const double> x, std::span<double> grad) const;

    double predict(std::span<const double> x) const { return forward(x); }

    nlohmann::ordered_json to_json() const;
    static QclModel from_json(const nlohmann::ordered_json &doc);

  private:
    struct Gate {
        bool is_evolution = false;
        quantum::Axis axis = quantum::Axis::X;
        int qubit = 0;
        std::size_t param = 0;
    };

    void check_input(std::span<const double> x) const;
    void apply_gate(quantum::StateVector &state, const Gate &gate, double angle) const;
    double run_from(quantum::StateVector state, std::size_t first_gate) const;

    QclParameters params_;
    quantum::RandomHamiltonianSpec hamiltonian_;
    std::shared_ptr<const quantum::DenseUnitary> evolution_;
    std::vector<Gate> gates_;
};

/// Angles uniform in [0, 2pi) from `seed`; the Hamiltonian is drawn from
/// `hamiltonian_seed` and its propagator is built once and shared.
QclModel init_qcl(int n_qubits, int depth, double tau, std::uint64_t seed,
                  std::uint64_t hamiltonian_seed);

inline QclModel init_qcl(int n_qubits, int depth, double tau, std::uint64_t seed) {
    return init_qcl(n_qubits, depth, tau, seed, seed);
}

double qcl_forward(const QclModel &model, std::span<const double> x);
std::vector<double> qcl_gradient(const QclModel &model, std::span<const double> x);

} // namespace crossq::qcl
