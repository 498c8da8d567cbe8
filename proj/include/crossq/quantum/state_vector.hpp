#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace crossq::quantum {

using Complex = std::complex<double>;

enum class Axis { X, Y, Z };

/// Largest register the dense simulator will allocate.
inline constexpr int kMaxQubits = 16;

/// Dense 2^n-amplitude state. Qubit j is bit j of the basis index, so qubit 0
/// is the least significant bit.
class StateVector {
  public:
    /// |0...0> on n qubits; throws ConfigError outside [1, kMaxQubits].
    explicit StateVector(int n_qubits);

    /// Adopts raw amplitudes; the length must be a power of two.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amps_.size(); }

    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }

    double squared_norm() const;

    /// In-place e^{+i angle P_q / 2}.
    void rotate(Axis axis, int qubit, double angle);

    /// <Z_q> = sum_b (+-1)|a_b|^2, + when bit q of b is clear.
    double expectation_z(int qubit) const;

  private:
    StateVector() = default;
    void check_qubit(int qubit) const;

    int n_qubits_ = 0;
    std::vector<Complex> amps_;
};

/// A materialized 2^n x 2^n unitary.
struct DenseUnitary {
    int n_qubits = 0;
    Eigen::MatrixXcd matrix;

    std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }

    DenseUnitary adjoint() const { return {n_qubits, matrix.adjoint()}; }

    /// max |(U^dagger U - I)_ij|.
    double unitarity_error() const;

    static DenseUnitary identity(int n_qubits);
};

StateVector init_zero_state(int n_qubits);

/// Value-returning form of StateVector::rotate.
StateVector apply_rotation(StateVector state, Axis axis, int qubit, double angle);

/// In-place matrix-vector product; throws UsageError on dimension mismatch.
void apply_unitary_inplace(StateVector &state, const DenseUnitary &u);

StateVector apply_unitary(StateVector state, const DenseUnitary &u);

double expectation_z(const StateVector &state, int qubit);

} // namespace crossq::quantum
