#pragma once

#include <cstdint>
#include <vector>

#include "crossq/quantum/state_vector.hpp"

namespace crossq::quantum {

/// Dense exponentiation is refused above this register size (a 2^12 complex
/// matrix is already 256 MiB).
inline constexpr int kMaxDenseQubits = 12;

/// Coefficients of H = sum_j a_j X_j + sum_{j>k} J_jk Z_j Z_k.
struct RandomHamiltonianSpec {
    int n_qubits = 0;
    std::vector<double> fields;    // a_j, length n
    std::vector<double> couplings; // J_jk for j > k, ordered (1,0), (2,0), (2,1), (3,0), ...
    double tau = 1.0;
    std::uint64_t seed = 0;

    /// Position of J_jk (j > k) inside `couplings`.
    static std::size_t coupling_index(int j, int k) {
        return static_cast<std::size_t>(j) * (j - 1) / 2 + static_cast<std::size_t>(k);
    }

    bool operator==(const RandomHamiltonianSpec &) const = default;
};

/// Draws a_j then J_jk uniformly from [-1, 1] with a generator seeded by `seed`.
RandomHamiltonianSpec make_random_hamiltonian(int n_qubits, double tau, std::uint64_t seed);

/// H as a real symmetric matrix in the computational basis.
Eigen::MatrixXd hamiltonian_matrix(const RandomHamiltonianSpec &spec);

/// Exact e^{-i H tau} through the eigendecomposition of the real symmetric H.
DenseUnitary exponentiate_hamiltonian(const RandomHamiltonianSpec &spec);

} // namespace crossq::quantum
