#include "crossq/quantum/hamiltonian.hpp"

#include <string>

#include "crossq/error.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::quantum {

RandomHamiltonianSpec make_random_hamiltonian(int n_qubits, double tau, std::uint64_t seed) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    if (!(tau > 0.0)) {
        throw ConfigError("evolution time tau must be > 0");
    }
    RandomHamiltonianSpec spec;
    spec.n_qubits = n_qubits;
    spec.tau = tau;
    spec.seed = seed;
    Rng rng(seed);
    spec.fields.resize(static_cast<std::size_t>(n_qubits));
    for (double &a : spec.fields) {
        a = rng.uniform(-1.0, 1.0);
    }
    spec.couplings.resize(static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2);
    for (double &j : spec.couplings) {
        j = rng.uniform(-1.0, 1.0);
    }
    return spec;
}

Eigen::MatrixXd hamiltonian_matrix(const RandomHamiltonianSpec &spec) {
    const int n = spec.n_qubits;
    if (n < 1 || n > kMaxDenseQubits) {
        throw ConfigError("dense Hamiltonian limited to " + std::to_string(kMaxDenseQubits) +
                          " qubits, got " + std::to_string(n));
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double diag = 0.0;
        for (int j = 1; j < n; ++j) {
            const double zj = ((b >> j) & 1) ? -1.0 : 1.0;
            for (int k = 0; k < j; ++k) {
                const double zk = ((b >> k) & 1) ? -1.0 : 1.0;
                diag += spec.couplings[RandomHamiltonianSpec::coupling_index(j, k)] * zj * zk;
            }
        }
        h(b, b) = diag;
        for (int j = 0; j < n; ++j) {
            h(b ^ (Eigen::Index{1} << j), b) += spec.fields[static_cast<std::size_t>(j)];
        }
    }
    return h;
}

DenseUnitary exponentiate_hamiltonian(const RandomHamiltonianSpec &spec) {
    const Eigen::MatrixXd h = hamiltonian_matrix(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the Hamiltonian did not converge");
    }
    const Eigen::MatrixXd &v = solver.eigenvectors();
    Eigen::VectorXcd phases(v.cols());
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
        const double theta = -solver.eigenvalues()(i) * spec.tau;
        phases(i) = Complex{std::cos(theta), std::sin(theta)};
    }
    const Eigen::MatrixXcd vc = v.cast<Complex>();
    DenseUnitary u;
    u.n_qubits = spec.n_qubits;
    u.matrix = vc * phases.asDiagonal() * vc.transpose();
    return u;
}

} // namespace crossq::quantum
