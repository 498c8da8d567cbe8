#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace crossq::app {

/// Analytic gradients against central finite differences over random
/// (input, parameter) fixtures.
struct GradcheckResult {
    std::string model;
    int fixtures = 0;
    std::size_t parameters = 0;
    double epsilon = 0.0;
    double tolerance = 0.0;
    double max_deviation = 0.0;

    bool passed() const { return max_deviation < tolerance; }
    std::string summary() const;
};

/// Parameter-shift rule, inputs in [-1, 1], angles in [0, 2pi).
GradcheckResult gradcheck_qcl(int n_qubits, int depth, int fixtures, std::uint64_t seed, double epsilon = 1e-4,
                              double tolerance = 1e-6);

/// Environment contraction, inputs in [0, 1], site entries N(0, 0.5^2).
GradcheckResult gradcheck_mps(int n_sites, int bond_dim, int fixtures, std::uint64_t seed, double epsilon = 1e-6,
                              double tolerance = 1e-8);

/// Backpropagation at inputs whose pre-activations all sit at least
/// `kink_margin` away from zero, so no difference stencil crosses a kink.
GradcheckResult gradcheck_nn(const std::vector<int> &layer_sizes, int fixtures, std::uint64_t seed,
                             double epsilon = 1e-6, double tolerance = 1e-6, double kink_margin = 1e-3);

} // namespace crossq::app
