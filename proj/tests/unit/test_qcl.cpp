#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crossq/error.hpp"
#include "crossq/models/qcl.hpp"
#include "crossq/quantum/hamiltonian.hpp"
#include "crossq/util/rng.hpp"

using namespace crossq;
using quantum::Complex;
using Mat = Eigen::MatrixXcd;

namespace {

Mat rx(double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    Mat m(2, 2);
    m << Complex(c, 0), Complex(0, s), Complex(0, s), Complex(c, 0);
    return m;
}

Mat ry(double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    Mat m(2, 2);
    m << c, s, -s, c;
    return m;
}

Mat rz(double phi) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::polar(1.0, phi / 2);
    m(1, 1) = std::polar(1.0, -phi / 2);
    return m;
}

Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// op acting on `qubit` of an n-qubit register (qubit 0 least significant).
Mat embed(const Mat &op, int qubit, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) {
        out = kron(out, q == qubit ? op : Mat::Identity(2, 2));
    }
    return out;
}

/// Reference circuit assembled from explicit matrices.
double reference_forward(const qcl::QclModel &model, const std::vector<double> &x) {
    const int n = model.n_qubits();
    const auto &p = model.params();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1 << n);
    psi(0) = 1.0;
    for (int j = 0; j < n; ++j) {
        psi = embed(ry(std::asin(x[j])), j, n) * psi;
        psi = embed(rz(std::acos(x[j] * x[j])), j, n) * psi;
    }
    const Mat h = quantum::hamiltonian_matrix(model.hamiltonian()).cast<Complex>();
    Eigen::ComplexEigenSolver<Mat> eig(h);
    const Eigen::VectorXcd phases =
        (eig.eigenvalues() * Complex(0.0, -model.hamiltonian().tau)).array().exp();
    const Mat u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().inverse();
    for (int layer = 0; layer < model.depth(); ++layer) {
        psi = u * psi;
        for (int j = 0; j < n; ++j) {
            const Mat block = rx(p.theta[p.index(layer, j, 0)]) * rz(p.theta[p.index(layer, j, 1)]) *
                              rx(p.theta[p.index(layer, j, 2)]);
            psi = embed(block, j, n) * psi;
        }
    }
    double z = 0.0;
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        z += ((b & 1) ? -1.0 : 1.0) * std::norm(psi(b));
    }
    return z;
}

std::vector<double> draw(Rng &rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double &e : v) {
        e = rng.uniform(lo, hi);
    }
    return v;
}

} // namespace

TEST_CASE("encoding of one qubit gives <Z> = sqrt(1 - x^2)") {
    for (double x : {-1.0, -0.6, 0.0, 0.25, 0.9, 1.0}) {
        const double z = qcl::encode(std::vector<double>{x}).expectation_z(0);
        CHECK(std::abs(z - std::sqrt(1 - x * x)) < 1e-12);
    }
}

TEST_CASE("encoding rejects inputs outside [-1, 1]") {
    CHECK_THROWS_AS(qcl::encode(std::vector<double>{0.1, 1.2}), DataError);
    try {
        qcl::encode(std::vector<double>{0.1, 1.2});
    } catch (const DataError &e) {
        CHECK(std::string(e.what()).find("feature 1") != std::string::npos);
    }
}

TEST_CASE("circuit matches an explicit matrix construction") {
    Rng rng(17);
    for (int n = 1; n <= 3; ++n) {
        for (int depth = 1; depth <= 3; ++depth) {
            qcl::QclModel model = qcl::init_qcl(n, depth, 0.8, static_cast<std::uint64_t>(n * 10 + depth));
            for (int trial = 0; trial < 3; ++trial) {
                model.set_parameters(draw(rng, model.parameter_count(), 0.0, 2 * std::numbers::pi));
                const auto x = draw(rng, static_cast<std::size_t>(n), -1.0, 1.0);
                CHECK(std::abs(model.forward(x) - reference_forward(model, x)) < 1e-12);
            }
        }
    }
}

TEST_CASE("parameter-shift gradient matches central differences") {
    Rng rng(5);
    qcl::QclModel model = qcl::init_qcl(4, 2, 1.0, 3);
    const double eps = 1e-4;
    for (int trial = 0; trial < 5; ++trial) {
        model.set_parameters(draw(rng, model.parameter_count(), 0.0, 2 * std::numbers::pi));
        const auto x = draw(rng, 4, -1.0, 1.0);
        std::vector<double> grad(model.parameter_count());
        const double value = model.value_and_gradient(x, grad);
        CHECK(value == doctest::Approx(model.forward(x)).epsilon(1e-14));
        CHECK(grad == model.gradient(x));
        std::vector<double> theta = model.parameters();
        for (std::size_t i = 0; i < theta.size(); ++i) {
            qcl::QclModel probe = model;
            theta[i] += eps;
            probe.set_parameters(theta);
            const double up = probe.forward(x);
            theta[i] -= 2 * eps;
            probe.set_parameters(theta);
            const double down = probe.forward(x);
            theta[i] += eps;
            CHECK(std::abs(grad[i] - (up - down) / (2 * eps)) < 1e-6);
        }
    }
}

TEST_CASE("preset size has 90 angles") {
    CHECK(qcl::QclParameters::count(10, 3) == 90);
    CHECK(qcl::init_qcl(4, 2, 1.0, 0).parameter_count() == 24);
}

TEST_CASE("readout is bounded and deterministic") {
    const qcl::QclModel a = qcl::init_qcl(3, 2, 1.0, 99);
    const qcl::QclModel b = qcl::init_qcl(3, 2, 1.0, 99);
    CHECK(a.parameters() == b.parameters());
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto x = draw(rng, 3, -1.0, 1.0);
        const double f = a.forward(x);
        CHECK(f == b.forward(x));
        CHECK(std::abs(f) <= 1.0);
    }
    for (double t : a.parameters()) {
        CHECK(t >= 0.0);
        CHECK(t < 2 * std::numbers::pi);
    }
}

TEST_CASE("hamiltonian seed is independent of the angle seed") {
    const qcl::QclModel a = qcl::init_qcl(3, 1, 1.0, 1, 7);
    const qcl::QclModel b = qcl::init_qcl(3, 1, 1.0, 2, 7);
    CHECK(a.hamiltonian() == b.hamiltonian());
    CHECK(a.parameters() != b.parameters());
}

TEST_CASE("json round trip preserves the model") {
    const qcl::QclModel a = qcl::init_qcl(3, 2, 0.7, 4, 12);
    const qcl::QclModel b = qcl::QclModel::from_json(a.to_json());
    CHECK(b.parameters() == a.parameters());
    CHECK(b.hamiltonian() == a.hamiltonian());
    const std::vector<double> x{0.2, -0.4, 0.9};
    CHECK(b.forward(x) == a.forward(x));
}

TEST_CASE("input width is checked") {
    const qcl::QclModel a = qcl::init_qcl(3, 1, 1.0, 0);
    CHECK_THROWS_AS(a.forward(std::vector<double>{0.1, 0.2}), UsageError);
    std::vector<double> theta(5);
    qcl::QclModel b = a;
    CHECK_THROWS_AS(b.set_parameters(theta), UsageError);
}
