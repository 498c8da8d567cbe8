#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "crossq/error.hpp"
#include "crossq/models/mps.hpp"
#include "crossq/util/rng.hpp"

using namespace crossq;
using mps::MpsWeights;

namespace {

MpsWeights random_weights(int n, int m, Rng &rng, double scale) {
    MpsWeights w(n, m);
    std::vector<double> v(w.parameter_count());
    for (double &e : v) {
        e = rng.normal(0.0, scale);
    }
    w.set_parameters(v);
    return w;
}

std::vector<double> draw(Rng &rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double &e : x) {
        e = rng.uniform();
    }
    return x;
}

Eigen::MatrixXd slice(const MpsWeights &w, int site, int p) {
    Eigen::MatrixXd a(w.left_dim(site), w.right_dim(site));
    for (int l = 0; l < a.rows(); ++l) {
        for (int r = 0; r < a.cols(); ++r) {
            a(l, r) = w.at(site, p, l, r);
        }
    }
    return a;
}

/// sum over all 2^n physical configurations of prod phi * (A^{i_1} ... A^{i_n}).
double brute_force(const MpsWeights &w, const std::vector<double> &x) {
    const int n = w.sites();
    double total = 0.0;
    for (unsigned config = 0; config < (1u << n); ++config) {
        Eigen::MatrixXd chain = Eigen::MatrixXd::Identity(1, 1);
        double weight = 1.0;
        for (int j = 0; j < n; ++j) {
            const int p = static_cast<int>((config >> j) & 1u);
            chain = chain * slice(w, j, p);
            weight *= p ? x[static_cast<std::size_t>(j)] : 1.0;
        }
        total += weight * chain(0, 0);
    }
    return total;
}

} // namespace

TEST_CASE("parameter counts") {
    CHECK(MpsWeights::parameter_count(10, 2) == 72);
    CHECK(MpsWeights(10, 2).parameter_count() == 72);
    CHECK(MpsWeights::parameter_count(5, 2) == 32);
    CHECK(MpsWeights::parameter_count(2, 3) == 12);
    CHECK_THROWS_AS(MpsWeights(1, 2), ConfigError);
    CHECK_THROWS_AS(MpsWeights(3, 0), ConfigError);
}

TEST_CASE("contraction equals brute-force full-tensor sums") {
    Rng rng(31);
    int cases = 0;
    for (int n = 2; n <= 8; ++n) {
        for (int m = 1; m <= 4; ++m) {
            for (int rep = 0; rep < 2; ++rep, ++cases) {
                const MpsWeights w = random_weights(n, m, rng, 0.6);
                const auto x = draw(rng, n);
                const double f = mps::mps_forward(w, x);
                const auto tensor = mps::mps_to_full_tensor(w);
                CHECK(tensor.size() == (std::size_t{1} << n));
                CHECK(std::abs(f - mps::full_tensor_forward(tensor, x)) < 1e-10);
                CHECK(std::abs(f - brute_force(w, x)) < 1e-10);
            }
        }
    }
    CHECK(cases == 56);
}

TEST_CASE("full tensor component order puts site 0 in the lowest bit") {
    MpsWeights w(3, 1);
    std::vector<double> v(w.parameter_count(), 1.0);
    w.set_parameters(v);
    w.at(1, 1, 0, 0) = 5.0; // T_{i} scales by 5 whenever i_1 = 1
    const auto t = mps::mps_to_full_tensor(w);
    CHECK(t[0] == 1.0);
    CHECK(t[1] == 1.0);
    CHECK(t[2] == 5.0);
    CHECK(t[7] == 5.0);
}

TEST_CASE("analytic gradient matches central differences") {
    Rng rng(8);
    const double eps = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        const MpsWeights w = random_weights(5, 2, rng, 0.5);
        const auto x = draw(rng, 5);
        std::vector<double> grad(w.parameter_count());
        const double f = mps::mps_value_and_gradient(w, x, grad);
        CHECK(std::abs(f - mps::mps_forward(w, x)) < 1e-14);
        std::vector<double> p = w.parameters();
        MpsWeights probe = w;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double saved = p[i];
            p[i] = saved + eps;
            probe.set_parameters(p);
            const double up = mps::mps_forward(probe, x);
            p[i] = saved - eps;
            probe.set_parameters(p);
            const double down = mps::mps_forward(probe, x);
            p[i] = saved;
            CHECK(std::abs(grad[i] - (up - down) / (2 * eps)) < 1e-8);
        }
    }
}

TEST_CASE("sweep order does not change the gradient") {
    Rng rng(9);
    const MpsWeights w = random_weights(6, 3, rng, 0.5);
    const auto x = draw(rng, 6);
    const MpsWeights a = mps::mps_gradient(w, x, mps::Sweep::left_first);
    const MpsWeights b = mps::mps_gradient(w, x, mps::Sweep::right_first);
    const auto pa = a.parameters();
    const auto pb = b.parameters();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(std::abs(pa[i] - pb[i]) < 1e-12);
    }
}

TEST_CASE("output is affine in each input") {
    Rng rng(10);
    const MpsWeights w = random_weights(4, 2, rng, 0.7);
    auto x = draw(rng, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        x[j] = 0.0;
        const double f0 = mps::mps_forward(w, x);
        x[j] = 1.0;
        const double f1 = mps::mps_forward(w, x);
        x[j] = 0.3;
        CHECK(std::abs(mps::mps_forward(w, x) - (0.7 * f0 + 0.3 * f1)) < 1e-12);
    }
}

TEST_CASE("bond gauge transformations leave the output unchanged") {
    Rng rng(12);
    MpsWeights w = random_weights(4, 2, rng, 0.7);
    const auto x = draw(rng, 4);
    const double before = mps::mps_forward(w, x);
    Eigen::Matrix2d g;
    g << 1.3, 0.4, -0.2, 0.9;
    const Eigen::Matrix2d g_inv = g.inverse();
    // A1 -> A1 G, A2 -> G^-1 A2 on the bond between sites 1 and 2
    for (int p = 0; p < 2; ++p) {
        const Eigen::MatrixXd a1 = slice(w, 1, p) * g;
        const Eigen::MatrixXd a2 = g_inv * slice(w, 2, p);
        for (int l = 0; l < 2; ++l) {
            for (int r = 0; r < 2; ++r) {
                w.at(1, p, l, r) = a1(l, r);
                w.at(2, p, l, r) = a2(l, r);
            }
        }
    }
    CHECK(std::abs(mps::mps_forward(w, x) - before) < 1e-12);
}

TEST_CASE("near-product initialization") {
    const MpsWeights exact = mps::init_mps(6, 3, 1, 0.0);
    Rng rng(2);
    for (int i = 0; i < 5; ++i) {
        CHECK(mps::mps_forward(exact, draw(rng, 6)) == doctest::Approx(1.0).epsilon(1e-15));
    }
    const MpsWeights a = mps::init_mps(6, 3, 1);
    const MpsWeights b = mps::init_mps(6, 3, 1);
    CHECK(a == b);
    CHECK_FALSE(a == mps::init_mps(6, 3, 2));
    CHECK(a.at(2, 0, 1, 1) == 1.0);
    CHECK(std::abs(a.at(2, 1, 1, 1)) < 0.1);
}

TEST_CASE("json round trip") {
    Rng rng(3);
    const MpsWeights w = random_weights(5, 2, rng, 1.0);
    CHECK(MpsWeights::from_json(w.to_json()) == w);
}

TEST_CASE("input width is checked") {
    const MpsWeights w(4, 2);
    CHECK_THROWS_AS(mps::mps_forward(w, std::vector<double>{0.1, 0.2}), UsageError);
}
