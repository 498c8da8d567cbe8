#include "crossq/models/mps.hpp"

#include <string>

#include "crossq/error.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::mps {

namespace {

void check_input(const MpsWeights &w, std::span<const double> x) {
    if (static_cast<int>(x.size()) != w.sites()) {
        throw UsageError("input has " + std::to_string(x.size()) + " features, MPS has " +
                         std::to_string(w.sites()) + " sites");
    }
}

// Site matrix contracted with phi(x) = (1, x): M = A[0] + x A[1].
std::vector<double> site_matrix(const MpsWeights &w, int k, double x) {
    const int rows = w.left_dim(k);
    const int cols = w.right_dim(k);
    std::vector<double> m(static_cast<std::size_t>(rows * cols));
    for (int l = 0; l < rows; ++l) {
        for (int r = 0; r < cols; ++r) {
            m[static_cast<std::size_t>(l * cols + r)] = w.at(k, 0, l, r) + x * w.at(k, 1, l, r);
        }
    }
    return m;
}

// row vector (len rows) times matrix (rows x cols)
std::vector<double> left_multiply(std::span<const double> v, std::span<const double> m, int cols) {
    const int rows = static_cast<int>(v.size());
    std::vector<double> out(static_cast<std::size_t>(cols), 0.0);
    for (int l = 0; l < rows; ++l) {
        for (int r = 0; r < cols; ++r) {
            out[static_cast<std::size_t>(r)] += v[static_cast<std::size_t>(l)] * m[static_cast<std::size_t>(l * cols + r)];
        }
    }
    return out;
}

// matrix (rows x cols) times column vector (len cols)
std::vector<double> right_multiply(std::span<const double> m, int rows, std::span<const double> v) {
    const int cols = static_cast<int>(v.size());
    std::vector<double> out(static_cast<std::size_t>(rows), 0.0);
    for (int l = 0; l < rows; ++l) {
        for (int r = 0; r < cols; ++r) {
            out[static_cast<std::size_t>(l)] += m[static_cast<std::size_t>(l * cols + r)] * v[static_cast<std::size_t>(r)];
        }
    }
    return out;
}

std::vector<std::vector<double>> left_environments(const MpsWeights &w, std::span<const double> x) {
    const int n = w.sites();
    std::vector<std::vector<double>> left(static_cast<std::size_t>(n));
    left[0] = {1.0};
    for (int k = 1; k < n; ++k) {
        left[k] = left_multiply(left[k - 1], site_matrix(w, k - 1, x[k - 1]), w.right_dim(k - 1));
    }
    return left;
}

std::vector<std::vector<double>> right_environments(const MpsWeights &w, std::span<const double> x) {
    const int n = w.sites();
    std::vector<std::vector<double>> right(static_cast<std::size_t>(n));
    right[n - 1] = {1.0};
    for (int k = n - 2; k >= 0; --k) {
        right[k] = right_multiply(site_matrix(w, k + 1, x[k + 1]), w.left_dim(k + 1), right[k + 1]);
    }
    return right;
}

void fill_site_gradient(MpsWeights &grad, int k, double xk, std::span<const double> left,
                        std::span<const double> right) {
    const double phi[2] = {1.0, xk};
    for (int p = 0; p < 2; ++p) {
        for (std::size_t l = 0; l < left.size(); ++l) {
            for (std::size_t r = 0; r < right.size(); ++r) {
                grad.at(k, p, static_cast<int>(l), static_cast<int>(r)) = phi[p] * left[l] * right[r];
            }
        }
    }
}

} // namespace

MpsWeights::MpsWeights(int n_sites, int bond_dim) : n_sites_(n_sites), bond_dim_(bond_dim) {
    if (n_sites < 2) {
        throw ConfigError("an MPS needs at least 2 sites, got " + std::to_string(n_sites));
    }
    if (bond_dim < 1) {
        throw ConfigError("bond dimension must be >= 1, got " + std::to_string(bond_dim));
    }
    tensors_.resize(static_cast<std::size_t>(n_sites));
    for (int k = 0; k < n_sites; ++k) {
        tensors_[k].assign(static_cast<std::size_t>(2 * left_dim(k) * right_dim(k)), 0.0);
    }
}

double &MpsWeights::at(int site, int p, int l, int r) {
    const int cols = right_dim(site);
    return tensors_[static_cast<std::size_t>(site)]
                   [static_cast<std::size_t>((p * left_dim(site) + l) * cols + r)];
}

double MpsWeights::at(int site, int p, int l, int r) const {
    const int cols = right_dim(site);
    return tensors_[static_cast<std::size_t>(site)]
                   [static_cast<std::size_t>((p * left_dim(site) + l) * cols + r)];
}

std::size_t MpsWeights::parameter_count(int n_sites, int bond_dim) {
    const auto m = static_cast<std::size_t>(bond_dim);
    return 4 * m + static_cast<std::size_t>(n_sites - 2) * 2 * m * m;
}

std::size_t MpsWeights::parameter_count() const { return parameter_count(n_sites_, bond_dim_); }

std::vector<double> MpsWeights::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto &t : tensors_) {
        flat.insert(flat.end(), t.begin(), t.end());
    }
    return flat;
}

void MpsWeights::set_parameters(std::span<const double> values) {
    if (values.size() != parameter_count()) {
        throw UsageError("expected " + std::to_string(parameter_count()) + " MPS parameters, got " +
                         std::to_string(values.size()));
    }
    std::size_t offset = 0;
    for (auto &t : tensors_) {
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), t.size(), t.begin());
        offset += t.size();
    }
}

nlohmann::ordered_json MpsWeights::to_json() const {
    nlohmann::ordered_json doc;
    doc["sites"] = n_sites_;
    doc["bond_dim"] = bond_dim_;
    auto shapes = nlohmann::ordered_json::array();
    for (int k = 0; k < n_sites_; ++k) {
        shapes.push_back({2, left_dim(k), right_dim(k)});
    }
    doc["shapes"] = std::move(shapes);
    doc["values"] = parameters();
    return doc;
}

MpsWeights MpsWeights::from_json(const nlohmann::ordered_json &doc) {
    MpsWeights w(doc.at("sites").get<int>(), doc.at("bond_dim").get<int>());
    w.set_parameters(doc.at("values").get<std::vector<double>>());
    return w;
}

double mps_forward(const MpsWeights &w, std::span<const double> x) {
    check_input(w, x);
    std::vector<double> v{1.0};
    for (int k = 0; k < w.sites(); ++k) {
        v = left_multiply(v, site_matrix(w, k, x[k]), w.right_dim(k));
    }
    return v[0];
}

MpsWeights mps_gradient(const MpsWeights &w, std::span<const double> x, Sweep order) {
    check_input(w, x);
    const int n = w.sites();
    MpsWeights grad(n, w.bond_dim());
    if (order == Sweep::left_first) {
        const auto left = left_environments(w, x);
        std::vector<double> right{1.0};
        for (int k = n - 1; k >= 0; --k) {
            fill_site_gradient(grad, k, x[k], left[k], right);
            if (k > 0) {
                right = right_multiply(site_matrix(w, k, x[k]), w.left_dim(k), right);
            }
        }
    } else {
        const auto right = right_environments(w, x);
        std::vector<double> left{1.0};
        for (int k = 0; k < n; ++k) {
            fill_site_gradient(grad, k, x[k], left, right[k]);
            if (k + 1 < n) {
                left = left_multiply(left, site_matrix(w, k, x[k]), w.right_dim(k));
            }
        }
    }
    return grad;
}

double mps_value_and_gradient(const MpsWeights &w, std::span<const double> x, std::span<double> grad) {
    check_input(w, x);
    if (grad.size() != w.parameter_count()) {
        throw UsageError("gradient buffer has wrong length");
    }
    const int n = w.sites();
    const auto left = left_environments(w, x);
    std::vector<double> right{1.0};
    std::vector<std::size_t> offsets(static_cast<std::size_t>(n), 0);
    for (int k = 1; k < n; ++k) {
        offsets[k] = offsets[k - 1] + w.site(k - 1).size();
    }
    double value = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        const double phi[2] = {1.0, x[k]};
        const int rows = w.left_dim(k);
        const int cols = w.right_dim(k);
        for (int p = 0; p < 2; ++p) {
            for (int l = 0; l < rows; ++l) {
                for (int r = 0; r < cols; ++r) {
                    grad[offsets[k] + static_cast<std::size_t>((p * rows + l) * cols + r)] =
                        phi[p] * left[k][l] * right[r];
                }
            }
        }
        right = right_multiply(site_matrix(w, k, x[k]), rows, right);
        if (k == 0) {
            value = right[0];
        }
    }
    return value;
}

std::vector<double> mps_to_full_tensor(const MpsWeights &w) {
    const int n = w.sites();
    if (n > kMaxFullTensorSites) {
        throw ConfigError("refusing to materialize a 2^" + std::to_string(n) + " tensor (limit 2^" +
                          std::to_string(kMaxFullTensorSites) + ")");
    }
    const int m = w.bond_dim();
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> tensor(size, 0.0);
    // Enumerate every bond configuration (alpha_1 .. alpha_{n-1}) explicitly.
    const int bonds = n - 1;
    std::vector<int> alpha(static_cast<std::size_t>(bonds), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        double total = 0.0;
        std::fill(alpha.begin(), alpha.end(), 0);
        for (;;) {
            double term = 1.0;
            for (int k = 0; k < n && term != 0.0; ++k) {
                const int p = static_cast<int>((idx >> k) & 1U);
                const int l = k == 0 ? 0 : alpha[k - 1];
                const int r = k == n - 1 ? 0 : alpha[k];
                term *= w.at(k, p, l, r);
            }
            total += term;
            int b = 0;
            while (b < bonds && ++alpha[b] == m) {
                alpha[b] = 0;
                ++b;
            }
            if (b == bonds) {
                break;
            }
        }
        tensor[idx] = total;
    }
    return tensor;
}

double full_tensor_forward(std::span<const double> tensor, std::span<const double> x) {
    const std::size_t n = x.size();
    if (tensor.size() != (std::size_t{1} << n)) {
        throw UsageError("tensor size does not match input length");
    }
    double total = 0.0;
    for (std::size_t idx = 0; idx < tensor.size(); ++idx) {
        double phi = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if ((idx >> j) & 1U) {
                phi *= x[j];
            }
        }
        total += tensor[idx] * phi;
    }
    return total;
}

MpsWeights init_mps(int n_sites, int bond_dim, std::uint64_t seed, double noise_scale) {
    MpsWeights w(n_sites, bond_dim);
    Rng rng(seed);
    for (int k = 0; k < n_sites; ++k) {
        for (int p = 0; p < 2; ++p) {
            for (int l = 0; l < w.left_dim(k); ++l) {
                for (int r = 0; r < w.right_dim(k); ++r) {
                    w.at(k, p, l, r) = (p == 0 && l == r) ? 1.0 : noise_scale * rng.normal();
                }
            }
        }
    }
    return w;
}

} // namespace crossq::mps
