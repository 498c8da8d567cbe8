#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace crossq::mps {

/// Weights of an open-boundary matrix product state with physical dimension 2.
///
/// Site k holds a tensor A[p][l][r] with p in {0, 1}. Boundary sites are stored
/// with a unit outer bond (the first site is 1 x m per physical index, the last
/// is m x 1), so every site is a pair of matrices indexed by p. The parameter
/// count is 2m + 2m + (n - 2) 2m^2.
class MpsWeights {
  public:
    MpsWeights(int n_sites, int bond_dim);

    int sites() const { return n_sites_; }
    int bond_dim() const { return bond_dim_; }

    int left_dim(int site) const { return site == 0 ? 1 : bond_dim_; }
    int right_dim(int site) const { return site == n_sites_ - 1 ? 1 : bond_dim_; }

    double &at(int site, int p, int l, int r);
    double at(int site, int p, int l, int r) const;

    std::span<double> site(int k) { return tensors_[static_cast<std::size_t>(k)]; }
    std::span<const double> site(int k) const { return tensors_[static_cast<std::size_t>(k)]; }

    std::size_t parameter_count() const;
    static std::size_t parameter_count(int n_sites, int bond_dim);

    /// Site tensors concatenated in site order, each in (p, l, r) row-major order.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> values);

    nlohmann::ordered_json to_json() const;
    static MpsWeights from_json(const nlohmann::ordered_json &doc);

    bool operator==(const MpsWeights &) const = default;

  private:
    int n_sites_;
    int bond_dim_;
    std::vector<std::vector<double>> tensors_;
};

enum class Sweep { left_first, right_first };

/// sum_{i} W_{i_1..i_n} prod_j phi_{i_j}(x_j) with phi(x) = (1, x), contracted
/// left to right in O(n m^2).
double mps_forward(const MpsWeights &w, std::span<const double> x);

/// dF/dA^(k) for every site, built from prefix/suffix environments. Both sweep
/// orders perform the same contractions.
MpsWeights mps_gradient(const MpsWeights &w, std::span<const double> x,
                        Sweep order = Sweep::left_first);

/// forward(x), with the gradient written into `grad` in parameters() order.
double mps_value_and_gradient(const MpsWeights &w, std::span<const double> x, std::span<double> grad);

/// Largest chain materialized by mps_to_full_tensor.
inline constexpr int kMaxFullTensorSites = 12;

/// Every component T_{i_1..i_n} by explicit bond summation. Component index is
/// sum_j i_j 2^j (site 0 is the least significant bit).
std::vector<double> mps_to_full_tensor(const MpsWeights &w);

/// sum_i T_i Phi_i(x) over a materialized tensor.
double full_tensor_forward(std::span<const double> tensor, std::span<const double> x);

/// Near-product start: the p = 0 slice of every site is an identity bond map,
/// every other entry is N(0, noise_scale^2).
MpsWeights init_mps(int n_sites, int bond_dim, std::uint64_t seed, double noise_scale = 1e-2);

} // namespace crossq::mps
