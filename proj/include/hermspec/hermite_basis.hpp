#pragma once

#include <Eigen/Dense>

#include <compare>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hermspec {

/// Multi-index α ∈ ℕ₀ᵈ labelling the tensor Hermite function Φ_α.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> components);

    std::size_t dim() const noexcept { return components_.size(); }
    int operator[](std::size_t j) const { return components_[j]; }
    const std::vector<int>& components() const noexcept { return components_; }

    /// |α| = α_1 + ... + α_d.
    int degree() const noexcept;
    /// α! = α_1! ⋯ α_d!
    double factorial() const;

    MultiIndex shifted(std::size_t axis, int delta) const;

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::vector<int> components_;
};

/// All multi-indices with |α| ≤ N in graded-lexicographic order: ascending degree,
/// ties broken by ascending lexicographic order of the components.
///
/// Because the order is graded, the basis of degree N is a prefix of the basis of
/// degree N' > N in the same dimension; several modules rely on this to take leading
/// principal submatrices instead of re-indexing.
///
/// Copies are cheap (shared immutable storage).
class BasisIndexSet {
public:
    BasisIndexSet(int dim, int max_degree);

    int dim() const noexcept;
    int max_degree() const noexcept;
    std::size_t size() const noexcept;

    const MultiIndex& index_of(std::size_t position) const;
    std::size_t position_of(const MultiIndex& alpha) const;
    std::optional<std::size_t> find(const MultiIndex& alpha) const;

    /// Number of basis functions of total degree at most `degree` (a prefix length).
    std::size_t prefix_size(int degree) const;

    std::vector<MultiIndex>::const_iterator begin() const;
    std::vector<MultiIndex>::const_iterator end() const;

    friend bool operator==(const BasisIndexSet& a, const BasisIndexSet& b) noexcept {
        return a.dim() == b.dim() && a.max_degree() == b.max_degree();
    }

private:
    struct Storage;
    std::shared_ptr<const Storage> storage_;
};

/// binomial(N + d, d), the dimension of E_N in ℝᵈ.
std::size_t basis_size(int dim, int max_degree);

/// Element of E_N given by its coefficients in the orthonormal basis (Φ_α).
class HermiteVector {
public:
    HermiteVector(BasisIndexSet basis, Eigen::VectorXd coeffs);

    static HermiteVector zero(BasisIndexSet basis);
    static HermiteVector basis_function(BasisIndexSet basis, const MultiIndex& alpha);

    const BasisIndexSet& basis() const noexcept { return basis_; }
    const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
    int dim() const noexcept { return basis_.dim(); }

    /// ‖f‖²_{L²(ℝᵈ)}, exact by orthonormality.
    double norm_squared() const { return coeffs_.squaredNorm(); }

    /// The same function expressed in a basis of larger (or equal) degree.
    HermiteVector embedded(const BasisIndexSet& larger) const;

    double operator()(std::span<const double> x) const;
    std::complex<double> operator()(std::span<const std::complex<double>> z) const;

private:
    BasisIndexSet basis_;
    Eigen::VectorXd coeffs_;
};

/// φ_k(t). Three-term recurrence with running rescaling, so k up to a few hundred is
/// safe on the whole real line.
double hermite_function(int k, double t);
/// Entire extension of φ_k to ℂ (same recurrence in complex arithmetic).
std::complex<double> hermite_function(int k, std::complex<double> t);

/// Fills out[0..max_k] with φ_0(t), ..., φ_max_k(t).
void hermite_functions(int max_k, double t, std::span<double> out);
void hermite_functions(int max_k, std::complex<double> t, std::span<std::complex<double>> out);

/// Φ_α(x) = ∏_j φ_{α_j}(x_j).
double tensor_hermite(const MultiIndex& alpha, std::span<const double> x);
std::complex<double> tensor_hermite(const MultiIndex& alpha, std::span<const std::complex<double>> z);

/// ∂f/∂x_axis (axis is 0-based), exact in coefficient space via the ladder identity
/// φ_k' = √(k/2) φ_{k-1} − √((k+1)/2) φ_{k+1}. The result lives in E_{N+1}.
HermiteVector derivative(const HermiteVector& f, int axis);

/// ∂^α f, applying `derivative` α_j times along each axis. Result lives in E_{N+|α|}.
HermiteVector partial_derivative(const HermiteVector& f, const MultiIndex& alpha);

/// Eigenvalue of H = −Δ + |x|² on Φ_α: 2|α| + d.
double semigroup_eigenvalue(const MultiIndex& alpha);

}  // namespace hermspec
