#pragma once

#include "hermspec/bounds.hpp"
#include "hermspec/gram.hpp"
#include "hermspec/hermite_basis.hpp"
#include "hermspec/set_geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hermspec {

/// Sharp constant c in ‖f‖²_{L²(S)} ≥ c‖f‖² on E_N: the smallest eigenvalue of G_S.
struct SpectralConstant {
    double lambda_min = 0.0;
    /// Unit minimizer in coefficient space.
    Eigen::VectorXd vector;
    /// ‖G v − λ v‖.
    double residual = 0.0;
};

/// Throws NumericalError if the Jacobi solver fails or the residual exceeds 1e−10.
SpectralConstant spectral_constant(const GramMatrix& gram);

/// Σ_{|α|=m} (1/α!) ‖∂^α f‖² over ℝᵈ for m = 0..m_max, exact via ladder coefficients.
std::vector<double> derivative_energies(const HermiteVector& f, int m_max);

struct BernsteinRow {
    int m = 0;
    double lhs = 0.0;
    /// log(C_B(m,N)/m! · ‖f‖²)
    double log_rhs = 0.0;
    bool pass = false;
};

/// Global Bernstein inequality Σ_{|α|=m}(1/α!)‖∂^α f‖² ≤ C_B(m,N)/m! ‖f‖² for 0 ≤ m ≤ m_max.
std::vector<BernsteinRow> bernstein_check(const HermiteVector& f, int m_max, double delta);

struct CellRecord {
    std::size_t element = 0;
    double local_norm2 = 0.0;
    bool central = false;
    bool good = true;
    /// First m at which the local inequality fails (0 when good).
    int first_bad_m = 0;
    /// Σ_{|α|=m}(1/α!)‖∂^α f‖²_{Q_k} for m = 1..m_max (index m−1).
    std::vector<double> energies;
};

struct CellClassification {
    std::vector<CellRecord> cells;
    double total_norm2 = 0.0;
    double covered_norm2 = 0.0;
    /// ‖f‖² − Σ_k ‖f‖²_{Q_k} when positive: mass outside every materialized element. It is
    /// counted as both bad and far.
    double tail_norm2 = 0.0;
    double bad_mass_fraction = 0.0;
    double far_mass_fraction = 0.0;
    int m_max = 0;
    double delta = 0.0;
    double kappa = 1.0;
    /// Largest m at which any cell first fails ("good up to m_max" is stable above it).
    int largest_flip_m = 0;
};

/// Good: Σ_{|α|=m}(1/α!)‖∂^α f‖²_{Q_k} ≤ 2^{m+1}κ C_B(m,N)/m! ‖f‖²_{Q_k} for 1 ≤ m ≤ m_max.
/// δ defaults to delta_choice(D, N, ε) from the covering parameters.
CellClassification classify_cells(const HermiteVector& f, const CoveringFamily& covering, int m_max = 6,
                                  std::optional<double> delta = std::nullopt, const QuadratureRule& rule = {});

struct MassIntersection {
    double sum = 0.0;
    double ratio = 0.0;
    std::size_t count = 0;
    /// f = 0: the check is vacuous.
    bool degenerate = false;
};

/// Σ_{k central and good} ‖f‖²_{Q_k} and its ratio to ‖f‖². Throws VerificationFailure with
/// the coefficients and per-cell ledger if the ratio is below 1/4 − 1e−8 or no cell is
/// both central and good.
MassIntersection mass_intersection_check(const HermiteVector& f, const CellClassification& classification);

/// One line per cell: element, central, good, first_bad_m, local norm.
std::string cell_ledger(const CellClassification& classification);

struct MkEstimate {
    double value = 0.0;
    double sup_abs = 0.0;
    double local_norm = 0.0;
    std::size_t samples = 0;
};

/// Sampled lower estimate of M = √|Q| ‖f‖_{L²(Q)}^{−1} sup_{z ∈ Q + D_{4l}} |f(z)|.
/// x runs over a `density`^d grid on the closed box, offsets w_j = r·4l_j·e^{iθ} with
/// r ∈ {1, 1/2} and `phases` equispaced angles. Throws InputError on a zero local norm.
MkEstimate estimate_Mk(const HermiteVector& f, const Region& cell, const std::vector<double>& side_lengths,
                       int density, int phases = 33, const QuadratureRule& rule = {});

struct GrowthRow {
    int N = 0;
    double log_norm_full = 0.0;
    double log_norm_window = 0.0;
    double log_ratio = 0.0;
    /// log(√π M^{2N})
    double log_window_bound = 0.0;
    /// log_ratio − (N log N − (1 + 2 log M) N)
    double band_residual = 0.0;
};

struct GrowthTable {
    double M = 0.0;
    std::vector<GrowthRow> rows;
    /// Smallest c with log_ratio ≥ N log N − cN on every row.
    double fitted_c = 0.0;
};

/// f_N(x) = x^N e^{−x²/2} in d = 1: ‖f_N‖² = Γ(N+½), ‖f_N‖²_{[−M,M]} by log-space quadrature.
GrowthTable counterexample_growth(double M, const std::vector<int>& degrees);

/// log ∫_{−M}^{M} x^{2N} e^{−x²} dx, never leaving log space.
double log_window_moment(int N, double M);

struct SpectralReport {
    int N = 0;
    int d = 0;
    std::uint64_t set_hash = 0;
    SpectralConstant constant;
    std::optional<BoundValue> bound;
    /// log(λ_min) − bound.log_value
    std::optional<double> log_margin;
};

/// FNV-1a over the serialized set.
std::uint64_t set_hash(const SensorSet& set);

SpectralReport spectral_report(const SensorSet& set, int N, std::optional<BoundValue> bound = std::nullopt,
                               const QuadratureRule& rule = {});

}  // namespace hermspec
