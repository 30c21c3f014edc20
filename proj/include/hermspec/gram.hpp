#pragma once

#include "hermspec/errors.hpp"
#include "hermspec/hermite_basis.hpp"
#include "hermspec/set_geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace hermspec {

/// Composite Gauss–Legendre settings. Each interval is split into panels no wider
/// than `panel_width`; a full-width panel carries `nodes` points and narrower ones
/// proportionally fewer (at least 8). The node count is doubled until successive
/// results agree to `tolerance` relative to the largest entry.
struct QuadratureRule {
    int nodes = 64;
    double tolerance = 1e-11;
    double panel_width = 1.0;
    int max_doublings = 12;
    /// Dyadic refinement depth for cells straddling a ball boundary.
    int ball_depth = 12;
};

/// Adaptive refinement did not settle. Carries the last two iterates (1×1 for scalar
/// integrals).
class QuadratureFailure : public NumericalError {
public:
    QuadratureFailure(const std::string& what, Eigen::MatrixXd previous, Eigen::MatrixXd last)
        : NumericalError(what), previous_(std::move(previous)), last_(std::move(last)) {}
    const Eigen::MatrixXd& previous() const noexcept { return previous_; }
    const Eigen::MatrixXd& last() const noexcept { return last_; }

private:
    Eigen::MatrixXd previous_;
    Eigen::MatrixXd last_;
};

/// Entry (α,β) = ∫_S Φ_α Φ_β, so that ‖f‖²_{L²(S)} = cᵀ G c.
struct GramMatrix {
    BasisIndexSet basis;
    Eigen::MatrixXd entries;

    double quadratic_form(const Eigen::VectorXd& c) const { return c.dot(entries * c); }
    /// Leading principal block for a basis of lower degree (graded order makes it a prefix).
    GramMatrix restricted(int max_degree) const;
};

/// Half-width of the box outside which every φ_k, k ≤ N, carries less than e^{−100}
/// of its mass: √(2N+1) + 10. Integrals are clipped to [−L, L]ᵈ.
double effective_support_radius(int max_degree);

/// One-dimensional Gram matrix (N+1)×(N+1) of φ_0..φ_N over (a, b).
Eigen::MatrixXd interval_gram(int max_degree, double a, double b, const QuadratureRule& rule = {});

GramMatrix gram_over_region(const BasisIndexSet& basis, const Region& region, const QuadratureRule& rule = {});
GramMatrix gram_over_set(const BasisIndexSet& basis, const SensorSet& set, const QuadratureRule& rule = {});

/// Entry (α,β) = ∫_{ℝᵈ} e^{2w|x|²} Φ_α Φ_β, by Gauss–Hermite for e^{−(1−2w)|x|²}.
/// Throws InputError ("divergent weight") when 2w ≥ 1.
GramMatrix gram_fullspace_weighted(const BasisIndexSet& basis, double w);

using Integrand = std::function<double(std::span<const double>)>;

/// ∫_S fn by tensor composite Gauss–Legendre (balls by dyadic subdivision), optionally
/// restricted to [−clip, clip]ᵈ.
double integrate_over_set(const SensorSet& set, const Integrand& fn, const QuadratureRule& rule = {},
                          std::optional<double> clip = std::nullopt);

struct ScalingCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double difference = 0.0;
};

/// lhs = ‖f‖²_{L²(S)} from the Gram matrix; rhs = ∫_{t^{1/4}S} t^{−d/4} f(t^{−1/4}x)² dx
/// by direct quadrature of the rescaled integrand.
ScalingCheck scaling_identity_check(const HermiteVector& f, const SensorSet& set, double t,
                                    const QuadratureRule& rule = {});

/// Header of flat indices, then one row per index; 17 significant digits.
std::string to_csv(const GramMatrix& gram);

}  // namespace hermspec
