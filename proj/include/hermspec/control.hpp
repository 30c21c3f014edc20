#pragma once

#include "hermspec/errors.hpp"
#include "hermspec/gram.hpp"
#include "hermspec/hermite_basis.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hermspec {

/// B is singular at tolerance (λ_min(B) ≤ 1e−14): the truncated system is not
/// observable from S, so no finite control cost exists.
class NotObservable : public NumericalError {
public:
    explicit NotObservable(const std::string& what, double lambda_min)
        : NumericalError(what), lambda_min_(lambda_min) {}
    double lambda_min() const noexcept { return lambda_min_; }

private:
    double lambda_min_;
};

/// e^{−Ht} f: coefficient α scaled by e^{−(2|α|+d)t}.
HermiteVector semigroup_apply(const HermiteVector& f, double t);

/// B[α,β] = ∫₀^T e^{−(λ_α+λ_β)t} dt · G_S[α,β], in closed form.
Eigen::MatrixXd observability_gramian(const GramMatrix& gs, double T);

/// The same integral by an n-node Gauss–Legendre rule in t.
Eigen::MatrixXd observability_gramian_quadrature(const GramMatrix& gs, double T, int nodes = 100);

/// e^{TH} B e^{TH}, entry G_S[α,β]·(e^{(λ_α+λ_β)T} − 1)/(λ_α+λ_β). Keeps the small
/// eigenvalues of B resolvable; the observability constant and the HUM solve both
/// work with it.
Eigen::MatrixXd scaled_observability_gramian(const GramMatrix& gs, double T);

struct ObservabilityConstant {
    /// C_obs,num: smallest C with ‖e^{−HT}φ‖² ≤ C² φᵀBφ on E_N.
    double c_obs = 0.0;
    double lambda_min_B = 0.0;
    double lambda_min_scaled = 0.0;
    /// Initial state attaining C_obs,num (unit norm).
    Eigen::VectorXd worst_state;
};

/// Throws NotObservable if λ_min(B) ≤ 1e−14.
ObservabilityConstant observability_constant_num(const GramMatrix& gs, double T);

struct TrajectoryRow {
    double t = 0.0;
    Eigen::VectorXd state;
    /// Galerkin projection of 1_S u(t).
    Eigen::VectorXd control;
    /// ∫₀^t ‖1_S u‖² ds
    double running_cost = 0.0;
};

struct ControlResult {
    /// Dual seed η with Bη = −e^{−TH}φ₀; u(t) = 1_S e^{−(T−t)H}η.
    HermiteVector eta;
    double cost = 0.0;
    /// ηᵀBη computed from the unscaled Gramian, for cross-checking cost².
    double cost_squared_unscaled = 0.0;
    /// ‖e^{−TH}φ₀ + Bη‖ within E_N.
    double terminal_residual = 0.0;
    /// ‖φ(T)‖ after exponential time stepping on the uniform grid.
    double simulated_residual = 0.0;
    double c_obs = 0.0;
    std::vector<TrajectoryRow> trajectory = {};
};

/// Minimal-norm null control inside E_N. Throws NotObservable for singular B.
ControlResult hum_control(const GramMatrix& gs, double T, const HermiteVector& phi0, int steps = 256);

/// t, state coefficients, control coefficients, running cost.
std::string trajectory_csv(const ControlResult& result);

}  // namespace hermspec
