#include "hermspec/control.hpp"

#include "hermspec/jacobi.hpp"
#include "hermspec/quadrature.hpp"
#include "hermspec/text.hpp"

#include <cmath>

namespace hermspec {

namespace {

constexpr double kGramianFloor = 1e-14;

Eigen::VectorXd eigenvalues_of(const BasisIndexSet& basis) {
    Eigen::VectorXd lam(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        lam[static_cast<Eigen::Index>(i)] = semigroup_eigenvalue(basis.index_of(i));
    return lam;
}

void check_horizon(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InputError("control: horizon T must be positive and finite");
}

// (e^{sT} − 1)/s and (1 − e^{−sT})/s, both well defined as s → 0.
double expm1_ratio(double s, double T) { return s == 0.0 ? T : std::expm1(s * T) / s; }
double decay_ratio(double s, double T) { return s == 0.0 ? T : -std::expm1(-s * T) / s; }

}  // namespace

HermiteVector semigroup_apply(const HermiteVector& f, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("semigroup_apply: t must be non-negative and finite");
    Eigen::VectorXd c = f.coeffs();
    for (std::size_t i = 0; i < f.basis().size(); ++i)
        c[static_cast<Eigen::Index>(i)] *= std::exp(-semigroup_eigenvalue(f.basis().index_of(i)) * t);
    return HermiteVector(f.basis(), std::move(c));
}

Eigen::MatrixXd observability_gramian(const GramMatrix& gs, double T) {
    check_horizon(T);
    const Eigen::VectorXd lam = eigenvalues_of(gs.basis);
    Eigen::MatrixXd b = gs.entries;
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) *= decay_ratio(lam[i] + lam[j], T);
    return b;
}

Eigen::MatrixXd observability_gramian_quadrature(const GramMatrix& gs, double T, int nodes) {
    check_horizon(T);
    const Eigen::VectorXd lam = eigenvalues_of(gs.basis);
    const GaussRule& gl = gauss_legendre(nodes);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(gs.entries.rows(), gs.entries.cols());
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double t = 0.5 * T * (gl.nodes[k] + 1.0);
        const double w = 0.5 * T * gl.weights[k];
        const Eigen::VectorXd e = (-lam * t).array().exp();
        b += w * (e.asDiagonal() * gs.entries * e.asDiagonal());
    }
    return b;
}

Eigen::MatrixXd scaled_observability_gramian(const GramMatrix& gs, double T) {
    check_horizon(T);
    const Eigen::VectorXd lam = eigenvalues_of(gs.basis);
    Eigen::MatrixXd b = gs.entries;
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) *= expm1_ratio(lam[i] + lam[j], T);
    return b;
}

ObservabilityConstant observability_constant_num(const GramMatrix& gs, double T) {
    ObservabilityConstant out;
    out.lambda_min_B = jacobi_eigen(observability_gramian(gs, T)).values[0];
    if (!(out.lambda_min_B > kGramianFloor))
        throw NotObservable("observability Gramian is singular at tolerance (lambda_min = " +
                                format_double(out.lambda_min_B) + ")",
                            out.lambda_min_B);
    const SymmetricEigen eig = jacobi_eigen(scaled_observability_gramian(gs, T));
    out.lambda_min_scaled = eig.values[0];
    if (!(out.lambda_min_scaled > 0.0))
        throw NotObservable("scaled observability Gramian is not positive definite", out.lambda_min_scaled);
    out.c_obs = 1.0 / std::sqrt(out.lambda_min_scaled);
    out.worst_state = eig.vectors.col(0);
    return out;
}

ControlResult hum_control(const GramMatrix& gs, double T, const HermiteVector& phi0, int steps) {
    check_horizon(T);
    if (!(phi0.basis() == gs.basis)) throw InputError("hum_control: initial state and Gram matrix use different bases");
    if (steps < 1) throw InputError("hum_control: need at least one time step");

    const Eigen::VectorXd lam = eigenvalues_of(gs.basis);
    const Eigen::MatrixXd b = observability_gramian(gs, T);
    const SymmetricEigen eb = jacobi_eigen(b);
    if (!(eb.values[0] > kGramianFloor))
        throw NotObservable("observability Gramian is singular at tolerance (lambda_min = " + format_double(eb.values[0]) + ")",
                            eb.values[0]);
    const Eigen::MatrixXd bs = scaled_observability_gramian(gs, T);
    const SymmetricEigen es = jacobi_eigen(bs);
    if (!(es.values[0] > 0.0)) throw NotObservable("scaled observability Gramian is not positive definite", es.values[0]);

    // With D = e^{TH}: B = D⁻¹ B_s D⁻¹, so η = −D B_s⁻¹ φ₀ and cost² = φ₀ᵀ B_s⁻¹ φ₀.
    const Eigen::VectorXd& p0 = phi0.coeffs();
    const Eigen::VectorXd xi = es.vectors * (es.vectors.transpose() * p0).cwiseQuotient(es.values);
    const Eigen::VectorXd dvec = (lam * T).array().exp();
    const Eigen::VectorXd dinv = (-lam * T).array().exp();

    ControlResult out{.eta = HermiteVector(gs.basis, -dvec.cwiseProduct(xi))};
    out.c_obs = 1.0 / std::sqrt(es.values[0]);
    out.cost = std::sqrt(std::max(0.0, xi.dot(bs * xi)));
    out.cost_squared_unscaled = out.eta.coeffs().dot(b * out.eta.coeffs());
    out.terminal_residual = dinv.cwiseProduct(p0 - bs * xi).norm();

    // Exact exponential integration: on [t, t+h] the control term for component α is
    // −Σ_β G_αβ ξ_β e^{λ_β t} e^{−λ_α h} (e^{(λ_α+λ_β)h} − 1)/(λ_α+λ_β).
    const Eigen::Index n = lam.size();
    const double h = T / steps;
    Eigen::MatrixXd step_kernel(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index c = 0; c < n; ++c)
            step_kernel(a, c) = gs.entries(a, c) * std::exp(-lam[a] * h) * expm1_ratio(lam[a] + lam[c], h);
    const Eigen::VectorXd decay = (-lam * h).array().exp();

    Eigen::VectorXd state = p0;
    for (int k = 0; k <= steps; ++k) {
        const double t = k * h;
        const Eigen::VectorXd grow = (lam * t).array().exp();
        TrajectoryRow row;
        row.t = t;
        row.state = state;
        row.control = -(gs.entries * grow.cwiseProduct(xi));
        Eigen::MatrixXd bt = gs.entries;
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index c = 0; c < n; ++c) bt(a, c) *= expm1_ratio(lam[a] + lam[c], t);
        row.running_cost = xi.dot(bt * xi);
        out.trajectory.push_back(std::move(row));
        if (k == steps) break;
        state = decay.cwiseProduct(state) - step_kernel * grow.cwiseProduct(xi);
    }
    out.simulated_residual = state.norm();
    return out;
}

std::string trajectory_csv(const ControlResult& result) {
    std::string out = "t";
    const Eigen::Index n = result.eta.coeffs().size();
    for (Eigen::Index i = 0; i < n; ++i) out += ",phi_" + std::to_string(i);
    for (Eigen::Index i = 0; i < n; ++i) out += ",u_" + std::to_string(i);
    out += ",running_cost\n";
    for (const TrajectoryRow& row : result.trajectory) {
        out += format_double(row.t);
        for (Eigen::Index i = 0; i < n; ++i) out += ',' + format_double(row.state[i]);
        for (Eigen::Index i = 0; i < n; ++i) out += ',' + format_double(row.control[i]);
        out += ',' + format_double(row.running_cost) + '\n';
    }
    return out;
}

}  // namespace hermspec
