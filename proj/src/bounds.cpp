#include "hermspec/bounds.hpp"

#include "hermspec/errors.hpp"
#include "hermspec/set_geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hermspec {

namespace {

constexpr double kE = std::numbers::e;

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

double concentration_radius(int d, double kappa) {
    if (d < 1) throw InputError("concentration_radius: d must be at least 1");
    if (!(kappa >= 1.0)) throw InputError("concentration_radius: kappa must be at least 1");
    return 32.0 * d * (1.0 + std::sqrt(std::log(kappa)));
}

double bernstein_log_cb(int m, int N, int d, double delta) {
    if (!(delta > 0.0)) throw InputError("bernstein_log_cb: delta must be positive");
    if (m < 0) throw InputError("bernstein_log_cb: m must be non-negative");
    return 2.0 * m * std::log(2.0 * delta) + kE / (delta * delta) + 2.0 * std::lgamma(m + 1.0) +
           2.0 * std::sqrt(2.0 * N + d) / delta;
}

double delta_choice(double D, int N, double eps) {
    if (!(D > 0.0)) throw InputError("delta_choice: D must be positive");
    if (N < 1) throw InputError("delta_choice: N must be at least 1");
    return 1.0 / (40.0 * D * std::pow(static_cast<double>(N), (1.0 - eps) / 2.0));
}

BoundValue general_bound(const GeneralBoundParams& p) {
    if (p.d < 1 || p.N < 1) throw InputError("general_bound: need d ≥ 1 and N ≥ 1");
    if (!(p.log_gamma < 0.0)) throw InputError("general_bound: gamma must lie in (0,1)");
    if (!(p.kappa >= 1.0)) throw InputError("general_bound: kappa must be at least 1");
    if (!(p.eps > 0.0 && p.eps <= 1.0)) throw InputError("general_bound: eps must lie in (0,1]");
    if (!(p.alpha >= 0.0)) throw InputError("general_bound: alpha must be non-negative");
    if (!(p.D > 0.0)) throw InputError("general_bound: D must be positive");
    const double tau = unit_ball_volume(p.d);
    if (!(p.eta > 0.0) || p.eta > p.d * tau * (1.0 + 1e-12))
        throw InputError("general_bound: eta must lie in (0, d·tau_d]");

    BoundValue v;
    v.theorem = "general";
    v.n_exponent = 1.0 - (p.eps - p.alpha) / 2.0;
    v.efficient = p.alpha < p.eps;
    v.exponent = 7.0 * (800.0 * kE * std::sqrt(static_cast<double>(p.d)) * p.D * (p.D + 1.0) +
                        std::log(4.0 * std::sqrt(p.kappa))) *
                 std::pow(static_cast<double>(p.N), v.n_exponent);
    v.log_base = std::log(p.eta) + p.log_gamma - std::log(24.0 * p.d * tau);
    v.log_value = std::log(3.0 / p.kappa) + v.exponent * v.log_base;
    return v;
}

DerivedBound cubes_bound(const CubesBoundParams& p) {
    if (p.d < 1 || p.N < 1) throw InputError("cubes_bound: need d ≥ 1 and N ≥ 1");
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw InputError("cubes_bound: gamma must lie in (0,1)");
    if (!(p.beta >= 0.0)) throw InputError("cubes_bound: beta must be non-negative");
    if (!(p.rho > 0.0)) throw InputError("cubes_bound: rho must be positive");
    if (!(p.K >= 1.0)) throw InputError("cubes_bound: K must be at least 1");
    const double d = p.d;
    const double N = p.N;

    DerivedBound out;
    out.stated.theorem = "cubes";
    out.stated.n_exponent = (1.0 + p.beta) / 2.0;
    out.stated.efficient = p.beta < 1.0;
    out.stated.exponent = p.K * std::pow(d, 2.5 + p.beta) * (1.0 + p.rho) * (1.0 + p.rho) * std::pow(N, out.stated.n_exponent);
    out.stated.log_base = std::log(p.gamma) - d * std::log(p.K);
    out.stated.log_value = std::log(3.0) + out.stated.exponent * out.stated.log_base;

    out.C = concentration_radius(p.d, 1.0);
    out.log_gamma_effective = 2.0 * std::pow(2.0 * out.C, p.beta) * std::log(p.gamma);
    out.general = GeneralBoundParams{p.d, p.N, out.log_gamma_effective, p.beta, std::pow(d, -d / 2.0), d * p.rho, 1.0, 1.0};
    out.via_general = general_bound(out.general);
    out.via_general.theorem = "cubes_via_general";
    return out;
}

DerivedBound balls_bound(const BallsBoundParams& p) {
    if (p.d < 1 || p.N < 1) throw InputError("balls_bound: need d ≥ 1 and N ≥ 1");
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw InputError("balls_bound: gamma must lie in (0,1)");
    if (!(p.eps > 0.0 && p.eps <= 1.0)) throw InputError("balls_bound: eps must lie in (0,1]");
    if (!(p.alpha >= 0.0)) throw InputError("balls_bound: alpha must be non-negative");
    if (!(p.R > 0.0)) throw InputError("balls_bound: R must be positive");
    if (!(p.K >= 1.0)) throw InputError("balls_bound: K must be at least 1");
    const double d = p.d;
    const double N = p.N;

    DerivedBound out;
    out.stated.theorem = "balls";
    out.stated.n_exponent = 1.0 - (p.eps - p.alpha) / 2.0;
    out.stated.efficient = p.alpha < p.eps;
    out.stated.exponent = std::pow(p.K, 1.0 + p.alpha) * std::pow(d, (11.0 + 3.0 * p.alpha) / 2.0) * (1.0 + p.R) *
                          (1.0 + p.R) * std::pow(N, out.stated.n_exponent);
    out.stated.log_base = std::log(p.gamma) - d * std::log(p.K);
    out.stated.log_value = std::log(3.0) + out.stated.exponent * out.stated.log_base;

    const double kappa = std::pow(p.K, d);
    out.C = concentration_radius(p.d, kappa);
    out.log_gamma_effective = (1.0 + std::pow(out.C, p.alpha)) * std::log(p.gamma);
    out.general = GeneralBoundParams{p.d,   p.N,  out.log_gamma_effective, p.alpha, unit_ball_volume(p.d) / std::pow(2.0, d),
                                     4.0 * d * p.R * out.C, kappa, p.eps};
    out.via_general = general_bound(out.general);
    out.via_general.theorem = "balls_via_general";
    return out;
}

double log_cobs_squared(const ObservabilityParams& p) {
    if (!(p.zeta > 0.0 && p.zeta < 1.0)) throw InputError("log_cobs_squared: zeta must lie in (0,1)");
    if (!(p.T > 0.0)) throw InputError("log_cobs_squared: T must be positive");
    if (!(p.d0 > 0.0)) throw InputError("log_cobs_squared: d0 must be positive");
    if (!(p.d1 >= 0.0)) throw InputError("log_cobs_squared: d1 must be non-negative");
    if (!(p.C1 > 0.0 && p.C2 > 0.0 && p.C3 > 0.0)) throw InputError("log_cobs_squared: C1, C2, C3 must be positive");
    const double K1 = 2.0 * p.d0 + 1.0;
    return std::log(p.C1 * p.d0 / p.T) + p.C2 * std::log(K1) +
           p.C3 * std::pow(p.d1 / std::pow(p.T, p.zeta), 1.0 / (1.0 - p.zeta));
}

int lambda_to_degree(double lambda, int d) {
    if (d < 1) throw InputError("lambda_to_degree: d must be at least 1");
    if (!std::isfinite(lambda)) throw InputError("lambda_to_degree: lambda must be finite");
    if (lambda < d) return -1;
    return static_cast<int>(std::floor((lambda - d) / 2.0));
}

double log_mk_series_bound(double kappa, int N, int d, double delta, double l1) {
    if (!(kappa >= 1.0)) throw InputError("log_mk_series_bound: kappa must be at least 1");
    if (!(l1 >= 0.0)) throw InputError("log_mk_series_bound: l1 must be non-negative");
    // Consecutive terms have ratio 20δ‖l‖₁.
    if (20.0 * delta * l1 >= 1.0) return std::numeric_limits<double>::infinity();
    double log_sum = -std::numeric_limits<double>::infinity();
    const double log_l = l1 > 0.0 ? std::log(10.0 * l1) : -std::numeric_limits<double>::infinity();
    for (int m = 0; m < 100000; ++m) {
        const double log_term = 0.5 * bernstein_log_cb(m, N, d, delta) + (m == 0 ? 0.0 : m * log_l) - std::lgamma(m + 1.0);
        if (m > 0 && log_term < log_sum + std::log(1e-16)) break;
        log_sum = log_add(log_sum, log_term);
    }
    return std::log(2.0) + 0.5 * std::log(kappa) + log_sum;
}

double log_local_weight(double eta, double density_ratio, int d, double M) {
    if (!(M >= 1.0)) throw InputError("log_local_weight: M must be at least 1");
    if (!(density_ratio > 0.0)) return -std::numeric_limits<double>::infinity();
    const double base = std::log(eta * density_ratio / (24.0 * d * unit_ball_volume(d)));
    return std::log(12.0) + (4.0 * std::log(M) / std::log(2.0) + 1.0) * base;
}

}  // namespace hermspec
