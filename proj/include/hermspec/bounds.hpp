#pragma once

#include <string>

namespace hermspec {

/// A theoretical lower bound carried in log space. The bounds underflow double
/// precision for every realistic parameter choice (exponents of order 10⁴ and more).
struct BoundValue {
    /// Natural log of the bound.
    double log_value = 0.0;
    /// Natural log of the base raised to `exponent`.
    double log_base = 0.0;
    double exponent = 0.0;
    /// Power of N in the exponent.
    double n_exponent = 0.0;
    /// N-exponent < 1: the set is efficient in the sense of a sub-linear spectral exponent.
    bool efficient = false;
    std::string theorem;
};

/// C = 32d(1 + √log κ), the radius factor of the concentration estimate. κ ≥ 1.
double concentration_radius(int d, double kappa);

/// log C_B(m,N) with C_B(m,N) = (2δ)^{2m} e^{e/δ²} (m!)² e^{2√(2N+d)/δ}.
double bernstein_log_cb(int m, int N, int d, double delta);

/// δ = (40 D N^{(1−ε)/2})^{−1}.
double delta_choice(double D, int N, double eps);

struct GeneralBoundParams {
    int d = 1;
    int N = 1;
    /// log γ (γ itself is often far below the smallest double).
    double log_gamma = -1.0;
    double alpha = 0.0;
    double eta = 1.0;
    double D = 1.0;
    double kappa = 1.0;
    double eps = 1.0;
};

/// (3/κ) (ηγ/(24dτ_d))^{7(800e√d D(D+1) + log(4κ^{1/2})) N^{1−(ε−α)/2}}.
BoundValue general_bound(const GeneralBoundParams& p);

/// A headline bound together with the general-theorem instantiation it is derived from.
struct DerivedBound {
    BoundValue stated;
    BoundValue via_general;
    GeneralBoundParams general;
    /// log of the effective γ fed to the general theorem.
    double log_gamma_effective = 0.0;
    double C = 0.0;
};

struct CubesBoundParams {
    int d = 1;
    int N = 1;
    double gamma = 0.5;
    double beta = 0.0;
    double rho = 1.0;
    double K = 16.0;
};

/// 3(γ/K^d)^{K d^{5/2+β} (1+ρ)² N^{(1+β)/2}}; the general instantiation uses the unit
/// cube lattice (κ = 1, η = d^{−d/2}, D = dρ, ε = 1, α = β) with γ ↦ γ^{2(2C)^β}.
DerivedBound cubes_bound(const CubesBoundParams& p);

struct BallsBoundParams {
    int d = 1;
    int N = 1;
    double gamma = 0.5;
    double alpha = 0.0;
    double eps = 1.0;
    double R = 1.0;
    double K = 16.0;
};

/// 3(γ/K^d)^{K^{1+α} d^{(11+3α)/2} (1+R)² N^{1−(ε−α)/2}}; the general instantiation
/// uses the ball covering (κ = K^d, η = τ_d/2^d, D = 4dRC) with γ ↦ γ^{1+C^α}.
DerivedBound balls_bound(const BallsBoundParams& p);

struct ObservabilityParams {
    double d0 = 1.0;
    double d1 = 0.0;
    double zeta = 0.5;
    double T = 1.0;
    double C1 = 1.0;
    double C2 = 1.0;
    double C3 = 1.0;
};

/// log C_obs² = log((C₁d₀/T) K₁^{C₂} exp(C₃ (d₁/T^ζ)^{1/(1−ζ)})), K₁ = 2d₀ + 1.
double log_cobs_squared(const ObservabilityParams& p);

/// Largest N with 2N + d ≤ λ, or −1 when λ < d (the spectral projector is zero).
int lambda_to_degree(double lambda, int d);

/// log of 2κ^{1/2} Σ_m C_B(m,N)^{1/2} (10‖l‖₁)^m / m!, summed term by term until a
/// term drops below 1e−16 of the partial sum. +∞ when the series diverges.
double log_mk_series_bound(double kappa, int N, int d, double delta, double l1);

/// log a_k with a_k = 12 (η ratio / (24 d τ_d))^{4 log M / log 2 + 1}.
double log_local_weight(double eta, double density_ratio, int d, double M);

}  // namespace hermspec
