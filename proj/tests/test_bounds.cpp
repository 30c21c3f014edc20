#include "doctest.h"
#include "generators.hpp"

#include "hermspec/bounds.hpp"
#include "hermspec/errors.hpp"
#include "hermspec/set_geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace hermspec;

namespace {
constexpr double e = std::numbers::e;
}

TEST_CASE("concentration radius") {
    CHECK(concentration_radius(1, 1.0) == doctest::Approx(32.0));
    CHECK(concentration_radius(2, std::exp(4.0)) == doctest::Approx(64.0 * 3.0));
    CHECK_THROWS_AS(concentration_radius(1, 0.5), InputError);
}

TEST_CASE("Bernstein constant") {
    // m = 1, N = 0, d = 1, δ = 1: (2)² e^{e} (1!)² e^{2} = 4e^{e+2} ≈ 447.90.
    const double cb = std::exp(bernstein_log_cb(1, 0, 1, 1.0));
    CHECK(cb == doctest::Approx(4.0 * std::exp(e + 2.0)).epsilon(1e-14));
    CHECK(std::abs(cb - 447.9028) < 1e-3);
    // ‖φ_0'‖² = ½ sits far below it.
    CHECK(0.5 <= cb);
    // m = 0 leaves only the exponential factors.
    CHECK(bernstein_log_cb(0, 4, 2, 0.5) == doctest::Approx(4.0 * e + 4.0 * std::sqrt(10.0)));
    CHECK_THROWS_AS(bernstein_log_cb(1, 1, 1, 0.0), InputError);
    // Large m stays finite in log space.
    CHECK(std::isfinite(bernstein_log_cb(500, 1000000, 3, 1e-3)));
}

TEST_CASE("delta choice") {
    CHECK(delta_choice(1.0, 10, 1.0) == doctest::Approx(1.0 / 40.0));
    CHECK(delta_choice(2.0, 16, 0.5) == doctest::Approx(1.0 / (80.0 * 2.0)));
    CHECK_THROWS_AS(delta_choice(1.0, 0, 1.0), InputError);
}

TEST_CASE("general bound") {
    GeneralBoundParams p;
    p.d = 1;
    p.N = 1;
    p.log_gamma = std::log(0.5);
    p.eta = 1.0;
    p.D = 1.0;
    p.kappa = 1.0;
    p.eps = 1.0;
    const BoundValue v = general_bound(p);
    // Exponent 7(800e·1·2 + log 4) = 7(1600e + ln 4) ≈ 30454.5.
    CHECK(v.exponent == doctest::Approx(7.0 * (1600.0 * e + std::log(4.0))).epsilon(1e-14));
    CHECK(std::abs(v.exponent - 30454.5) < 0.05);
    CHECK(v.log_base == doctest::Approx(std::log(0.5 / 48.0)));
    CHECK(v.log_value == doctest::Approx(std::log(3.0) + v.exponent * v.log_base));
    CHECK(v.n_exponent == doctest::Approx(0.5));
    CHECK(v.efficient);

    // η = dτ_d and γ → 1 give the base 1/24.
    p.eta = 2.0;
    p.log_gamma = -1e-300;
    CHECK(general_bound(p).log_base == doctest::Approx(-std::log(24.0)));
    p.eta = 2.1;
    CHECK_THROWS_AS(general_bound(p), InputError);
    p.eta = 1.0;
    p.alpha = 1.0;
    CHECK_FALSE(general_bound(p).efficient);
    CHECK(general_bound(p).n_exponent == doctest::Approx(1.0));
}

TEST_CASE("bounds shrink with worse density and larger N (property)") {
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        GeneralBoundParams p;
        p.d = hermspec::testing::uniform_int(rng, 1, 4);
        p.N = hermspec::testing::uniform_int(rng, 1, 1000);
        p.log_gamma = -rng.uniform(0.01, 50.0);
        p.alpha = rng.uniform(0.0, 1.0);
        p.eps = rng.uniform(0.05, 1.0);
        p.D = rng.uniform(0.1, 10.0);
        p.kappa = rng.uniform(1.0, 100.0);
        p.eta = rng.uniform(0.01, 1.0) * p.d * unit_ball_volume(p.d);
        const BoundValue base = general_bound(p);
        CHECK(std::isfinite(base.log_value));
        CHECK(base.log_value < std::log(3.0 / p.kappa));

        GeneralBoundParams worse = p;
        worse.log_gamma *= 2.0;
        CHECK(general_bound(worse).log_value <= base.log_value);
        GeneralBoundParams larger = p;
        larger.N += 1;
        CHECK(general_bound(larger).log_value <= base.log_value);
        GeneralBoundParams wider = p;
        wider.D *= 1.5;
        CHECK(general_bound(wider).log_value <= base.log_value);
    }
}

TEST_CASE("cube lattice bound") {
    const DerivedBound b = cubes_bound({1, 4, 0.5, 0.5, 1.0, 16.0});
    const double exponent = 16.0 * 1.0 * 4.0 * std::pow(4.0, 0.75);
    CHECK(b.stated.exponent == doctest::Approx(exponent));
    CHECK(b.stated.log_base == doctest::Approx(std::log(0.5 / 16.0)));
    CHECK(b.stated.log_value == doctest::Approx(std::log(3.0) + exponent * std::log(0.5 / 16.0)));
    CHECK(b.stated.efficient);
    CHECK(b.C == doctest::Approx(32.0));
    CHECK(b.log_gamma_effective == doctest::Approx(2.0 * std::sqrt(64.0) * std::log(0.5)));
    CHECK(b.general.eta == doctest::Approx(1.0));
    CHECK(b.general.D == doctest::Approx(1.0));
    CHECK(b.via_general.n_exponent == doctest::Approx(0.75));
    CHECK_FALSE(cubes_bound({2, 4, 0.5, 1.0, 1.0, 16.0}).stated.efficient);
    CHECK_THROWS_AS(cubes_bound({1, 4, 1.0, 0.5, 1.0, 16.0}), InputError);
}

TEST_CASE("ball covering bound") {
    const DerivedBound b = balls_bound({1, 9, 0.5, 0.0, 0.5, 1.0, 16.0});
    CHECK(b.stated.n_exponent == doctest::Approx(0.75));
    CHECK(b.stated.exponent == doctest::Approx(16.0 * 4.0 * std::pow(9.0, 0.75)));
    CHECK(b.general.kappa == doctest::Approx(16.0));
    CHECK(b.general.eta == doctest::Approx(1.0));
    CHECK(b.C == doctest::Approx(32.0 * (1.0 + std::sqrt(std::log(16.0)))));
    CHECK(b.general.D == doctest::Approx(4.0 * b.C));
    CHECK(b.log_gamma_effective == doctest::Approx(2.0 * std::log(0.5)));
}

TEST_CASE("observability constant from spectral data") {
    ObservabilityParams p;
    p.d0 = 1.0;
    p.d1 = 1.0;
    p.zeta = 0.75;
    p.T = 1.0;
    // (1/1)·3^1·exp((1/1)^4) = 3e.
    CHECK(std::exp(log_cobs_squared(p)) == doctest::Approx(3.0 * e));
    p.d1 = 0.0;
    CHECK(std::exp(log_cobs_squared(p)) == doctest::Approx(3.0));
    // Short times blow up.
    p.d1 = 1.0;
    p.T = 0.01;
    CHECK(log_cobs_squared(p) > 1e3);
    p.zeta = 1.0;
    CHECK_THROWS_AS(log_cobs_squared(p), InputError);
}

TEST_CASE("spectral cut-off to degree") {
    CHECK(lambda_to_degree(5.0, 1) == 2);
    CHECK(lambda_to_degree(4.999, 1) == 1);
    CHECK(lambda_to_degree(0.5, 1) == -1);
    CHECK(lambda_to_degree(2.0, 2) == 0);
    CHECK(lambda_to_degree(1e6, 3) == 499998);
}

TEST_CASE("series and local weights") {
    CHECK(std::isinf(log_mk_series_bound(1.0, 4, 1, 0.05, 1.0)));
    const double s = log_mk_series_bound(1.0, 4, 1, 0.025, 1.0);
    CHECK(std::isfinite(s));
    // The m = 0 term alone is a lower bound.
    CHECK(s >= std::log(2.0) + 0.5 * bernstein_log_cb(0, 4, 1, 0.025));
    CHECK(log_mk_series_bound(4.0, 4, 1, 0.025, 1.0) == doctest::Approx(s + std::log(2.0)));

    // 12(1/48)^{4 log 2 / log 2 + 1} = 12·48^{−5} at M = 2, η = 1, ratio 1, d = 1.
    CHECK(log_local_weight(1.0, 1.0, 1, 2.0) == doctest::Approx(std::log(12.0) - 5.0 * std::log(48.0)));
    CHECK(log_local_weight(1.0, 0.0, 1, 2.0) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(log_local_weight(1.0, 1.0, 1, 0.5), InputError);
}
