#include "doctest.h"
#include "generators.hpp"

#include "hermspec/control.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

using namespace hermspec;
using hermspec::testing::random_function;
using hermspec::testing::random_slab_set;
using hermspec::testing::uniform_int;

namespace {

SensorSet interval(double a, double b) {
    return SensorSet(1, {Region::box_from_bounds(std::vector<double>{a}, std::vector<double>{b})});
}

}  // namespace

TEST_CASE("semigroup scales coefficients by the eigenvalues") {
    const HermiteVector phi0 = HermiteVector::basis_function(BasisIndexSet(2, 2), MultiIndex({0, 0}));
    CHECK(semigroup_apply(phi0, 1.0).coeffs()(0) == doctest::Approx(std::exp(-2.0)));
    const HermiteVector mixed = HermiteVector::basis_function(BasisIndexSet(2, 2), MultiIndex({1, 1}));
    CHECK(semigroup_apply(mixed, 0.5).coeffs().norm() == doctest::Approx(std::exp(-3.0)));
    CHECK(semigroup_apply(mixed, 0.0).coeffs() == mixed.coeffs());
    CHECK_THROWS_AS(semigroup_apply(mixed, -1.0), InputError);
}

TEST_CASE("semigroup property and contraction (property)") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = uniform_int(rng, 1, 3);
        const HermiteVector f = random_function(rng, d, uniform_int(rng, 0, 6));
        const double s = rng.uniform(0.0, 2.0), t = rng.uniform(0.0, 2.0);
        const HermiteVector a = semigroup_apply(semigroup_apply(f, s), t);
        const HermiteVector b = semigroup_apply(f, s + t);
        CHECK((a.coeffs() - b.coeffs()).norm() <= 1e-15);
        CHECK(semigroup_apply(f, t).coeffs().norm() <= std::exp(-d * t) * f.coeffs().norm() * (1 + 1e-15));
    }
}

TEST_CASE("Gramian agrees with Gauss quadrature in time") {
    const GramMatrix g = gram_over_set(BasisIndexSet(1, 8), interval(-0.5, 1.5));
    for (double T : {0.1, 1.0, 3.0}) {
        const Eigen::MatrixXd closed = observability_gramian(g, T);
        const Eigen::MatrixXd quad = observability_gramian_quadrature(g, T);
        Eigen::MatrixXd oracle(g.entries.rows(), g.entries.cols());
        for (int a = 0; a <= 8; ++a)
            for (int b = 0; b <= 8; ++b) {
                const double rate = (2.0 * a + 1.0) + (2.0 * b + 1.0);
                oracle(a, b) = boost::math::quadrature::gauss<double, 30>::integrate([&](double t) { return std::exp(-rate * t); }, 0.0, T) *
                               g.entries(a, b);
            }
        CHECK((closed - oracle).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((quad - oracle).cwiseAbs().maxCoeff() < 1e-14);
        // The scaled Gramian is e^{TH} B e^{TH}.
        Eigen::VectorXd grow(9);
        for (int a = 0; a <= 8; ++a) grow(a) = std::exp((2.0 * a + 1.0) * T);
        const Eigen::MatrixXd scaled = scaled_observability_gramian(g, T);
        CHECK((scaled - grow.asDiagonal() * closed * grow.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-12 * scaled.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("observability constant in closed form for N = 0") {
    // B = (1 − e^{−2T})·G/2 and C² = e^{−2T}/B.
    for (double T : {0.1, 1.0, 4.0}) {
        const ObservabilityConstant full = observability_constant_num(gram_over_set(BasisIndexSet(1, 0), interval(-30.0, 30.0)), T);
        CHECK(full.c_obs == doctest::Approx(std::sqrt(2.0 / std::expm1(2.0 * T))).epsilon(1e-12));
        const ObservabilityConstant half = observability_constant_num(gram_over_set(BasisIndexSet(1, 0), interval(0.0, 30.0)), T);
        CHECK(half.c_obs == doctest::Approx(std::sqrt(4.0 / std::expm1(2.0 * T))).epsilon(1e-12));
        CHECK(half.lambda_min_B == doctest::Approx(-std::expm1(-2.0 * T) / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("unobservable sets are reported") {
    const GramMatrix empty = gram_over_set(BasisIndexSet(1, 3), SensorSet::empty(1));
    CHECK_THROWS_AS(observability_constant_num(empty, 1.0), NotObservable);
    try {
        hum_control(empty, 1.0, HermiteVector::basis_function(BasisIndexSet(1, 3), MultiIndex({0})));
        FAIL("expected NotObservable");
    } catch (const NotObservable& e) {
        CHECK(e.lambda_min() <= 1e-14);
    }
    CHECK_THROWS_AS(observability_gramian(empty, 0.0), InputError);
}

TEST_CASE("HUM control for N = 0 costs exactly C_obs") {
    const GramMatrix g = gram_over_set(BasisIndexSet(1, 0), interval(0.0, 30.0));
    const HermiteVector phi0 = HermiteVector::basis_function(BasisIndexSet(1, 0), MultiIndex({0}));
    const ControlResult r = hum_control(g, 1.0, phi0, 64);
    CHECK(r.cost == doctest::Approx(std::sqrt(4.0 / std::expm1(2.0))).epsilon(1e-12));
    CHECK(r.cost == doctest::Approx(r.c_obs).epsilon(1e-12));
    CHECK(r.cost * r.cost == doctest::Approx(r.cost_squared_unscaled).epsilon(1e-10));
    CHECK(r.terminal_residual < 1e-14);
    CHECK(r.simulated_residual < 1e-12);
    REQUIRE(r.trajectory.size() == 65);
    CHECK(r.trajectory.front().t == 0.0);
    CHECK(r.trajectory.back().t == doctest::Approx(1.0));
    CHECK(r.trajectory.back().running_cost == doctest::Approx(r.cost * r.cost).epsilon(1e-8));
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) CHECK(r.trajectory[i].running_cost >= r.trajectory[i - 1].running_cost);

    const ControlResult zero = hum_control(g, 1.0, HermiteVector::zero(BasisIndexSet(1, 0)));
    CHECK(zero.cost == 0.0);

    const std::string csv = trajectory_csv(r);
    CHECK(csv.rfind("t,phi_0,u_0,running_cost\n", 0) == 0);
}

TEST_CASE("HUM cost is bounded by C_obs and attained by the worst state (property)") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = uniform_int(rng, 1, 2);
        const int N = uniform_int(rng, 1, d == 1 ? 10 : 4);
        const SensorSet s = random_slab_set(rng, d, uniform_int(rng, 1, 3), 3.0);
        const GramMatrix g = gram_over_set(BasisIndexSet(d, N), s);
        const double T = rng.uniform(0.2, 2.0);
        const ObservabilityConstant oc = observability_constant_num(g, T);
        for (int k = 0; k < 5; ++k) {
            const HermiteVector phi0 = random_function(rng, d, N);
            const ControlResult r = hum_control(g, T, phi0, 32);
            CHECK(r.cost <= oc.c_obs * (1.0 + 1e-9));
            CHECK(r.terminal_residual <= 1e-8);
        }
        const ControlResult worst = hum_control(g, T, HermiteVector(BasisIndexSet(d, N), oc.worst_state), 32);
        CHECK(worst.cost == doctest::Approx(oc.c_obs).epsilon(1e-8));

        // Longer horizons and larger sets observe better.
        CHECK(observability_constant_num(g, T * 1.5).c_obs <= oc.c_obs * (1.0 + 1e-12));
        std::vector<Region> more = s.regions();
        std::vector<double> c(static_cast<std::size_t>(d), 0.0);
        c[0] = 8.0;
        more.push_back(Region::box(c, std::vector<double>(static_cast<std::size_t>(d), 1.0)));
        const GramMatrix gb = gram_over_set(BasisIndexSet(d, N), SensorSet(d, more));
        CHECK(observability_constant_num(gb, T).c_obs <= oc.c_obs * (1.0 + 1e-12));
    }
}
