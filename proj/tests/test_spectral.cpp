#include "doctest.h"
#include "generators.hpp"

#include "hermspec/spectral.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

using namespace hermspec;
using hermspec::testing::random_function;
using hermspec::testing::random_slab_set;
using hermspec::testing::uniform_int;

namespace {

SensorSet interval(double a, double b) {
    return SensorSet(1, {Region::box_from_bounds(std::vector<double>{a}, std::vector<double>{b})});
}

HermiteVector phi(int k) { return HermiteVector::basis_function(BasisIndexSet(1, k), MultiIndex({k})); }

}  // namespace

TEST_CASE("sharp constant on the half-line") {
    const SpectralConstant c1 = spectral_constant(gram_over_set(BasisIndexSet(1, 1), interval(0.0, 20.0)));
    CHECK(c1.lambda_min == doctest::Approx(0.5 - 1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-13));
    CHECK(c1.vector.norm() == doctest::Approx(1.0));
    CHECK(c1.residual < 1e-14);
    const SpectralConstant c0 = spectral_constant(gram_over_set(BasisIndexSet(1, 0), interval(0.0, 20.0)));
    CHECK(c0.lambda_min == doctest::Approx(0.5).epsilon(1e-14));
    // The minimizer realises the constant.
    const GramMatrix g = gram_over_set(BasisIndexSet(1, 6), interval(-0.3, 0.9));
    const SpectralConstant c = spectral_constant(g);
    CHECK(g.quadratic_form(c.vector) == doctest::Approx(c.lambda_min).epsilon(1e-12));
}

TEST_CASE("sharp constant is monotone in the set and non-increasing in N (property)") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = uniform_int(rng, 1, 2);
        const SensorSet s = random_slab_set(rng, d, uniform_int(rng, 1, 3), 3.0);
        // A superset: add a disjoint box far from the others.
        std::vector<Region> more = s.regions();
        std::vector<double> c(static_cast<std::size_t>(d), 0.0);
        c[0] = 10.0;
        more.push_back(Region::box(c, std::vector<double>(static_cast<std::size_t>(d), 1.0)));
        const SensorSet bigger(d, more);
        const int top = d == 1 ? 12 : 5;
        const GramMatrix g = gram_over_set(BasisIndexSet(d, top), s);
        const GramMatrix gb = gram_over_set(BasisIndexSet(d, top), bigger);
        double previous = 2.0;
        for (int N = 0; N <= top; ++N) {
            const double lam = spectral_constant(g.restricted(N)).lambda_min;
            CHECK(lam <= previous + 1e-14);
            CHECK(lam <= spectral_constant(gb.restricted(N)).lambda_min + 1e-14);
            CHECK(lam >= -1e-14);
            previous = lam;
        }
    }
}

TEST_CASE("derivative energies in closed form") {
    for (int k = 0; k <= 6; ++k) {
        const std::vector<double> e = derivative_energies(phi(k), 2);
        CHECK(e[0] == doctest::Approx(1.0));
        CHECK(e[1] == doctest::Approx(k + 0.5));
        // φ_k'' = ½[√(k(k−1)) φ_{k−2} − (2k+1) φ_k + √((k+1)(k+2)) φ_{k+2}].
        const double second = (k * (k - 1.0) + (2.0 * k + 1) * (2.0 * k + 1) + (k + 1.0) * (k + 2.0)) / 4.0;
        CHECK(e[2] == doctest::Approx(second / 2.0));
    }
    const HermiteVector f2 = HermiteVector::basis_function(BasisIndexSet(2, 1), MultiIndex({1, 0}));
    CHECK(derivative_energies(f2, 1)[1] == doctest::Approx(2.0));
}

TEST_CASE("global Bernstein inequality holds on random functions (property)") {
    SplitMix64 rng(505);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = uniform_int(rng, 1, 2);
        const int N = uniform_int(rng, 0, d == 1 ? 20 : 8);
        const HermiteVector f = random_function(rng, d, N);
        const double delta = rng.uniform(0.01, 1.0);
        for (const BernsteinRow& row : bernstein_check(f, 5, delta)) {
            CHECK(row.pass);
            CHECK(std::log(row.lhs) <= row.log_rhs);
        }
    }
}

TEST_CASE("cell classification invariants (property)") {
    SplitMix64 rng(606);
    for (int trial = 0; trial < 6; ++trial) {
        const int N = uniform_int(rng, 1, 8);
        const CoveringFamily cov = lattice_covering(1.0, 1, N);
        const HermiteVector f = random_function(rng, 1, N);
        const CellClassification c = classify_cells(f, cov, 5);
        CHECK(c.total_norm2 == doctest::Approx(1.0));
        CHECK(c.covered_norm2 + c.tail_norm2 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(c.bad_mass_fraction <= 0.5 + 1e-8);
        CHECK(c.far_mass_fraction <= 0.25 + 1e-8);
        CHECK(c.cells.size() == cov.elements.size());
        for (const CellRecord& r : c.cells) CHECK(r.good == (r.first_bad_m == 0));
        const MassIntersection mi = mass_intersection_check(f, c);
        CHECK(mi.ratio >= 0.25 - 1e-8);
        CHECK(mi.count >= 1);
    }
}

TEST_CASE("mass intersection failure carries the ledger") {
    const HermiteVector f = phi(0);
    CoveringFamily cov = lattice_covering(1.0, 1, 1);
    CHECK(mass_intersection_check(HermiteVector::zero(BasisIndexSet(1, 1)), classify_cells(HermiteVector::zero(BasisIndexSet(1, 1)), cov, 2)).degenerate);
    cov.is_central.assign(cov.is_central.size(), false);
    cov.central.clear();
    const CellClassification c = classify_cells(f, cov, 2);
    CHECK(c.far_mass_fraction == doctest::Approx(1.0));
    CHECK_THROWS_WITH_AS(mass_intersection_check(f, c), doctest::Contains("coefficients"), VerificationFailure);
    CHECK(cell_ledger(c).rfind("element central good", 0) == 0);
}

TEST_CASE("analytic continuation growth constant of phi_0") {
    // On Q = (−½, ½) with l = 1 the supremum over the sampled offsets sits at z = 4i, where
    // |φ_0| = π^{−1/4} e^{8}; the local norm is √erf(½).
    const Region q = Region::box({0.0}, {0.5});
    const MkEstimate m = estimate_Mk(phi(0), q, {1.0}, 101, 64);
    const double oracle = std::pow(std::numbers::pi, -0.25) * std::exp(8.0) / std::sqrt(boost::math::erf(0.5));
    CHECK(m.value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(m.samples == 101u * 128u);
    CHECK_THROWS_AS(estimate_Mk(phi(0), Region::box({1e4}, {0.5}), {1.0}, 5), InputError);
}

TEST_CASE("growth estimates are at least one and grow under nested refinement (property)") {
    SplitMix64 rng(707);
    for (int trial = 0; trial < 15; ++trial) {
        const int d = uniform_int(rng, 1, 2);
        const HermiteVector f = random_function(rng, d, d == 1 ? 10 : 4);
        std::vector<double> c(static_cast<std::size_t>(d));
        for (double& v : c) v = rng.uniform(-2.0, 2.0);
        const Region q = Region::box(c, std::vector<double>(static_cast<std::size_t>(d), 0.5));
        const std::vector<double> l(static_cast<std::size_t>(d), 1.0);
        const MkEstimate coarse = estimate_Mk(f, q, l, d == 1 ? 11 : 5, 16);
        const MkEstimate fine = estimate_Mk(f, q, l, d == 1 ? 21 : 9, 32);
        CHECK(coarse.value >= 1.0);
        CHECK(fine.value >= coarse.value);
    }
}

TEST_CASE("window moments agree with the regularised incomplete gamma function") {
    for (int N : {0, 1, 5, 20, 40}) {
        for (double M : {0.5, 2.0, 7.0}) {
            const double oracle = boost::math::lgamma(N + 0.5) + std::log(boost::math::gamma_p(N + 0.5, M * M));
            CHECK(log_window_moment(N, M) == doctest::Approx(oracle).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(log_window_moment(-1, 1.0), InputError);
    CHECK_THROWS_AS(log_window_moment(1, 0.0), InputError);
}

TEST_CASE("counterexample grows like N log N") {
    std::vector<int> degrees;
    for (int N = 10; N <= 40; ++N) degrees.push_back(N);
    const GrowthTable t = counterexample_growth(2.0, degrees);
    REQUIRE(t.rows.size() == degrees.size());
    for (const GrowthRow& r : t.rows) {
        CHECK(r.log_norm_full == doctest::Approx(boost::math::lgamma(r.N + 0.5)));
        CHECK(r.band_residual >= 0.0);
        CHECK(r.log_norm_window <= r.log_window_bound);
        CHECK(r.log_ratio > 0.0);
    }
    CHECK(t.fitted_c <= 1.0 + 2.0 * std::log(2.0));
    CHECK_THROWS_AS(counterexample_growth(2.0, {0}), InputError);
}

TEST_CASE("set hash and report") {
    const SensorSet a = interval(0.0, 1.0);
    CHECK(set_hash(a) == set_hash(interval(0.0, 1.0)));
    CHECK(set_hash(a) != set_hash(interval(0.0, 1.5)));
    BoundValue b;
    b.log_value = -3.0;
    const SpectralReport r = spectral_report(interval(0.0, 20.0), 1, b);
    CHECK(r.constant.lambda_min == doctest::Approx(0.1010577195985667).epsilon(1e-12));
    REQUIRE(r.log_margin.has_value());
    CHECK(*r.log_margin == doctest::Approx(std::log(r.constant.lambda_min) + 3.0));
    CHECK_FALSE(spectral_report(a, 2).log_margin.has_value());
}
