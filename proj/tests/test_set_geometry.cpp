#include "doctest.h"
#include "generators.hpp"

#include "hermspec/errors.hpp"
#include "hermspec/set_geometry.hpp"

#include <cmath>
#include <numbers>

using namespace hermspec;
using hermspec::testing::random_box;
using hermspec::testing::random_slab_set;
using hermspec::testing::uniform_int;

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
    CHECK(unit_ball_volume(4) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0));
    CHECK_THROWS_AS(unit_ball_volume(0), InputError);
}

TEST_CASE("region measure, diameter and membership") {
    const Region b = Region::box_from_bounds(std::vector<double>{0.0, -1.0}, std::vector<double>{2.0, 2.0});
    CHECK(b.measure() == doctest::Approx(6.0));
    CHECK(b.diameter() == doctest::Approx(std::sqrt(13.0)));
    CHECK(b.contains(std::vector<double>{1.0, 0.0}));
    CHECK_FALSE(b.contains(std::vector<double>{2.0, 0.0}));  // open
    CHECK(b.side_lengths() == std::vector<double>{2.0, 3.0});

    const Region ball = Region::ball({1.0, 1.0}, 2.0);
    CHECK(ball.measure() == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(ball.diameter() == doctest::Approx(4.0));
    CHECK(ball.side_lengths() == std::vector<double>{4.0, 4.0});
    CHECK_FALSE(ball.contains(std::vector<double>{3.0, 1.0}));

    const Region scaled = ball.dilated(2.0);
    CHECK(scaled.radius() == doctest::Approx(4.0));
    CHECK(scaled.center() == std::vector<double>{2.0, 2.0});

    CHECK_THROWS_AS(Region::ball({0.0}, 0.0), InputError);
    CHECK_THROWS_AS(Region::box({0.0}, {-1.0}), InputError);
    CHECK_THROWS_AS(Region::box({NAN}, {1.0}), InputError);
}

TEST_CASE("interior intersection of boxes and balls") {
    const Region a = Region::box({0.0, 0.0}, {1.0, 1.0});
    CHECK_FALSE(interiors_intersect(a, Region::box({2.0, 0.0}, {1.0, 1.0})));  // shared face
    CHECK(interiors_intersect(a, Region::box({1.9, 0.0}, {1.0, 1.0})));
    CHECK_FALSE(interiors_intersect(Region::ball({0.0, 0.0}, 1.0), Region::ball({2.0, 0.0}, 1.0)));
    CHECK(interiors_intersect(Region::ball({0.0, 0.0}, 1.0), Region::ball({1.9, 0.0}, 1.0)));
    // The corner of the box lies outside the ball.
    CHECK_FALSE(interiors_intersect(Region::ball({2.0, 2.0}, 1.4), a));
    CHECK(interiors_intersect(Region::ball({2.0, 2.0}, 1.5), a));
}

TEST_CASE("sensor sets reject overlaps and mixed dimensions") {
    CHECK_THROWS_AS(SensorSet(1, {Region::box({0.0}, {1.0}), Region::box({1.5}, {1.0})}), InputError);
    CHECK_THROWS_AS(SensorSet(2, {Region::box({0.0}, {1.0})}), InputError);
    const SensorSet s(1, {Region::box({0.0}, {1.0}), Region::box({2.0}, {1.0})});
    CHECK(s.measure() == doctest::Approx(4.0));
    CHECK_FALSE(s.contains(std::vector<double>{1.0}));
    CHECK(SensorSet::empty(3).measure() == 0.0);
}

TEST_CASE("measure is additive over random slab sets (property)") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = uniform_int(rng, 1, 3);
        const SensorSet s = random_slab_set(rng, d, uniform_int(rng, 1, 5), 4.0);
        double total = 0.0;
        for (const Region& r : s.regions()) total += r.measure();
        CHECK(s.measure() == doctest::Approx(total));
        const SensorSet t = scaled_set(s, 16.0);
        CHECK(t.measure() == doctest::Approx(std::pow(2.0, d) * s.measure()));
    }
}

TEST_CASE("example set realises the lattice ratios exactly") {
    const CubeDensitySpec spec{0.5, 0.5, 1.0, 1};
    const ExampleSet ex = example_finite_measure_set(spec, 6.0);
    CHECK(ex.set.regions().size() == 13);
    for (const DensityCell& c : ex.lattice_ratios.cells) {
        const double r = 0.5 * std::pow(0.5, 1.0 + std::pow(std::abs(c.k[0]), 0.5));
        CHECK(c.measured == doctest::Approx(r).epsilon(1e-14));
    }
    // Finite measure: Σ_k r_k converges.
    CHECK(ex.set.measure() < 3.0);

    // Each unit cell holds 2^{−d} γ^{1+|k|^β}: the condition fails for γ itself and holds
    // for γ/2^d, since (γ/2)^{1+|k|^β} ≤ γ^{1+|k|^β}/2.
    CHECK_FALSE(ex.lattice_ratios.pass);
    CHECK_FALSE(density_check(ex.set, CubeDensitySpec{0.5, 0.5, 1.0, 1}, 6.0).pass);
    const DensityReport halved = density_check(ex.set, CubeDensitySpec{0.25, 0.5, 1.0, 1}, 6.0);
    CHECK(halved.pass);
    for (const DensityCell& c : halved.cells) CHECK(c.measured == doctest::Approx(0.5 * std::pow(0.5, 1.0 + std::sqrt(std::abs(c.k[0])))));
}

TEST_CASE("cube density check on a two-dimensional example") {
    const ExampleSet ex = example_finite_measure_set(CubeDensitySpec{0.5, 0.0, 1.0, 2}, 3.0);
    CHECK(ex.set.regions().size() == 49);
    // With β = 0 the exponent 1 + |k|^0 is 2 everywhere.
    for (const DensityCell& c : ex.lattice_ratios.cells) CHECK(c.measured == doctest::Approx(0.0625));
    CHECK(density_check(ex.set, CubeDensitySpec{0.125, 0.0, 1.0, 2}, 3.0).pass);
    CHECK_FALSE(density_check(ex.set, CubeDensitySpec{0.5, 0.0, 1.0, 2}, 3.0).pass);
    const SensorSet with_ball(2, {Region::ball({0.0, 0.0}, 1.0)});
    CHECK_THROWS_AS(density_check(with_ball, CubeDensitySpec{0.5, 0.0, 1.0, 2}, 1.0), UnsupportedError);
}

TEST_CASE("rasterized ball intersections converge") {
    const SensorSet full(2, {Region::box({0.0, 0.0}, {10.0, 10.0})});
    const Region ball = Region::ball({0.5, -0.5}, 1.0);
    CHECK(rasterized_intersection_volume(full, ball, 400) == doctest::Approx(std::numbers::pi).epsilon(1e-3));
    const SensorSet half(2, {Region::box_from_bounds(std::vector<double>{0.5, -10.0}, std::vector<double>{10.0, 10.0})});
    CHECK(rasterized_intersection_volume(half, ball, 400) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-3));

    const BallDensitySpec spec{0.5, 0.0, 1.0, 1.0, RadiusProfile::constant, 1.0};
    const std::vector<std::vector<double>> centers{{0.5, -0.5}};
    const auto samples = ball_density_check(half, spec, centers, 64);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].measured == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(samples[0].pass);
}

TEST_CASE("ball density radius profile") {
    const BallDensitySpec spec{0.5, 0.0, 0.5, 2.0, RadiusProfile::power_law, 1.0};
    const std::vector<double> x{3.0, 4.0};
    CHECK(spec.radius_cap(x) == doctest::Approx(2.0 * std::pow(26.0, 0.25)));
    CHECK(spec.radius_at(x) <= spec.radius_cap(x) + 1e-15);
    CHECK_THROWS_AS((BallDensitySpec{0.5, 0.0, 0.0, 1.0, RadiusProfile::power_law, 1.0}.validate()), InputError);
    CHECK_THROWS_AS((BallDensitySpec{0.5, 0.0, 1.0, 1.0, RadiusProfile::constant, 2.0}.validate()), InputError);
}

TEST_CASE("lattice covering parameters and central cells") {
    const CoveringFamily cov = lattice_covering(1.0, 2, 4);
    CHECK(cov.params.eta == doctest::Approx(0.5));
    CHECK(cov.params.D == doctest::Approx(2.0));
    CHECK(cov.params.eps == 1.0);
    CHECK(cov.kappa == 1.0);
    CHECK(cov.central_radius == doctest::Approx(64.0 * 2.0));
    for (std::size_t i = 0; i < cov.elements.size(); ++i) {
        const Region& q = cov.elements[i].region;
        // Nearest point of the closed cube to the origin decides centrality.
        double dist2 = 0.0;
        for (int j = 0; j < 2; ++j) {
            const double c = std::abs(q.center()[static_cast<std::size_t>(j)]);
            dist2 += std::pow(std::max(0.0, c - 0.5), 2);
        }
        CHECK(cov.is_central[i] == (std::sqrt(dist2) < cov.central_radius));
    }
    const CoveringCheck check = check_covering(cov, 20.0, 41);
    CHECK(check.uncovered == 0);
    CHECK(check.max_overlap == 1);
    CHECK(check.overlap_ok);
    CHECK(check.shape_ok);
    CHECK(check.side_lengths_ok);
    CHECK(check.eta_within_cap);
}

TEST_CASE("Besicovitch covering in one dimension") {
    const BallDensitySpec spec{0.5, 0.0, 0.5, 1.0, RadiusProfile::power_law, 1.0};
    const BesicovitchResult r = besicovitch_covering(spec, 1, 2, 16.0);
    CHECK(r.uncovered_points == 0);
    CHECK(r.measured_overlap >= 1);
    CHECK(r.measured_overlap <= 16);
    CHECK_FALSE(r.overlap_saturated);
    CHECK(r.covering.kappa == doctest::Approx(16.0));
    for (std::size_t i = 0; i < r.covering.elements.size(); ++i) {
        const CoveringElement& e = r.covering.elements[i];
        if (e.remainder) continue;
        // Each selected radius respects the cap at its center.
        CHECK(e.region.radius() <= spec.radius_cap(e.region.center()) + 1e-12);
    }
    const std::vector<double> origin{0.0};
    CHECK(covering_multiplicity(r.covering, origin) >= 1);
}

TEST_CASE("serialization round-trips") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = uniform_int(rng, 1, 3);
        const SensorSet s = random_slab_set(rng, d, uniform_int(rng, 0, 4), 5.0);
        const SensorSet back = parse_sensor_set(serialize(s));
        CHECK(back.regions() == s.regions());
        CHECK(back.dim() == d);
    }
    const SensorSet balls(2, {Region::ball({0.1, 0.2}, 0.3), Region::ball({5.0, 5.0}, 1.0 / 3.0)});
    CHECK(parse_sensor_set(serialize(balls)).regions() == balls.regions());

    const CoveringFamily cov = lattice_covering(1.0, 1, 3);
    const CoveringFamily back = parse_covering(serialize(cov));
    CHECK(back.elements.size() == cov.elements.size());
    CHECK(back.central == cov.central);
    CHECK(back.kappa == cov.kappa);
    CHECK(back.params.eta == cov.params.eta);

    CHECK_THROWS_AS(parse_region(2, "box 0 0 1"), InputError);
    CHECK_THROWS_AS(parse_region(1, "cone 0 1"), InputError);
    CHECK_THROWS_AS(parse_sensor_set("box 0 1\n"), InputError);
}

TEST_CASE("random boxes are valid (generator sanity)") {
    SplitMix64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const Region b = random_box(rng, 3, 2.0);
        for (double l : b.side_lengths()) CHECK(l >= 0.05 - 1e-12);
    }
}
