#include "hermspec/suite.hpp"

#include "hermspec/bounds.hpp"
#include "hermspec/config.hpp"
#include "hermspec/control.hpp"
#include "hermspec/gram.hpp"
#include "hermspec/random.hpp"
#include "hermspec/set_geometry.hpp"
#include "hermspec/spectral.hpp"
#include "hermspec/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace hermspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent random streams per criterion, so adding samples to one suite does not
// shift the draws of another.
SplitMix64 stream(std::uint64_t seed, std::uint64_t criterion) { return SplitMix64(seed ^ (criterion * 0x9e3779b97f4a7c15ULL)); }

SensorSet window_box(int d, double lo0, double window) {
    std::vector<double> lo(static_cast<std::size_t>(d), -window);
    std::vector<double> hi(static_cast<std::size_t>(d), window);
    lo[0] = lo0;
    return SensorSet(d, {Region::box_from_bounds(lo, hi)});
}

SensorSet example_set(int N) {
    return example_finite_measure_set(CubeDensitySpec{0.5, 0.5, 1.0, 1}, effective_support_radius(N) + 2.0).set;
}

template <class Body>
CriterionResult timed(int id, std::string name, Body body) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.failure = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

void fail_if(CriterionResult& r, bool bad, const std::string& why) {
    if (!bad) return;
    r.pass = false;
    if (r.failure.empty()) r.failure = why;
}

}  // namespace

std::string criterion_label(int id) { return fmt::format("AC{:02}", id); }

CriterionResult criterion_orthonormality() {
    return timed(1, "orthonormality", [](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-10;
        double worst = 0.0;
        for (auto [d, N] : {std::pair{1, 20}, std::pair{2, 10}}) {
            const GramMatrix g = gram_over_set(BasisIndexSet(d, N), window_box(d, -40.0, 40.0));
            const auto n = g.entries.rows();
            const double dev = (g.entries - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
            r.details.emplace_back(fmt::format("max_deviation_d{}_N{}", d, N), dev);
            worst = std::max(worst, dev);
        }
        r.value = worst;
        fail_if(r, !(worst <= r.tolerance), "Gram matrix deviates from the identity");
    });
}

CriterionResult criterion_decay(std::uint64_t seed) {
    return timed(2, "decay", [seed](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-6;
        SplitMix64 rng = stream(seed, 2);
        std::vector<GramMatrix> weighted;
        for (int N = 0; N < 16; ++N) weighted.push_back(gram_fullspace_weighted(BasisIndexSet(1, N), 1.0 / 64.0));
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const int N = i % 16;
            const HermiteVector f = random_unit_vector(BasisIndexSet(1, N), rng);
            const double ratio = weighted[static_cast<std::size_t>(N)].quadratic_form(f.coeffs()) / f.norm_squared();
            worst = std::max(worst, ratio / std::ldexp(1.0, 4 + N));
        }
        // Headline: the smallest relative headroom 1 − ratio/bound, which must reach the slack.
        r.value = 1.0 - worst;
        r.details.emplace_back("max_ratio_over_bound", worst);
        fail_if(r, !(r.value >= r.tolerance), "weighted norm exceeds the decay bound");
        const double phi0 = weighted[0].entries(0, 0);
        const double phi0_error = std::abs(phi0 - std::sqrt(32.0 / 31.0));
        r.details.emplace_back("phi0_ratio", phi0);
        r.details.emplace_back("phi0_error", phi0_error);
        fail_if(r, !(phi0_error <= 1e-9), "phi_0 ratio differs from sqrt(32/31)");
    });
}

CriterionResult criterion_concentration(std::uint64_t seed) {
    return timed(3, "concentration", [seed](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 0.25 + 1e-8;
        SplitMix64 rng = stream(seed, 3);
        const CoveringFamily cov = lattice_covering(1.0, 1, 10);
        const BasisIndexSet basis(1, 10);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const HermiteVector f = random_unit_vector(basis, rng);
            worst = std::max(worst, classify_cells(f, cov, 5).far_mass_fraction);
        }
        r.value = worst;
        r.details.emplace_back("concentration_radius", cov.central_radius);
        fail_if(r, !(worst <= r.tolerance), "far mass exceeds one quarter");
    });
}

CriterionResult criterion_bernstein(std::uint64_t seed) {
    return timed(4, "bernstein", [seed](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-10;
        SplitMix64 rng = stream(seed, 4);
        const int N = 10, m_max = 5;
        const double delta = delta_choice(1.0, N, 1.0);
        const BasisIndexSet basis(1, N);
        const BasisIndexSet big(1, N + m_max);
        const GramMatrix window = gram_over_set(big, window_box(1, -60.0, 60.0));
        double worst_log_margin = -kInf;
        double worst_dev = 0.0;
        for (int i = 0; i < 100; ++i) {
            const HermiteVector f = random_unit_vector(basis, rng);
            for (const BernsteinRow& row : bernstein_check(f, m_max, delta)) {
                if (row.lhs > 0.0) worst_log_margin = std::max(worst_log_margin, std::log(row.lhs) - row.log_rhs);
                fail_if(r, !row.pass, fmt::format("Bernstein inequality fails at m = {}", row.m));
                const HermiteVector dm = partial_derivative(f, MultiIndex({row.m})).embedded(big);
                const double quad = window.quadratic_form(dm.coeffs()) / std::tgamma(row.m + 1.0);
                worst_dev = std::max(worst_dev, std::abs(quad - row.lhs) / std::max(1.0, row.lhs));
            }
        }
        r.value = worst_dev;
        r.details.emplace_back("delta", delta);
        r.details.emplace_back("max_log_lhs_over_rhs", worst_log_margin);
        fail_if(r, !(worst_dev <= r.tolerance), "ladder derivative norms disagree with quadrature");
    });
}

CriterionResult criterion_bad_mass(std::uint64_t seed) {
    return timed(5, "bad_mass", [seed](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 0.5 + 1e-8;
        SplitMix64 rng = stream(seed, 5);
        const CoveringFamily cov = lattice_covering(1.0, 1, 10);
        const BasisIndexSet basis(1, 10);
        double worst_bad = 0.0, worst_ratio = kInf;
        int largest_flip = 0;
        for (int i = 0; i < 100; ++i) {
            const HermiteVector f = random_unit_vector(basis, rng);
            const CellClassification c = classify_cells(f, cov, 5);
            worst_bad = std::max(worst_bad, c.bad_mass_fraction);
            largest_flip = std::max(largest_flip, c.largest_flip_m);
            try {
                const MassIntersection mi = mass_intersection_check(f, c);
                worst_ratio = std::min(worst_ratio, mi.ratio);
            } catch (const VerificationFailure& e) {
                fail_if(r, true, e.what());
            }
        }
        r.value = worst_bad;
        r.details.emplace_back("min_intersection_ratio", worst_ratio);
        r.details.emplace_back("largest_flip_m", largest_flip);
        fail_if(r, !(worst_bad <= r.tolerance), "bad mass exceeds one half");
        fail_if(r, !(worst_ratio >= 0.25 - 1e-8), "central good mass below one quarter");
    });
}

CriterionResult criterion_sharp_constant() {
    return timed(6, "sharp_constant", [](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-8;
        const double l1 = spectral_constant(gram_over_set(BasisIndexSet(1, 1), window_box(1, 0.0, default_window(1, 1)))).lambda_min;
        const double l0 = spectral_constant(gram_over_set(BasisIndexSet(1, 0), window_box(1, 0.0, default_window(1, 0)))).lambda_min;
        const double e1 = std::abs(l1 - (0.5 - 1.0 / std::sqrt(2.0 * std::numbers::pi)));
        const double e0 = std::abs(l0 - 0.5);
        r.value = e1;
        r.details.emplace_back("lambda_min_N1", l1);
        r.details.emplace_back("lambda_min_N0", l0);
        r.details.emplace_back("error_N0", e0);
        fail_if(r, !(e1 <= 1e-8), "N = 1 constant differs from 1/2 - 1/sqrt(2 pi)");
        fail_if(r, !(e0 <= 1e-10), "N = 0 constant differs from 1/2");
    });
}

CriterionResult criterion_bound_direction() {
    return timed(7, "bound_direction", [](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 0.0;
        const SensorSet set = example_set(8);
        // The example's lattice ratios are 2^{-d} γ^{1+|k|^β} ≥ (γ/2^d)^{1+|k|^β}.
        const CubeDensitySpec effective{0.25, 0.5, 1.0, 1};
        const DensityReport density = density_check(set, effective, effective_support_radius(8));
        fail_if(r, !density.pass, "example set violates the density condition with gamma/2");
        const GramMatrix g = gram_over_set(BasisIndexSet(1, 8), set);
        double worst = kInf;
        for (int N = 1; N <= 8; ++N) {
            const double lam = spectral_constant(g.restricted(N)).lambda_min;
            const BoundValue b = cubes_bound(CubesBoundParams{1, N, effective.gamma, effective.beta, 1.0, 16.0}).via_general;
            const double margin = (lam > 0.0 ? std::log(lam) : -kInf) - b.log_value;
            r.details.emplace_back(fmt::format("log_lambda_min_N{}", N), lam > 0.0 ? std::log(lam) : -kInf);
            r.details.emplace_back(fmt::format("log_bound_N{}", N), b.log_value);
            worst = std::min(worst, margin);
        }
        r.value = worst;
        fail_if(r, !(worst >= 0.0), "sharp constant below the theoretical bound");
    });
}

CriterionResult criterion_counterexample() {
    return timed(8, "counterexample", [](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 0.0;
        std::vector<int> degrees;
        for (int N = 10; N <= 40; ++N) degrees.push_back(N);
        const GrowthTable t = counterexample_growth(2.0, degrees);
        double worst_band = kInf;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const GrowthRow& row = t.rows[i];
            fail_if(r, !(row.log_norm_window <= row.log_window_bound), fmt::format("window norm above sqrt(pi) M^2N at N = {}", row.N));
            if (i > 0) fail_if(r, !(row.log_ratio > t.rows[i - 1].log_ratio), fmt::format("log-ratio not increasing at N = {}", row.N));
            worst_band = std::min(worst_band, row.band_residual + std::log(static_cast<double>(row.N)));
        }
        r.value = worst_band;
        r.details.emplace_back("fitted_c", t.fitted_c);
        r.details.emplace_back("c_reference", 2.0 + 2.0 * std::log(2.0));
        fail_if(r, !(worst_band >= 0.0), "log-ratio leaves the -log N band");
    });
}

CriterionResult criterion_gramian() {
    return timed(9, "observability_gramian", [](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-8;
        const int N = 12;
        const double W = default_window(1, N);
        const std::vector<std::pair<std::string, SensorSet>> sets = {
            {"fullspace", window_box(1, -W, W)}, {"halfline", window_box(1, 0.0, W)}, {"example", example_set(N)}};
        double worst = 0.0;
        for (const auto& [name, set] : sets) {
            const GramMatrix g = gram_over_set(BasisIndexSet(1, N), set);
            for (double T : {0.1, 1.0}) {
                const double dev = (observability_gramian(g, T) - observability_gramian_quadrature(g, T, 100)).cwiseAbs().maxCoeff();
                r.details.emplace_back(fmt::format("deviation_{}_T{}", name, format_double(T)), dev);
                worst = std::max(worst, dev);
            }
        }
        r.value = worst;
        fail_if(r, !(worst <= r.tolerance), "closed-form Gramian disagrees with time quadrature");
    });
}

CriterionResult criterion_hum(std::uint64_t seed) {
    return timed(10, "hum_control", [seed](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-6;
        SplitMix64 rng = stream(seed, 10);
        const int N = 12;
        const double T = 1.0;
        const BasisIndexSet basis(1, N);
        const GramMatrix g = gram_over_set(basis, example_set(N));
        const ObservabilityConstant oc = observability_constant_num(g, T);
        double worst_residual = 0.0, worst_cost_ratio = 0.0, worst_cost_check = 0.0;
        for (int i = 0; i < 50; ++i) {
            const HermiteVector p = random_unit_vector(basis, rng);
            const double norm = std::sqrt(p.norm_squared());
            const ControlResult c = hum_control(g, T, p);
            worst_residual = std::max(worst_residual, c.terminal_residual / norm);
            worst_cost_ratio = std::max(worst_cost_ratio, c.cost / (oc.c_obs * norm));
            worst_cost_check = std::max(worst_cost_check, std::abs(c.cost * c.cost - c.cost_squared_unscaled) / (c.cost * c.cost));
        }
        const ControlResult worst = hum_control(g, T, HermiteVector(basis, oc.worst_state));
        const double duality = std::abs(worst.cost - oc.c_obs) / oc.c_obs;
        r.value = duality;
        r.details.emplace_back("c_obs_num", oc.c_obs);
        r.details.emplace_back("lambda_min_B", oc.lambda_min_B);
        r.details.emplace_back("max_relative_terminal_residual", worst_residual);
        r.details.emplace_back("max_cost_over_cobs", worst_cost_ratio);
        r.details.emplace_back("max_cost_squared_mismatch", worst_cost_check);
        fail_if(r, !(worst_residual <= 1e-8), "terminal residual above 1e-8 |phi0|");
        fail_if(r, !(worst_cost_ratio <= 1.0 + 1e-8), "control cost exceeds C_obs |phi0|");
        fail_if(r, !(worst_cost_check <= 1e-9), "cost squared differs from eta^T B eta");
        fail_if(r, !(duality <= r.tolerance), "worst-case cost differs from C_obs");
    });
}

CriterionResult criterion_besicovitch(const std::vector<int>& d2_degrees) {
    return timed(11, "besicovitch", [&d2_degrees](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1.0;
        BallDensitySpec spec;
        spec.gamma = 0.5;
        spec.alpha = 0.0;
        spec.eps = 0.5;
        spec.R = 1.0;
        spec.profile = RadiusProfile::power_law;
        double worst_overlap = 0.0;
        std::vector<std::pair<int, int>> runs;
        for (int N = 1; N <= 9; ++N) runs.emplace_back(1, N);
        for (int N : d2_degrees) runs.emplace_back(2, N);
        for (auto [d, N] : runs) {
            const BesicovitchResult b = besicovitch_covering(spec, d, N, 16.0);
            const double kappa = std::pow(16.0, d);
            const double cap = 2.0 * spec.R * concentration_radius(d, kappa) * std::pow(N, (1.0 - spec.eps) / 2.0);
            double max_radius = 0.0;
            for (const CoveringElement& e : b.covering.elements)
                if (!e.remainder) max_radius = std::max(max_radius, e.region.radius());
            const std::string tag = fmt::format("d{}_N{}", d, N);
            r.details.emplace_back("balls_" + tag, static_cast<double>(b.covering.elements.size() - 1));
            r.details.emplace_back("uncovered_" + tag, static_cast<double>(b.uncovered_points));
            r.details.emplace_back("overlap_" + tag, b.measured_overlap);
            r.details.emplace_back("max_radius_over_cap_" + tag, max_radius / cap);
            fail_if(r, b.uncovered_points != 0, "grid point left uncovered (" + tag + ")");
            fail_if(r, b.overlap_saturated, "overlap counter saturated (" + tag + ")");
            fail_if(r, !(max_radius <= cap), "ball radius above 2RC N^((1-eps)/2) (" + tag + ")");
            worst_overlap = std::max(worst_overlap, b.measured_overlap / kappa);
        }
        r.value = worst_overlap;
        fail_if(r, !(worst_overlap <= 1.0), "overlap exceeds 16^d");
    });
}

CriterionResult criterion_scaling(std::uint64_t seed) {
    return timed(12, "scaling_identity", [seed](CriterionResult& r) {
        r.pass = true;
        r.tolerance = 1e-9;
        SplitMix64 rng = stream(seed, 12);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const int d = i < 14 ? 1 : 2;
            const HermiteVector f = random_unit_vector(BasisIndexSet(d, 5), rng);
            std::vector<Region> regions;
            std::vector<double> c(static_cast<std::size_t>(d)), h(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) {
                c[static_cast<std::size_t>(j)] = rng.uniform(-3.0, 1.0);
                h[static_cast<std::size_t>(j)] = rng.uniform(0.2, 1.5);
            }
            regions.push_back(Region::box(c, h));
            // The second piece sits to the right along the first axis, so the pieces never overlap.
            const double start = c[0] + h[0] + rng.uniform(0.1, 1.0);
            if (i == 19) {
                const double radius = rng.uniform(0.3, 1.0);
                std::vector<double> bc(static_cast<std::size_t>(d), 0.0);
                bc[0] = start + radius;
                regions.push_back(Region::ball(bc, radius));
            } else if (i % 2 == 1) {
                std::vector<double> c2(static_cast<std::size_t>(d)), h2(static_cast<std::size_t>(d));
                for (int j = 0; j < d; ++j) {
                    h2[static_cast<std::size_t>(j)] = rng.uniform(0.2, 1.5);
                    c2[static_cast<std::size_t>(j)] = rng.uniform(-2.0, 2.0);
                }
                c2[0] = start + h2[0];
                regions.push_back(Region::box(c2, h2));
            }
            const double t = std::exp(rng.uniform(std::log(0.1), std::log(20.0)));
            const ScalingCheck s = scaling_identity_check(f, SensorSet(d, std::move(regions)), t);
            worst = std::max(worst, s.difference);
        }
        r.value = worst;
        fail_if(r, !(worst <= r.tolerance), "scaling identity violated");
    });
}

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options) {
    std::vector<CriterionResult> out;
    out.push_back(criterion_orthonormality());
    out.push_back(criterion_decay(options.seed));
    out.push_back(criterion_concentration(options.seed));
    out.push_back(criterion_bernstein(options.seed));
    out.push_back(criterion_bad_mass(options.seed));
    out.push_back(criterion_sharp_constant());
    out.push_back(criterion_bound_direction());
    out.push_back(criterion_counterexample());
    out.push_back(criterion_gramian());
    out.push_back(criterion_hum(options.seed));
    out.push_back(criterion_besicovitch(options.besicovitch_d2_degrees));
    out.push_back(criterion_scaling(options.seed));
    return out;
}

std::string summary_csv(const std::vector<CriterionResult>& results) {
    std::string out = "criterion,name,status,value,tolerance\n";
    for (const CriterionResult& r : results)
        out += fmt::format("{},{},{},{},{}\n", criterion_label(r.id), r.name, r.pass ? "pass" : "fail",
                           format_double(r.value), format_double(r.tolerance));
    return out;
}

std::string details_csv(const std::vector<CriterionResult>& results) {
    std::string out = "criterion,key,value\n";
    for (const CriterionResult& r : results)
        for (const auto& [key, value] : r.details)
            out += fmt::format("{},{},{}\n", criterion_label(r.id), key, format_double(value));
    return out;
}

std::string manifest_line(const CriterionResult& r) {
    return fmt::format("{} {} {} {}", criterion_label(r.id), r.pass ? "pass" : "fail", format_double(r.value),
                       format_double(r.tolerance));
}

}  // namespace hermspec
