// Batch front-end: one subcommand per verification suite, CSV output plus a
// pass/fail manifest. Exit status 0 when every asserted check passes, 1 on a failed
// check or numerical failure, 2 on a configuration error.

#include "hermspec/bounds.hpp"
#include "hermspec/config.hpp"
#include "hermspec/control.hpp"
#include "hermspec/gram.hpp"
#include "hermspec/jacobi.hpp"
#include "hermspec/random.hpp"
#include "hermspec/set_geometry.hpp"
#include "hermspec/spectral.hpp"
#include "hermspec/suite.hpp"
#include "hermspec/text.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>

namespace fs = std::filesystem;
using namespace hermspec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Run {
public:
    explicit Run(const Config& config) : dir_(config.get_string("output_dir", "out")) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) const {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    }

    /// Records one asserted check in the manifest.
    void check(const std::string& id, bool pass, double value, double tolerance, const std::string& ledger = {}) {
        manifest_ += fmt::format("{} {} {} {}\n", id, pass ? "pass" : "fail", format_double(value), format_double(tolerance));
        if (!pass && failure_.empty()) failure_ = fmt::format("{} failed: value {} tolerance {}{}", id, format_double(value),
                                                              format_double(tolerance), ledger.empty() ? "" : "\n" + ledger);
    }
    void raw_manifest(const std::string& line, bool pass, const std::string& ledger) {
        manifest_ += line + "\n";
        if (!pass && failure_.empty()) failure_ = ledger;
    }

    int finish() const {
        write("manifest.txt", manifest_);
        if (!failure_.empty()) {
            std::cerr << failure_ << '\n';
            return 1;
        }
        return 0;
    }

private:
    fs::path dir_;
    std::string manifest_;
    std::string failure_;
};

int dimension(const Config& c) {
    const auto d = c.get_int("dimension", 1);
    if (d < 1 || d > 8) {
        const auto [line, column] = c.location("dimension");
        throw ConfigError("dimension must lie in 1..8", line, column);
    }
    return static_cast<int>(d);
}

int degree(const Config& c, std::string_view key = "degree_max") {
    const auto N = c.get_int(key, -1);
    if (N < 0 || N > 200) {
        const auto [line, column] = c.location(key);
        throw ConfigError(std::string(key) + " must lie in 0..200", line, column);
    }
    return static_cast<int>(N);
}

int positive_int(const Config& c, std::string_view key, long long fallback) {
    const auto v = c.get_int(key, fallback);
    if (v < 1) {
        const auto [line, column] = c.location(key);
        throw ConfigError(std::string(key) + " must be positive", line, column);
    }
    return static_cast<int>(v);
}

SplitMix64 rng_from(const Config& c) { return SplitMix64(static_cast<std::uint64_t>(c.get_int("seed", 20240601))); }

BallDensitySpec ball_spec(const Config& c) {
    BallDensitySpec spec;
    spec.gamma = c.get_double("gamma", 0.5);
    spec.alpha = c.get_double("alpha", 0.0);
    spec.eps = c.get_double("eps", 0.5);
    spec.R = c.get_double("R", 1.0);
    const std::string profile = c.get_string("profile", "power_law");
    if (profile == "power_law") spec.profile = RadiusProfile::power_law;
    else if (profile == "constant") spec.profile = RadiusProfile::constant;
    else {
        const auto [line, column] = c.location("profile");
        throw ConfigError("profile must be power_law or constant", line, column);
    }
    spec.constant_radius = c.get_double("radius", spec.R);
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------

int cmd_basis_check(const Config& c) {
    c.require({"degree_max"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const double W = c.get_double("window", 40.0);
    std::vector<double> lo(static_cast<std::size_t>(d), -W), hi(static_cast<std::size_t>(d), W);
    const BasisIndexSet basis(d, N);
    const GramMatrix g = gram_over_set(basis, SensorSet(d, {Region::box_from_bounds(lo, hi)}), build_quadrature_rule(c));
    const auto n = g.entries.rows();
    const double dev = (g.entries - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    const double dev_w = (gram_fullspace_weighted(basis, 0.0).entries - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    run.write("basis-check.csv", fmt::format("dimension,degree,basis_size,window,max_deviation_quadrature,max_deviation_hermite\n{},{},{},{},{},{}\n",
                                             d, N, n, format_double(W), format_double(dev), format_double(dev_w)));
    run.check("basis.orthonormality", dev <= 1e-10, dev, 1e-10);
    run.check("basis.gauss_hermite_identity", dev_w <= 1e-10, dev_w, 1e-10);
    return run.finish();
}

int cmd_decay(const Config& c) {
    c.require({"degree_max"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const int samples = positive_int(c, "samples", 100);
    SplitMix64 rng = rng_from(c);
    const BasisIndexSet basis(d, N);
    const GramMatrix w = gram_fullspace_weighted(basis, 1.0 / (64.0 * d));
    const double bound = std::ldexp(1.0, 2 * (d + 1) + N);
    std::string csv = "sample,degree,ratio,bound\n";
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const HermiteVector f = random_unit_vector(basis, rng);
        const double ratio = w.quadratic_form(f.coeffs()) / f.norm_squared();
        worst = std::max(worst, ratio / bound);
        csv += fmt::format("{},{},{},{}\n", i, N, format_double(ratio), format_double(bound));
    }
    const double phi0 = w.entries(0, 0);
    const double phi0_exact = std::pow(32.0 * d / (32.0 * d - 1.0), d / 2.0);
    csv += fmt::format("phi0,0,{},{}\n", format_double(phi0), format_double(bound));
    run.write("decay.csv", csv);
    run.check("decay.ratio_bound", worst <= 1.0 - 1e-6, worst, 1.0 - 1e-6);
    run.check("decay.phi0", std::abs(phi0 - phi0_exact) <= 1e-9, std::abs(phi0 - phi0_exact), 1e-9);
    return run.finish();
}

int cmd_bernstein(const Config& c) {
    c.require({"degree_max"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const int samples = positive_int(c, "samples", 100);
    const int m_max = positive_int(c, "m_max", 5);
    const double delta = c.get_double("delta", delta_choice(d * c.get_double("rho", 1.0), std::max(1, N), 1.0));
    SplitMix64 rng = rng_from(c);
    const BasisIndexSet basis(d, N);
    std::string csv = "sample,m,lhs,log_rhs,pass\n";
    double worst = -kInf;
    bool all = true;
    for (int i = 0; i < samples; ++i) {
        const HermiteVector f = random_unit_vector(basis, rng);
        for (const BernsteinRow& row : bernstein_check(f, m_max, delta)) {
            csv += fmt::format("{},{},{},{},{}\n", i, row.m, format_double(row.lhs), format_double(row.log_rhs), row.pass ? 1 : 0);
            if (row.lhs > 0.0) worst = std::max(worst, std::log(row.lhs) - row.log_rhs);
            all = all && row.pass;
        }
    }
    run.write("bernstein.csv", csv);
    run.check("bernstein.inequality", all, worst, 0.0);
    return run.finish();
}

int cmd_gram(const Config& c) {
    c.require({"degree_max", "set"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const GramMatrix g = gram_over_set(BasisIndexSet(d, N), build_sensor_set(c, d, N), build_quadrature_rule(c));
    run.write("gram.csv", to_csv(g));
    const double asym = (g.entries - g.entries.transpose()).cwiseAbs().maxCoeff();
    const double lmin = jacobi_eigen(g.entries).values[0];
    const double emax = g.entries.cwiseAbs().maxCoeff();
    run.check("gram.symmetry", asym <= 1e-14, asym, 1e-14);
    run.check("gram.psd", lmin >= -1e-10, lmin, -1e-10);
    run.check("gram.entry_bound", emax <= 1.0 + 1e-10, emax, 1.0 + 1e-10);
    return run.finish();
}

int cmd_spectral(const Config& c) {
    c.require({"degree_max", "set"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const SensorSet set = build_sensor_set(c, d, N);
    std::optional<BoundValue> bound;
    if (c.get_string("set", "") == "example" && N >= 1) {
        // The generated set meets the cube condition with γ/2^d in place of γ.
        const double gamma = c.get_double("gamma", 0.5) / std::pow(2.0, d);
        bound = cubes_bound(CubesBoundParams{d, N, gamma, c.get_double("beta", 0.5), 1.0, c.get_double("K", 16.0)}).via_general;
    }
    const SpectralReport r = spectral_report(set, N, bound, build_quadrature_rule(c));
    run.write("spectral.csv", fmt::format("N,d,set_hash,lambda_min,residual,log_bound,log_margin\n{},{},{:016x},{},{},{},{}\n", r.N, r.d,
                                          r.set_hash, format_double(r.constant.lambda_min), format_double(r.constant.residual),
                                          r.bound ? format_double(r.bound->log_value) : "",
                                          r.log_margin ? format_double(*r.log_margin) : ""));
    const double lam = r.constant.lambda_min;
    run.check("spectral.range", lam >= -1e-10 && lam <= 1.0 + 1e-10, lam, 1e-10);
    run.check("spectral.residual", r.constant.residual <= 1e-10, r.constant.residual, 1e-10);
    if (r.log_margin) run.check("spectral.bound_direction", *r.log_margin >= 0.0, *r.log_margin, 0.0);
    return run.finish();
}

CoveringFamily covering_from(const Config& c, int d, int N) {
    const std::string kind = c.get_string("covering", "lattice");
    if (kind == "lattice") return lattice_covering(c.get_double("rho", 1.0), d, N);
    if (kind == "besicovitch") return besicovitch_covering(ball_spec(c), d, N, c.get_double("K", 16.0)).covering;
    const auto [line, column] = c.location("covering");
    throw ConfigError("covering must be lattice or besicovitch", line, column);
}

int cmd_classify(const Config& c) {
    c.require({"degree_max"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const int samples = positive_int(c, "samples", 100);
    const int m_max = positive_int(c, "m_max", 6);
    const std::optional<double> delta = c.get_optional_double("delta");
    const int density = positive_int(c, "density", 21);
    const int phases = positive_int(c, "phases", 33);
    SplitMix64 rng = rng_from(c);
    const CoveringFamily cov = covering_from(c, d, N);
    const QuadratureRule rule = build_quadrature_rule(c);
    const BasisIndexSet basis(d, N);

    std::string csv = "sample,bad_mass,far_mass,intersection_ratio,central_good_cells,largest_flip_m,mk_cell,mk_estimate,log_mk_bound\n";
    double worst_bad = 0.0, worst_far = 0.0, worst_ratio = kInf, worst_mk_low = kInf, worst_mk_gap = -kInf;
    double worst_cover = 0.0;
    std::string ledger;
    for (int i = 0; i < samples; ++i) {
        const HermiteVector f = random_unit_vector(basis, rng);
        const CellClassification cl = classify_cells(f, cov, m_max, delta, rule);
        worst_bad = std::max(worst_bad, cl.bad_mass_fraction);
        worst_far = std::max(worst_far, cl.far_mass_fraction);
        worst_cover = std::max(worst_cover, cl.covered_norm2 / cl.total_norm2 - cov.kappa);
        MassIntersection mi;
        try {
            mi = mass_intersection_check(f, cl);
        } catch (const VerificationFailure& e) {
            if (ledger.empty()) ledger = e.what();
            mi.ratio = 0.0;
        }
        worst_ratio = std::min(worst_ratio, mi.ratio);

        // M_k on the heaviest central good box cell; the series bound applies to good cells.
        std::size_t best = cl.cells.size();
        for (std::size_t k = 0; k < cl.cells.size(); ++k) {
            const CellRecord& rec = cl.cells[k];
            const CoveringElement& el = cov.elements[rec.element];
            if (!rec.central || !rec.good || el.remainder) continue;
            if (best == cl.cells.size() || rec.local_norm2 > cl.cells[best].local_norm2) best = k;
        }
        std::string mk_cols = ",,";
        if (best < cl.cells.size()) {
            const CoveringElement& el = cov.elements[cl.cells[best].element];
            const MkEstimate mk = estimate_Mk(f, el.region, el.side_lengths, density, phases, rule);
            double l1 = 0.0;
            for (double l : el.side_lengths) l1 += l;
            const double log_bound = log_mk_series_bound(cov.kappa, std::max(1, N), d, cl.delta, l1);
            worst_mk_low = std::min(worst_mk_low, mk.value);
            worst_mk_gap = std::max(worst_mk_gap, std::log(mk.value) - log_bound);
            mk_cols = fmt::format("{},{},{}", cl.cells[best].element, format_double(mk.value), format_double(log_bound));
        }
        csv += fmt::format("{},{},{},{},{},{},{}\n", i, format_double(cl.bad_mass_fraction), format_double(cl.far_mass_fraction),
                           format_double(mi.ratio), mi.count, cl.largest_flip_m, mk_cols);
    }
    run.write("classify.csv", csv);
    run.check("classify.bad_mass", worst_bad <= 0.5 + 1e-8, worst_bad, 0.5 + 1e-8);
    run.check("classify.far_mass", worst_far <= 0.25 + 1e-8, worst_far, 0.25 + 1e-8);
    run.check("classify.intersection", worst_ratio >= 0.25 - 1e-8, worst_ratio, 0.25 - 1e-8, ledger);
    run.check("classify.overlap_sum", worst_cover <= 1e-9, worst_cover, 1e-9);
    if (std::isfinite(worst_mk_low)) {
        run.check("classify.mk_at_least_one", worst_mk_low >= 1.0, worst_mk_low, 1.0);
        run.check("classify.mk_series_bound", worst_mk_gap <= 0.0, worst_mk_gap, 0.0);
    }
    return run.finish();
}

int cmd_besicovitch(const Config& c) {
    c.require({"degree_max"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    if (N < 1) throw ConfigError("besicovitch needs degree_max ≥ 1", c.location("degree_max").first, c.location("degree_max").second);
    const BallDensitySpec spec = ball_spec(c);
    const double K = c.get_double("K", 16.0);
    const BesicovitchResult b = besicovitch_covering(spec, d, N, K);
    double max_radius = 0.0;
    for (const CoveringElement& e : b.covering.elements)
        if (!e.remainder) max_radius = std::max(max_radius, e.region.radius());
    const double kappa = std::pow(K, d);
    const double C = concentration_radius(d, kappa);
    const double cap = 2.0 * spec.R * C * std::pow(N, (1.0 - spec.eps) / 2.0);
    run.write("besicovitch.csv",
              fmt::format("d,N,balls,grid_spacing,grid_points,uncovered,overlap,saturated,max_radius,radius_cap,C,eta,D,kappa\n"
                          "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                          d, N, b.covering.elements.size() - 1, format_double(b.grid_spacing), b.grid_points, b.uncovered_points,
                          b.measured_overlap, b.overlap_saturated ? 1 : 0, format_double(max_radius), format_double(cap),
                          format_double(C), format_double(b.covering.params.eta), format_double(b.covering.params.D),
                          format_double(kappa)));
    run.write("besicovitch_covering.txt", serialize(b.covering));
    run.check("besicovitch.coverage", b.uncovered_points == 0, static_cast<double>(b.uncovered_points), 0.0);
    run.check("besicovitch.overlap", !b.overlap_saturated && b.measured_overlap <= kappa, b.measured_overlap, kappa);
    run.check("besicovitch.radius_cap", max_radius <= cap, max_radius, cap);
    return run.finish();
}

int cmd_bounds(const Config& c) {
    c.require({"degree_max"});
    Run run(c);
    const int d = dimension(c), N = std::max(1, degree(c));
    const double gamma = c.get_double("gamma", 0.5);
    const double K = c.get_double("K", 16.0);
    std::string csv = "theorem,d,N,gamma,beta_or_alpha,rho_or_R,eps,kappa,eta,D,log_bound,n_exponent,efficient\n";
    auto row = [&](const BoundValue& v, double a, double rR, double eps, double kappa, double eta, double D) {
        csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", v.theorem, d, N, format_double(gamma), format_double(a),
                           format_double(rR), format_double(eps), format_double(kappa), format_double(eta), format_double(D),
                           format_double(v.log_value), format_double(v.n_exponent), v.efficient ? 1 : 0);
        run.check("bounds." + v.theorem + ".finite", std::isfinite(v.log_value), v.log_value, 0.0);
    };
    const double beta = c.get_double("beta", 0.5), rho = c.get_double("rho", 1.0);
    const DerivedBound cubes = cubes_bound(CubesBoundParams{d, N, gamma, beta, rho, K});
    row(cubes.stated, beta, rho, 1.0, 1.0, 0.0, 0.0);
    row(cubes.via_general, beta, rho, 1.0, cubes.general.kappa, cubes.general.eta, cubes.general.D);
    const double alpha = c.get_double("alpha", 0.0), eps = c.get_double("eps", 0.5), R = c.get_double("R", 1.0);
    const DerivedBound balls = balls_bound(BallsBoundParams{d, N, gamma, alpha, eps, R, K});
    row(balls.stated, alpha, R, eps, std::pow(K, d), 0.0, 0.0);
    row(balls.via_general, alpha, R, eps, balls.general.kappa, balls.general.eta, balls.general.D);
    const double log_cobs = log_cobs_squared(ObservabilityParams{c.get_double("d0", 1.0), c.get_double("d1", 1.0),
                                                                 c.get_double("zeta", 0.5), c.get_double("T", 1.0),
                                                                 c.get_double("C1", 1.0), c.get_double("C2", 1.0),
                                                                 c.get_double("C3", 1.0)});
    csv += fmt::format("cobs_squared,{},{},,,,,,,,{},,\n", d, N, format_double(log_cobs));
    run.write("bounds.csv", csv);
    return run.finish();
}

int cmd_counterexample(const Config& c) {
    Run run(c);
    const double M = c.get_double("M", 2.0);
    const int lo = static_cast<int>(c.get_int("degree_min", 10));
    const int hi = static_cast<int>(c.get_int("degree_max", 40));
    if (lo < 1 || hi < lo) throw ConfigError("need 1 ≤ degree_min ≤ degree_max", c.location("degree_min").first, c.location("degree_min").second);
    std::vector<int> degrees;
    for (int N = lo; N <= hi; ++N) degrees.push_back(N);
    const GrowthTable t = counterexample_growth(M, degrees);
    std::string csv = "N,log_norm_full,log_norm_window,log_ratio,log_window_bound,band_residual,fitted_residual\n";
    double worst_band = kInf, worst_fit = kInf;
    bool monotone = true, bounded = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const GrowthRow& r = t.rows[i];
        const double fitted = r.log_ratio - r.N * std::log(static_cast<double>(r.N)) + t.fitted_c * r.N;
        csv += fmt::format("{},{},{},{},{},{},{}\n", r.N, format_double(r.log_norm_full), format_double(r.log_norm_window),
                           format_double(r.log_ratio), format_double(r.log_window_bound), format_double(r.band_residual),
                           format_double(fitted));
        worst_band = std::min(worst_band, r.band_residual + std::log(static_cast<double>(r.N)));
        worst_fit = std::min(worst_fit, fitted);
        bounded = bounded && r.log_norm_window <= r.log_window_bound;
        if (i > 0) monotone = monotone && r.log_ratio > t.rows[i - 1].log_ratio;
    }
    run.write("counterexample.csv", csv);
    run.check("counterexample.window_bound", bounded, bounded ? 0.0 : 1.0, 0.0);
    run.check("counterexample.monotone", monotone, monotone ? 0.0 : 1.0, 0.0);
    run.check("counterexample.band", worst_band >= 0.0, worst_band, 0.0);
    run.check("counterexample.fitted_c", worst_fit >= -1e-9, t.fitted_c, 2.0 + 2.0 * std::log(M));
    return run.finish();
}

int cmd_control(const Config& c) {
    c.require({"degree_max", "set"});
    Run run(c);
    const int d = dimension(c), N = degree(c);
    const double T = c.get_double("T", 1.0);
    const int samples = positive_int(c, "samples", 50);
    const int steps = positive_int(c, "steps", 256);
    SplitMix64 rng = rng_from(c);
    const BasisIndexSet basis(d, N);
    const GramMatrix g = gram_over_set(basis, build_sensor_set(c, d, N), build_quadrature_rule(c));
    const double gram_dev = (observability_gramian(g, T) - observability_gramian_quadrature(g, T, 100)).cwiseAbs().maxCoeff();
    run.check("control.gramian_quadrature", gram_dev <= 1e-8, gram_dev, 1e-8);

    ObservabilityConstant oc;
    try {
        oc = observability_constant_num(g, T);
    } catch (const NotObservable& e) {
        run.write("control.csv", "sample,norm,cost,cobs_times_norm,terminal_residual,simulated_residual\n");
        run.check("control.observable", false, e.lambda_min(), 1e-14, e.what());
        return run.finish();
    }
    std::string csv = "sample,norm,cost,cobs_times_norm,terminal_residual,simulated_residual\n";
    double worst_res = 0.0, worst_ratio = 0.0;
    for (int i = 0; i < samples; ++i) {
        const HermiteVector p = random_unit_vector(basis, rng);
        const double norm = std::sqrt(p.norm_squared());
        const ControlResult r = hum_control(g, T, p, steps);
        if (i == 0) run.write("control_trajectory.csv", trajectory_csv(r));
        worst_res = std::max(worst_res, r.terminal_residual / norm);
        worst_ratio = std::max(worst_ratio, r.cost / (oc.c_obs * norm));
        csv += fmt::format("{},{},{},{},{},{}\n", i, format_double(norm), format_double(r.cost), format_double(oc.c_obs * norm),
                           format_double(r.terminal_residual), format_double(r.simulated_residual));
    }
    const ControlResult worst = hum_control(g, T, HermiteVector(basis, oc.worst_state), steps);
    const double duality = std::abs(worst.cost - oc.c_obs) / oc.c_obs;
    csv += fmt::format("worst,1,{},{},{},{}\n", format_double(worst.cost), format_double(oc.c_obs),
                       format_double(worst.terminal_residual), format_double(worst.simulated_residual));
    run.write("control.csv", csv);

    // The theoretical constant depends on C1..C3, which are unverified: reported only.
    const double log_cobs = log_cobs_squared(ObservabilityParams{c.get_double("d0", 1.0), c.get_double("d1", 1.0),
                                                                 c.get_double("zeta", 0.5), T, c.get_double("C1", 1.0),
                                                                 c.get_double("C2", 1.0), c.get_double("C3", 1.0)});
    run.write("control_summary.csv", fmt::format("c_obs_num,lambda_min_B,log_cobs_squared_theory\n{},{},{}\n", format_double(oc.c_obs),
                                                 format_double(oc.lambda_min_B), format_double(log_cobs)));
    run.check("control.terminal_residual", worst_res <= 1e-8, worst_res, 1e-8);
    run.check("control.cost_vs_cobs", worst_ratio <= 1.0 + 1e-8, worst_ratio, 1.0 + 1e-8);
    run.check("control.duality", duality <= 1e-6, duality, 1e-6);
    return run.finish();
}

int cmd_report(const Config& c) {
    Run run(c);
    SuiteOptions options;
    options.seed = static_cast<std::uint64_t>(c.get_int("seed", static_cast<long long>(options.seed)));
    options.besicovitch_d2_degrees = c.get_int_list("besicovitch_d2_degrees", options.besicovitch_d2_degrees);
    const auto first = run_acceptance_suite(options);
    for (const CriterionResult& r : first) {
        std::cout << fmt::format("{} {:<22} {}  ({:.1f} s){}\n", criterion_label(r.id), r.name, r.pass ? "PASS" : "FAIL", r.seconds,
                                 r.failure.empty() ? "" : "  " + r.failure);
        run.raw_manifest(manifest_line(r), r.pass, criterion_label(r.id) + " " + r.name + ": " + r.failure);
    }
    const std::string summary = summary_csv(first);
    const std::string details = details_csv(first);
    run.write("report.csv", summary);
    run.write("report_details.csv", details);

    // Determinism within the process: a second run must reproduce every byte.
    const auto second = run_acceptance_suite(options);
    const bool same = summary_csv(second) == summary && details_csv(second) == details;
    CriterionResult det;
    det.id = 13;
    det.name = "determinism";
    det.pass = same;
    det.value = same ? 0.0 : 1.0;
    det.tolerance = 0.0;
    std::cout << fmt::format("{} {:<22} {}\n", criterion_label(13), det.name, same ? "PASS" : "FAIL");
    run.raw_manifest(manifest_line(det), same, "AC13 determinism: second run produced different CSV bytes");
    return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral inequalities for Hermite expansions on sensor sets: verification suites"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> overrides;

    const std::map<std::string, std::function<int(const Config&)>> commands = {
        {"basis-check", cmd_basis_check}, {"decay", cmd_decay},       {"bernstein", cmd_bernstein},
        {"gram", cmd_gram},               {"spectral", cmd_spectral}, {"classify", cmd_classify},
        {"besicovitch", cmd_besicovitch}, {"bounds", cmd_bounds},     {"counterexample", cmd_counterexample},
        {"control", cmd_control},         {"report", cmd_report},
    };
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Configuration file")->required();
        sub->add_option("--set", overrides, "Override a configuration key (key=value)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Config config;
    try {
        config = Config::load(config_path);
        for (const std::string& o : overrides) config.apply_override(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
        return 2;
    }

    try {
        return commands.at(name)(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
}
