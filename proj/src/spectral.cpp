#include "hermspec/spectral.hpp"

#include "hermspec/errors.hpp"
#include "hermspec/jacobi.hpp"
#include "hermspec/quadrature.hpp"
#include "hermspec/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace hermspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<MultiIndex> indices_of_degree(int dim, int m) {
    std::vector<MultiIndex> out;
    for (const MultiIndex& a : BasisIndexSet(dim, m))
        if (a.degree() == m) out.push_back(a);
    return out;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// lhs ≤ exp(log_rhs) without forming exp(log_rhs).
bool log_leq(double lhs, double log_rhs) {
    if (lhs <= 0.0) return true;
    return std::log(lhs) <= log_rhs;
}

struct WeightedDerivative {
    int m;
    double weight;  // 1/α!
    Eigen::VectorXd coeffs;
};

}  // namespace

SpectralConstant spectral_constant(const GramMatrix& gram) {
    const auto n = gram.entries.rows();
    if (n == 0) throw InputError("spectral_constant: empty matrix");
    const SymmetricEigen eig = jacobi_eigen(gram.entries);
    SpectralConstant out;
    out.lambda_min = eig.values[0];
    out.vector = eig.vectors.col(0);
    out.residual = (gram.entries * out.vector - out.lambda_min * out.vector).norm();
    if (!(out.residual <= 1e-10))
        throw NumericalError("spectral_constant: eigen-residual " + format_double(out.residual) + " exceeds 1e-10");
    return out;
}

std::vector<double> derivative_energies(const HermiteVector& f, int m_max) {
    if (m_max < 0) throw InputError("derivative_energies: m_max must be non-negative");
    std::vector<double> out(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (int m = 0; m <= m_max; ++m)
        for (const MultiIndex& a : indices_of_degree(f.dim(), m))
            out[static_cast<std::size_t>(m)] += partial_derivative(f, a).norm_squared() / a.factorial();
    return out;
}

std::vector<BernsteinRow> bernstein_check(const HermiteVector& f, int m_max, double delta) {
    const int N = f.basis().max_degree();
    const double norm2 = f.norm_squared();
    const std::vector<double> energies = derivative_energies(f, m_max);
    std::vector<BernsteinRow> rows;
    for (int m = 0; m <= m_max; ++m) {
        BernsteinRow row;
        row.m = m;
        row.lhs = energies[static_cast<std::size_t>(m)];
        row.log_rhs = bernstein_log_cb(m, N, f.dim(), delta) - std::lgamma(m + 1.0) + safe_log(norm2);
        row.pass = log_leq(row.lhs, row.log_rhs);
        rows.push_back(row);
    }
    return rows;
}

CellClassification classify_cells(const HermiteVector& f, const CoveringFamily& covering, int m_max,
                                  std::optional<double> delta, const QuadratureRule& rule) {
    if (m_max < 1) throw InputError("classify_cells: m_max must be at least 1");
    if (covering.dim != f.dim()) throw InputError("classify_cells: dimension mismatch");
    const int N = f.basis().max_degree();
    const int d = f.dim();

    CellClassification out;
    out.m_max = m_max;
    out.kappa = covering.kappa;
    out.delta = delta ? *delta : delta_choice(covering.params.D, std::max(1, N), covering.params.eps);
    if (!(out.delta > 0.0)) throw InputError("classify_cells: delta must be positive");
    out.total_norm2 = f.norm_squared();

    const BasisIndexSet big(d, N + m_max);
    const Eigen::VectorXd f_big = f.embedded(big).coeffs();
    std::vector<WeightedDerivative> derivs;
    for (int m = 1; m <= m_max; ++m)
        for (const MultiIndex& a : indices_of_degree(d, m))
            derivs.push_back({m, 1.0 / a.factorial(), partial_derivative(f, a).embedded(big).coeffs()});

    std::vector<double> log_threshold(static_cast<std::size_t>(m_max) + 1);
    for (int m = 1; m <= m_max; ++m)
        log_threshold[static_cast<std::size_t>(m)] = (m + 1) * std::log(2.0) + std::log(covering.kappa) +
                                                     bernstein_log_cb(m, std::max(1, N), d, out.delta) -
                                                     std::lgamma(m + 1.0);

    double bad = 0.0, far = 0.0;
    for (std::size_t k = 0; k < covering.elements.size(); ++k) {
        const CoveringElement& el = covering.elements[k];
        Eigen::MatrixXd g = gram_over_region(big, el.region, rule).entries;
        if (el.remainder) g = Eigen::MatrixXd::Identity(g.rows(), g.cols()) - g;

        CellRecord rec;
        rec.element = k;
        rec.central = k < covering.is_central.size() && covering.is_central[k];
        rec.local_norm2 = std::max(0.0, f_big.dot(g * f_big));
        rec.energies.assign(static_cast<std::size_t>(m_max), 0.0);
        for (const WeightedDerivative& wd : derivs)
            rec.energies[static_cast<std::size_t>(wd.m - 1)] += wd.weight * wd.coeffs.dot(g * wd.coeffs);
        for (double& e : rec.energies) e = std::max(0.0, e);

        const double log_local = safe_log(rec.local_norm2);
        for (int m = 1; m <= m_max; ++m) {
            if (!log_leq(rec.energies[static_cast<std::size_t>(m - 1)], log_threshold[static_cast<std::size_t>(m)] + log_local)) {
                rec.good = false;
                rec.first_bad_m = m;
                out.largest_flip_m = std::max(out.largest_flip_m, m);
                break;
            }
        }
        out.covered_norm2 += rec.local_norm2;
        if (!rec.good) bad += rec.local_norm2;
        if (!rec.central) far += rec.local_norm2;
        out.cells.push_back(std::move(rec));
    }
    out.tail_norm2 = std::max(0.0, out.total_norm2 - out.covered_norm2);
    if (out.total_norm2 > 0.0) {
        out.bad_mass_fraction = (bad + out.tail_norm2) / out.total_norm2;
        out.far_mass_fraction = (far + out.tail_norm2) / out.total_norm2;
    }
    return out;
}

std::string cell_ledger(const CellClassification& c) {
    std::string out = "element central good first_bad_m local_norm2\n";
    for (const CellRecord& r : c.cells)
        out += fmt::format("{} {} {} {} {}\n", r.element, r.central ? 1 : 0, r.good ? 1 : 0, r.first_bad_m,
                           format_double(r.local_norm2));
    return out;
}

MassIntersection mass_intersection_check(const HermiteVector& f, const CellClassification& c) {
    MassIntersection out;
    if (f.norm_squared() == 0.0) {
        out.degenerate = true;
        return out;
    }
    for (const CellRecord& r : c.cells) {
        if (r.central && r.good) {
            out.sum += r.local_norm2;
            ++out.count;
        }
    }
    out.ratio = out.sum / f.norm_squared();
    if (out.count == 0 || out.ratio < 0.25 - 1e-8) {
        std::string msg = fmt::format("mass intersection check failed: ratio {} over {} central good cells\ncoefficients",
                                      format_double(out.ratio), out.count);
        for (Eigen::Index i = 0; i < f.coeffs().size(); ++i) msg += ' ' + format_double(f.coeffs()[i]);
        msg += '\n' + cell_ledger(c);
        throw VerificationFailure(msg);
    }
    return out;
}

MkEstimate estimate_Mk(const HermiteVector& f, const Region& cell, const std::vector<double>& l, int density,
                       int phases, const QuadratureRule& rule) {
    const auto d = static_cast<std::size_t>(f.dim());
    if (cell.dim() != f.dim() || l.size() != d) throw InputError("estimate_Mk: dimension mismatch");
    if (density < 1 || phases < 1) throw InputError("estimate_Mk: density and phases must be positive");

    MkEstimate out;
    const double local2 = gram_over_region(f.basis(), cell, rule).quadratic_form(f.coeffs());
    if (!(local2 > 0.0)) throw InputError("estimate_Mk: degenerate cell (zero local norm)");
    out.local_norm = std::sqrt(local2);

    const std::vector<double> lo = cell.lower();
    const std::vector<double> hi = cell.upper();
    std::vector<std::vector<std::complex<double>>> offsets(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (double r : {1.0, 0.5})
            for (int k = 0; k < phases; ++k)
                offsets[j].push_back(std::polar(r * 4.0 * l[j], 2.0 * std::numbers::pi * k / phases));
    }

    std::vector<int> xi(d, 0);
    std::vector<double> x(d);
    std::vector<std::complex<double>> z(d);
    while (true) {
        for (std::size_t j = 0; j < d; ++j)
            x[j] = density == 1 ? 0.5 * (lo[j] + hi[j]) : lo[j] + (hi[j] - lo[j]) * xi[j] / (density - 1.0);
        bool inside = true;
        if (cell.kind() == Region::Kind::ball) {
            double r2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) r2 += (x[j] - cell.center()[j]) * (x[j] - cell.center()[j]);
            inside = r2 <= cell.radius() * cell.radius();
        }
        if (inside) {
            std::vector<std::size_t> wi(d, 0);
            while (true) {
                for (std::size_t j = 0; j < d; ++j) z[j] = x[j] + offsets[j][wi[j]];
                out.sup_abs = std::max(out.sup_abs, std::abs(f(std::span<const std::complex<double>>(z))));
                ++out.samples;
                std::size_t j = 0;
                while (j < d && ++wi[j] == offsets[j].size()) wi[j++] = 0;
                if (j == d) break;
            }
        }
        std::size_t j = 0;
        while (j < d && ++xi[j] == density) xi[j++] = 0;
        if (j == d) break;
    }
    out.value = std::sqrt(cell.measure()) * out.sup_abs / out.local_norm;
    return out;
}

double log_window_moment(int N, double M) {
    if (N < 0) throw InputError("log_window_moment: N must be non-negative");
    if (!(M > 0.0) || !std::isfinite(M)) throw InputError("log_window_moment: M must be positive and finite");
    const double xs = std::min(std::sqrt(static_cast<double>(N)), M);
    const double peak = N == 0 ? 0.0 : 2.0 * N * std::log(xs) - xs * xs;
    auto integrand = [&](double x) { return std::exp(2.0 * N * std::log(x) - x * x - peak); };

    const int panels = std::max(1, static_cast<int>(std::ceil(M / 0.5)));
    const double pw = M / panels;
    auto at = [&](int n) {
        const GaussRule& gl = gauss_legendre(n);
        double s = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * pw;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += 0.5 * pw * gl.weights[i] * integrand(mid + 0.5 * pw * gl.nodes[i]);
        }
        return s;
    };
    double prev = at(32);
    for (int n = 64; n <= 32 << 8; n *= 2) {
        const double cur = at(n);
        if (std::abs(cur - prev) <= 1e-14 * cur) return std::log(2.0) + peak + std::log(cur);
        prev = cur;
    }
    throw NumericalError("log_window_moment: quadrature did not converge");
}

GrowthTable counterexample_growth(double M, const std::vector<int>& degrees) {
    if (!(M > 0.0)) throw InputError("counterexample_growth: M must be positive");
    GrowthTable table;
    table.M = M;
    table.fitted_c = kNegInf;
    for (int N : degrees) {
        if (N < 1) throw InputError("counterexample_growth: degrees must be at least 1");
        GrowthRow row;
        row.N = N;
        row.log_norm_full = std::lgamma(N + 0.5);
        row.log_norm_window = log_window_moment(N, M);
        row.log_ratio = row.log_norm_full - row.log_norm_window;
        row.log_window_bound = 0.5 * std::log(std::numbers::pi) + 2.0 * N * std::log(M);
        const double nlogn = N * std::log(static_cast<double>(N));
        row.band_residual = row.log_ratio - (nlogn - (1.0 + 2.0 * std::log(M)) * N);
        table.fitted_c = std::max(table.fitted_c, (nlogn - row.log_ratio) / N);
        table.rows.push_back(row);
    }
    return table;
}

std::uint64_t set_hash(const SensorSet& set) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(set)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SpectralReport spectral_report(const SensorSet& set, int N, std::optional<BoundValue> bound, const QuadratureRule& rule) {
    SpectralReport r;
    r.N = N;
    r.d = set.dim();
    r.set_hash = set_hash(set);
    r.constant = spectral_constant(gram_over_set(BasisIndexSet(set.dim(), N), set, rule));
    r.bound = std::move(bound);
    if (r.bound) r.log_margin = safe_log(r.constant.lambda_min) - r.bound->log_value;
    return r;
}

}  // namespace hermspec
