#include "hermspec/gram.hpp"

#include "hermspec/quadrature.hpp"
#include "hermspec/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace hermspec {

namespace {

struct Nodes {
    std::vector<double> x;
    std::vector<double> w;
};

// Composite Gauss–Legendre on (a, b) at refinement level `level` (node count × 2^level).
Nodes panel_nodes(double a, double b, const QuadratureRule& rule, int level) {
    Nodes out;
    const double width = b - a;
    if (!(width > 0.0)) return out;
    const int panels = std::max(1, static_cast<int>(std::ceil(width / rule.panel_width - 1e-9)));
    const double pw = width / panels;
    int n = rule.nodes;
    if (pw < rule.panel_width) n = std::max(8, static_cast<int>(std::ceil(rule.nodes * pw / rule.panel_width)));
    n <<= level;
    const GaussRule& gl = gauss_legendre(n);
    out.x.reserve(static_cast<std::size_t>(panels * n));
    out.w.reserve(static_cast<std::size_t>(panels * n));
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * pw;
        const double mid = lo + 0.5 * pw;
        for (int i = 0; i < n; ++i) {
            out.x.push_back(mid + 0.5 * pw * gl.nodes[static_cast<std::size_t>(i)]);
            out.w.push_back(0.5 * pw * gl.weights[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

void validate_rule(const QuadratureRule& rule) {
    if (rule.nodes < 1) throw InputError("quadrature rule: nodes must be positive");
    if (!(rule.tolerance >= 0.0)) throw InputError("quadrature rule: tolerance must be non-negative");
    if (!(rule.panel_width > 0.0)) throw InputError("quadrature rule: panel width must be positive");
    if (rule.max_doublings < 1) throw InputError("quadrature rule: need at least one doubling");
    if (rule.ball_depth < 0) throw InputError("quadrature rule: ball depth must be non-negative");
}

Eigen::MatrixXd interval_gram_at(int max_degree, double a, double b, const QuadratureRule& rule, int level) {
    const Nodes nodes = panel_nodes(a, b, rule, level);
    const auto m = static_cast<Eigen::Index>(nodes.x.size());
    Eigen::MatrixXd v(m, max_degree + 1);
    std::vector<double> vals(static_cast<std::size_t>(max_degree) + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        hermite_functions(max_degree, nodes.x[static_cast<std::size_t>(i)], vals);
        const double sw = std::sqrt(nodes.w[static_cast<std::size_t>(i)]);
        for (int k = 0; k <= max_degree; ++k) v(i, k) = sw * vals[static_cast<std::size_t>(k)];
    }
    return v.transpose() * v;
}

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

// Intersection with [−clip, clip]ᵈ; nullopt if empty.
std::optional<Box> clipped(std::vector<double> lo, std::vector<double> hi, std::optional<double> clip) {
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (clip) {
            lo[j] = std::max(lo[j], -*clip);
            hi[j] = std::min(hi[j], *clip);
        }
        if (!(lo[j] < hi[j])) return std::nullopt;
    }
    return Box{std::move(lo), std::move(hi)};
}

void subdivide_ball(const Region& ball, Box cell, int depth, int max_depth, std::vector<Box>& out) {
    const auto& c = ball.center();
    const double r2 = ball.radius() * ball.radius();
    double near2 = 0.0, far2 = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double dl = cell.lo[j] - c[j];
        const double dh = cell.hi[j] - c[j];
        far2 += std::max(dl * dl, dh * dh);
        if (dl > 0.0) near2 += dl * dl;
        else if (dh < 0.0) near2 += dh * dh;
    }
    if (near2 >= r2) return;
    if (far2 <= r2) {
        out.push_back(std::move(cell));
        return;
    }
    if (depth >= max_depth) {
        double m2 = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double mid = 0.5 * (cell.lo[j] + cell.hi[j]) - c[j];
            m2 += mid * mid;
        }
        if (m2 < r2) out.push_back(std::move(cell));
        return;
    }
    const std::size_t d = c.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Box child = cell;
        for (std::size_t j = 0; j < d; ++j) {
            const double mid = 0.5 * (cell.lo[j] + cell.hi[j]);
            if (mask & (std::size_t{1} << j)) child.lo[j] = mid;
            else child.hi[j] = mid;
        }
        subdivide_ball(ball, std::move(child), depth + 1, max_depth, out);
    }
}

// Boxes whose union approximates region ∩ [−clip, clip]ᵈ. Balls in d ≥ 2 are
// subdivided dyadically; in d = 1 a ball is an interval.
std::vector<Box> region_cells(const Region& region, std::optional<double> clip, int max_depth) {
    std::vector<Box> cells;
    auto root = clipped(region.lower(), region.upper(), clip);
    if (!root) return cells;
    if (region.kind() == Region::Kind::box || region.dim() == 1) {
        cells.push_back(std::move(*root));
        return cells;
    }
    subdivide_ball(region, std::move(*root), 0, max_depth, cells);
    return cells;
}

// Σ_cells ⊗_j g(cell_j). Cells sharing their first d−1 intervals are merged first
// (their last-axis Grams summed), and 1D Grams are memoized per interval.
Eigen::MatrixXd assemble_cells(const BasisIndexSet& basis, const std::vector<Box>& cells, const QuadratureRule& rule) {
    const int n = basis.max_degree();
    const auto d = static_cast<std::size_t>(basis.dim());
    std::map<std::pair<double, double>, Eigen::MatrixXd> memo;
    auto gram1 = [&](double a, double b) -> const Eigen::MatrixXd& {
        auto key = std::make_pair(a, b);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, interval_gram(n, a, b, rule)).first;
        return it->second;
    };

    std::map<std::vector<double>, Eigen::MatrixXd> groups;
    for (const Box& cell : cells) {
        std::vector<double> key;
        key.reserve(2 * (d - 1));
        for (std::size_t j = 0; j + 1 < d; ++j) {
            key.push_back(cell.lo[j]);
            key.push_back(cell.hi[j]);
        }
        const Eigen::MatrixXd& last = gram1(cell.lo[d - 1], cell.hi[d - 1]);
        auto [it, inserted] = groups.try_emplace(std::move(key), last);
        if (!inserted) it->second += last;
    }

    const auto size = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(size, size);
    std::vector<const Eigen::MatrixXd*> factors(d);
    for (const auto& [key, last] : groups) {
        for (std::size_t j = 0; j + 1 < d; ++j) factors[j] = &gram1(key[2 * j], key[2 * j + 1]);
        factors[d - 1] = &last;
        for (Eigen::Index p = 0; p < size; ++p) {
            const MultiIndex& a = basis.index_of(static_cast<std::size_t>(p));
            for (Eigen::Index q = 0; q <= p; ++q) {
                const MultiIndex& b = basis.index_of(static_cast<std::size_t>(q));
                double v = 1.0;
                for (std::size_t j = 0; j < d && v != 0.0; ++j) v *= (*factors[j])(a[j], b[j]);
                total(p, q) += v;
            }
        }
    }
    for (Eigen::Index p = 0; p < size; ++p)
        for (Eigen::Index q = 0; q < p; ++q) total(q, p) = total(p, q);
    return total;
}

double box_integral(const Box& box, const Integrand& fn, const QuadratureRule& rule, int level, double& abs_sum) {
    const std::size_t d = box.lo.size();
    std::vector<Nodes> axes;
    axes.reserve(d);
    for (std::size_t j = 0; j < d; ++j) axes.push_back(panel_nodes(box.lo[j], box.hi[j], rule, level));
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = axes[j].x[idx[j]];
            w *= axes[j].w[idx[j]];
        }
        const double v = fn(x);
        sum += w * v;
        abs_sum += w * std::abs(v);
        std::size_t j = 0;
        while (j < d && ++idx[j] == axes[j].x.size()) idx[j++] = 0;
        if (j == d) break;
    }
    return sum;
}

}  // namespace

GramMatrix GramMatrix::restricted(int max_degree) const {
    if (max_degree > basis.max_degree()) throw InputError("GramMatrix::restricted: degree exceeds basis degree");
    BasisIndexSet smaller(basis.dim(), max_degree);
    const auto m = static_cast<Eigen::Index>(smaller.size());
    return GramMatrix{smaller, entries.topLeftCorner(m, m)};
}

double effective_support_radius(int max_degree) { return std::sqrt(2.0 * max_degree + 1.0) + 10.0; }

Eigen::MatrixXd interval_gram(int max_degree, double a, double b, const QuadratureRule& rule) {
    validate_rule(rule);
    if (max_degree < 0) throw InputError("interval_gram: negative degree");
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) throw InputError("interval_gram: need finite a ≤ b");
    const double L = effective_support_radius(max_degree);
    a = std::max(a, -L);
    b = std::min(b, L);
    if (!(a < b)) return Eigen::MatrixXd::Zero(max_degree + 1, max_degree + 1);

    Eigen::MatrixXd prev = interval_gram_at(max_degree, a, b, rule, 0);
    Eigen::MatrixXd cur;
    for (int level = 1; level <= rule.max_doublings; ++level) {
        cur = interval_gram_at(max_degree, a, b, rule, level);
        const double scale = std::max(cur.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        if ((cur - prev).cwiseAbs().maxCoeff() <= rule.tolerance * scale) return cur;
        if (level < rule.max_doublings) prev = cur;
    }
    throw QuadratureFailure("interval Gram on (" + format_double(a) + ", " + format_double(b) +
                                ") did not converge after " + std::to_string(rule.max_doublings) + " doublings",
                            std::move(prev), std::move(cur));
}

GramMatrix gram_over_region(const BasisIndexSet& basis, const Region& region, const QuadratureRule& rule) {
    validate_rule(rule);
    if (region.dim() != basis.dim()) throw InputError("gram_over_region: dimension mismatch");
    const double L = effective_support_radius(basis.max_degree());
    return GramMatrix{basis, assemble_cells(basis, region_cells(region, L, rule.ball_depth), rule)};
}

GramMatrix gram_over_set(const BasisIndexSet& basis, const SensorSet& set, const QuadratureRule& rule) {
    validate_rule(rule);
    if (set.dim() != basis.dim()) throw InputError("gram_over_set: dimension mismatch");
    const auto size = static_cast<Eigen::Index>(basis.size());
    GramMatrix out{basis, Eigen::MatrixXd::Zero(size, size)};
    for (const Region& r : set.regions()) out.entries += gram_over_region(basis, r, rule).entries;
    return out;
}

GramMatrix gram_fullspace_weighted(const BasisIndexSet& basis, double w) {
    if (!std::isfinite(w)) throw InputError("gram_fullspace_weighted: weight exponent must be finite");
    if (2.0 * w >= 1.0) throw InputError("gram_fullspace_weighted: divergent weight (2w ≥ 1)");
    const int n = basis.max_degree();
    const double s = std::sqrt(1.0 - 2.0 * w);
    const GaussRule& gh = gauss_hermite(n + 3);

    // q_k = φ_k e^{x²/2}, so the integrand is e^{−(sx)²} q_k q_l; substitute y = sx.
    Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(n + 1, n + 1);
    std::vector<double> q(static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        const double x = gh.nodes[i] / s;
        q[0] = std::pow(std::numbers::pi, -0.25);
        if (n >= 1) q[1] = std::sqrt(2.0) * x * q[0];
        for (int k = 1; k < n; ++k)
            q[static_cast<std::size_t>(k) + 1] = std::sqrt(2.0 / (k + 1.0)) * x * q[static_cast<std::size_t>(k)] -
                                                  std::sqrt(static_cast<double>(k) / (k + 1.0)) * q[static_cast<std::size_t>(k) - 1];
        const double wt = gh.weights[i] / s;
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= k; ++l) w1(k, l) += wt * q[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(l)];
    }
    for (int k = 0; k <= n; ++k)
        for (int l = 0; l < k; ++l) w1(l, k) = w1(k, l);

    const auto size = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd g(size, size);
    for (Eigen::Index p = 0; p < size; ++p) {
        const MultiIndex& a = basis.index_of(static_cast<std::size_t>(p));
        for (Eigen::Index r = 0; r < size; ++r) {
            const MultiIndex& b = basis.index_of(static_cast<std::size_t>(r));
            double v = 1.0;
            for (std::size_t j = 0; j < a.dim(); ++j) v *= w1(a[j], b[j]);
            g(p, r) = v;
        }
    }
    return GramMatrix{basis, std::move(g)};
}

double integrate_over_set(const SensorSet& set, const Integrand& fn, const QuadratureRule& rule,
                          std::optional<double> clip) {
    validate_rule(rule);
    double total = 0.0;
    for (const Region& region : set.regions()) {
        const std::vector<Box> cells = region_cells(region, clip, rule.ball_depth);
        if (cells.empty()) continue;
        auto at_level = [&](int level, double& abs_sum) {
            double s = 0.0;
            for (const Box& cell : cells) s += box_integral(cell, fn, rule, level, abs_sum);
            return s;
        };
        double abs_prev = 0.0;
        double prev = at_level(0, abs_prev);
        bool done = false;
        for (int level = 1; level <= rule.max_doublings; ++level) {
            double abs_cur = 0.0;
            const double cur = at_level(level, abs_cur);
            if (std::abs(cur - prev) <= rule.tolerance * std::max(abs_cur, std::numeric_limits<double>::min())) {
                total += cur;
                done = true;
                break;
            }
            if (level == rule.max_doublings) {
                throw QuadratureFailure("integral over " + format_region(region) + " did not converge",
                                        Eigen::MatrixXd::Constant(1, 1, prev), Eigen::MatrixXd::Constant(1, 1, cur));
            }
            prev = cur;
        }
        if (!done) throw NumericalError("integrate_over_set: refinement loop exited without a result");
    }
    return total;
}

ScalingCheck scaling_identity_check(const HermiteVector& f, const SensorSet& set, double t, const QuadratureRule& rule) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("scaling_identity_check: t must be positive and finite");
    if (set.dim() != f.dim()) throw InputError("scaling_identity_check: dimension mismatch");
    ScalingCheck out;
    out.lhs = gram_over_set(f.basis(), set, rule).quadratic_form(f.coeffs());

    const double s = std::pow(t, 0.25);
    const double amp = std::pow(t, -f.dim() / 4.0);
    std::vector<double> y(static_cast<std::size_t>(f.dim()));
    Integrand fn = [&](std::span<const double> x) {
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] / s;
        const double v = f(y);
        return amp * v * v;
    };
    QuadratureRule scaled_rule = rule;
    scaled_rule.panel_width = rule.panel_width * s;
    out.rhs = integrate_over_set(scaled_set(set, t), fn, scaled_rule, s * effective_support_radius(f.basis().max_degree()));
    out.difference = std::abs(out.lhs - out.rhs);
    return out;
}

std::string to_csv(const GramMatrix& gram) {
    std::string out;
    const auto n = gram.entries.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j) out += ',';
        out += std::to_string(j);
    }
    out += '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j) out += ',';
            out += format_double(gram.entries(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace hermspec
