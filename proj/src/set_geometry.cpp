#include "hermspec/set_geometry.hpp"

#include "hermspec/bounds.hpp"
#include "hermspec/errors.hpp"
#include "hermspec/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace hermspec {

namespace {

double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// Calls fn(k) for every integer vector k ∈ [−w, w]^dim in lexicographic order.
template <class Fn>
void for_each_lattice_point(int dim, long long w, Fn&& fn) {
    if (dim == 0) {
        std::vector<long long> empty;
        fn(empty);
        return;
    }
    std::vector<long long> k(static_cast<std::size_t>(dim), -w);
    while (true) {
        fn(k);
        int j = dim - 1;
        while (j >= 0 && k[static_cast<std::size_t>(j)] == w) {
            k[static_cast<std::size_t>(j)] = -w;
            --j;
        }
        if (j < 0) break;
        ++k[static_cast<std::size_t>(j)];
    }
}

void require_dim(const Region& r, int dim, std::string_view where) {
    if (r.dim() != dim)
        throw InputError(fmt::format("{}: region of dimension {} in a {}-dimensional context", where, r.dim(), dim));
}

double box_overlap_volume(const Region& box, std::span<const double> lo, std::span<const double> hi) {
    double v = 1.0;
    for (int j = 0; j < box.dim(); ++j) {
        const auto u = static_cast<std::size_t>(j);
        const double a = std::max(box.center()[u] - box.half_sides()[u], lo[u]);
        const double b = std::min(box.center()[u] + box.half_sides()[u], hi[u]);
        if (b <= a) return 0.0;
        v *= b - a;
    }
    return v;
}

long long isqrt_floor(double value) {
    if (value < 0) return -1;
    auto s = static_cast<long long>(std::floor(std::sqrt(value)));
    while (static_cast<double>(s + 1) * static_cast<double>(s + 1) <= value) ++s;
    while (s > 0 && static_cast<double>(s) * static_cast<double>(s) > value) --s;
    return s;
}

}  // namespace

double unit_ball_volume(int dim) {
    if (dim < 1) throw InputError("unit_ball_volume: dimension must be at least 1");
    const double d = dim;
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// ---------------------------------------------------------------------------
// Region

Region::Region(Kind kind, std::vector<double> center, std::vector<double> half_sides, double radius)
    : kind_(kind), center_(std::move(center)), half_sides_(std::move(half_sides)), radius_(radius) {}

Region Region::box(std::vector<double> center, std::vector<double> half_sides) {
    if (center.empty()) throw InputError("Region::box: empty center");
    if (center.size() != half_sides.size()) throw InputError("Region::box: center/half-side dimension mismatch");
    for (double c : center)
        if (!std::isfinite(c)) throw InputError("Region::box: non-finite center");
    for (double h : half_sides)
        if (!(h > 0.0) || !std::isfinite(h)) throw InputError("Region::box: half-sides must be positive and finite");
    return Region(Kind::box, std::move(center), std::move(half_sides), 0.0);
}

Region Region::box_from_bounds(std::span<const double> lower, std::span<const double> upper) {
    if (lower.size() != upper.size()) throw InputError("Region::box_from_bounds: dimension mismatch");
    std::vector<double> c(lower.size()), h(lower.size());
    for (std::size_t j = 0; j < lower.size(); ++j) {
        c[j] = 0.5 * (lower[j] + upper[j]);
        h[j] = 0.5 * (upper[j] - lower[j]);
    }
    return box(std::move(c), std::move(h));
}

Region Region::ball(std::vector<double> center, double radius) {
    if (center.empty()) throw InputError("Region::ball: empty center");
    for (double c : center)
        if (!std::isfinite(c)) throw InputError("Region::ball: non-finite center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("Region::ball: radius must be positive and finite");
    return Region(Kind::ball, std::move(center), {}, radius);
}

double Region::measure() const {
    if (kind_ == Kind::ball) return unit_ball_volume(dim()) * std::pow(radius_, dim());
    double v = 1.0;
    for (double h : half_sides_) v *= 2.0 * h;
    return v;
}

double Region::diameter() const {
    if (kind_ == Kind::ball) return 2.0 * radius_;
    return 2.0 * std::sqrt(squared_norm(half_sides_));
}

bool Region::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim()) throw InputError("Region::contains: dimension mismatch");
    if (kind_ == Kind::ball) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - center_[j]) * (x[j] - center_[j]);
        return s < radius_ * radius_;
    }
    for (std::size_t j = 0; j < x.size(); ++j)
        if (std::abs(x[j] - center_[j]) >= half_sides_[j]) return false;
    return true;
}

std::vector<double> Region::lower() const {
    std::vector<double> out(center_);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] -= kind_ == Kind::ball ? radius_ : half_sides_[j];
    return out;
}

std::vector<double> Region::upper() const {
    std::vector<double> out(center_);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += kind_ == Kind::ball ? radius_ : half_sides_[j];
    return out;
}

std::vector<double> Region::side_lengths() const {
    std::vector<double> out(center_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = 2.0 * (kind_ == Kind::ball ? radius_ : half_sides_[j]);
    return out;
}

Region Region::dilated(double factor) const {
    if (!(factor > 0.0)) throw InputError("Region::dilated: factor must be positive");
    std::vector<double> c(center_);
    for (double& v : c) v *= factor;
    if (kind_ == Kind::ball) return ball(std::move(c), radius_ * factor);
    std::vector<double> h(half_sides_);
    for (double& v : h) v *= factor;
    return box(std::move(c), std::move(h));
}

bool interiors_intersect(const Region& a, const Region& b) {
    if (a.dim() != b.dim()) throw InputError("interiors_intersect: dimension mismatch");
    const auto d = static_cast<std::size_t>(a.dim());
    if (a.kind() == Region::Kind::box && b.kind() == Region::Kind::box) {
        for (std::size_t j = 0; j < d; ++j)
            if (std::abs(a.center()[j] - b.center()[j]) >= a.half_sides()[j] + b.half_sides()[j]) return false;
        return true;
    }
    if (a.kind() == Region::Kind::ball && b.kind() == Region::Kind::ball) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += (a.center()[j] - b.center()[j]) * (a.center()[j] - b.center()[j]);
        const double r = a.radius() + b.radius();
        return s < r * r;
    }
    const Region& box = a.kind() == Region::Kind::box ? a : b;
    const Region& ball = a.kind() == Region::Kind::box ? b : a;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double excess = std::abs(ball.center()[j] - box.center()[j]) - box.half_sides()[j];
        if (excess > 0) s += excess * excess;
    }
    return s < ball.radius() * ball.radius();
}

// ---------------------------------------------------------------------------
// SensorSet

SensorSet::SensorSet(int dim, std::vector<Region> regions) : dim_(dim), regions_(std::move(regions)) {
    if (dim < 1) throw InputError("SensorSet: dimension must be at least 1");
    for (const auto& r : regions_) require_dim(r, dim, "SensorSet");
    // Sweep along axis 0 so that only regions with overlapping extents are compared.
    std::vector<std::size_t> order(regions_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> lo(regions_.size()), hi(regions_.size());
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        lo[i] = regions_[i].lower()[0];
        hi[i] = regions_[i].upper()[0];
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo[a] < lo[b]; });
    for (std::size_t p = 0; p < order.size(); ++p) {
        for (std::size_t q = p + 1; q < order.size() && lo[order[q]] < hi[order[p]]; ++q) {
            if (interiors_intersect(regions_[order[p]], regions_[order[q]]))
                throw InputError(fmt::format("SensorSet: regions {} and {} overlap", order[p], order[q]));
        }
    }
}

bool SensorSet::has_balls() const {
    return std::any_of(regions_.begin(), regions_.end(), [](const Region& r) { return r.kind() == Region::Kind::ball; });
}

double SensorSet::measure() const {
    double total = 0.0;
    for (const auto& r : regions_) total += r.measure();
    return total;
}

bool SensorSet::contains(std::span<const double> x) const {
    return std::any_of(regions_.begin(), regions_.end(), [&](const Region& r) { return r.contains(x); });
}

// ---------------------------------------------------------------------------
// Density specifications

void CubeDensitySpec::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("CubeDensitySpec: gamma must lie in (0,1)");
    if (!(beta >= 0.0)) throw InputError("CubeDensitySpec: beta must be non-negative");
    if (!(rho > 0.0)) throw InputError("CubeDensitySpec: rho must be positive");
    if (dim < 1) throw InputError("CubeDensitySpec: dimension must be at least 1");
}

double CubeDensitySpec::required_ratio(std::span<const double> k) const {
    return std::pow(gamma, 1.0 + std::pow(std::sqrt(squared_norm(k)), beta));
}

void BallDensitySpec::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("BallDensitySpec: gamma must lie in (0,1)");
    if (!(alpha >= 0.0)) throw InputError("BallDensitySpec: alpha must be non-negative");
    if (!(eps > 0.0 && eps <= 1.0)) throw InputError("BallDensitySpec: eps must lie in (0,1]");
    if (!(R > 0.0)) throw InputError("BallDensitySpec: R must be positive");
    if (profile == RadiusProfile::constant && !(constant_radius > 0.0 && constant_radius <= R))
        throw InputError("BallDensitySpec: constant radius must lie in (0, R]");
}

double BallDensitySpec::radius_cap(std::span<const double> x) const {
    return R * std::pow(1.0 + squared_norm(x), (1.0 - eps) / 2.0);
}

double BallDensitySpec::radius_at(std::span<const double> x) const {
    return profile == RadiusProfile::constant ? constant_radius : radius_cap(x);
}

double BallDensitySpec::required_ratio(std::span<const double> x) const {
    return std::pow(gamma, 1.0 + std::pow(std::sqrt(squared_norm(x)), alpha));
}

// ---------------------------------------------------------------------------
// Example set and density checks

ExampleSet example_finite_measure_set(const CubeDensitySpec& spec, double window_radius) {
    spec.validate();
    if (spec.rho != 1.0) throw InputError("example_finite_measure_set: the example uses rho = 1");
    if (!(window_radius > 0.0)) throw InputError("example_finite_measure_set: window_radius must be positive");
    const int d = spec.dim;
    const auto w = static_cast<long long>(std::floor(window_radius));
    std::vector<Region> regions;
    DensityReport ratios;
    ratios.pass = true;
    for_each_lattice_point(d, w, [&](const std::vector<long long>& k) {
        std::vector<double> center(k.begin(), k.end());
        const double exponent = 1.0 + std::pow(std::sqrt(squared_norm(center)), spec.beta);
        const double r = 0.5 * std::pow(spec.gamma, exponent / d);
        DensityCell cell;
        cell.k = center;
        cell.measured = std::pow(r, d);
        cell.required = std::pow(spec.gamma, exponent);
        cell.pass = cell.measured >= cell.required;
        ratios.pass = ratios.pass && cell.pass;
        ratios.cells.push_back(std::move(cell));
        regions.push_back(Region::box(std::move(center), std::vector<double>(static_cast<std::size_t>(d), r / 2.0)));
    });
    return ExampleSet{SensorSet(d, std::move(regions)), std::move(ratios)};
}

DensityReport density_check(const SensorSet& set, const CubeDensitySpec& spec, double window_radius) {
    spec.validate();
    if (set.dim() != spec.dim) throw InputError("density_check: dimension mismatch");
    if (set.has_balls())
        throw UnsupportedError("density_check: exact cube intersections need box-only sets; rasterize balls first");
    if (!(window_radius >= 0.0)) throw InputError("density_check: window_radius must be non-negative");
    const int d = spec.dim;
    const auto w = static_cast<long long>(std::floor(window_radius / spec.rho + 1e-12));
    const long long side = 2 * w + 1;
    const double cell_volume = std::pow(spec.rho, d);

    std::vector<double> volume(static_cast<std::size_t>(std::pow(static_cast<double>(side), d)), 0.0);
    auto flat = [&](const std::vector<long long>& idx) {
        std::size_t f = 0;
        for (long long v : idx) f = f * static_cast<std::size_t>(side) + static_cast<std::size_t>(v + w);
        return f;
    };
    for (const auto& region : set.regions()) {
        const auto lo = region.lower();
        const auto hi = region.upper();
        std::vector<long long> first(static_cast<std::size_t>(d)), last(static_cast<std::size_t>(d));
        bool empty = false;
        for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
            first[j] = std::max(-w, static_cast<long long>(std::floor(lo[j] / spec.rho + 0.5)));
            last[j] = std::min(w, static_cast<long long>(std::ceil(hi[j] / spec.rho - 0.5)));
            if (first[j] > last[j]) empty = true;
        }
        if (empty) continue;
        std::vector<long long> idx(first);
        std::vector<double> clo(static_cast<std::size_t>(d)), chi(static_cast<std::size_t>(d));
        while (true) {
            for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
                clo[j] = (static_cast<double>(idx[j]) - 0.5) * spec.rho;
                chi[j] = (static_cast<double>(idx[j]) + 0.5) * spec.rho;
            }
            volume[flat(idx)] += box_overlap_volume(region, clo, chi);
            int j = d - 1;
            while (j >= 0 && idx[static_cast<std::size_t>(j)] == last[static_cast<std::size_t>(j)]) {
                idx[static_cast<std::size_t>(j)] = first[static_cast<std::size_t>(j)];
                --j;
            }
            if (j < 0) break;
            ++idx[static_cast<std::size_t>(j)];
        }
    }

    DensityReport report;
    report.pass = true;
    for_each_lattice_point(d, w, [&](const std::vector<long long>& idx) {
        DensityCell cell;
        cell.k.resize(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) cell.k[j] = static_cast<double>(idx[j]) * spec.rho;
        cell.measured = volume[flat(idx)] / cell_volume;
        cell.required = spec.required_ratio(cell.k);
        cell.pass = cell.measured >= cell.required;
        report.pass = report.pass && cell.pass;
        report.cells.push_back(std::move(cell));
    });
    return report;
}

double rasterized_intersection_volume(const SensorSet& set, const Region& ball, int cells_per_axis) {
    require_dim(ball, set.dim(), "rasterized_intersection_volume");
    if (cells_per_axis < 1) throw InputError("rasterized_intersection_volume: need at least one cell per axis");
    const int d = set.dim();
    const auto lo = ball.lower();
    const auto hi = ball.upper();
    std::vector<double> h(static_cast<std::size_t>(d));
    double cell_volume = 1.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        h[j] = (hi[j] - lo[j]) / cells_per_axis;
        cell_volume *= h[j];
    }
    std::vector<const Region*> nearby;
    for (const auto& r : set.regions())
        if (interiors_intersect(r, ball)) nearby.push_back(&r);
    if (nearby.empty()) return 0.0;

    std::size_t hits = 0;
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = lo[j] + (idx[j] + 0.5) * h[j];
        if (ball.contains(x) && std::any_of(nearby.begin(), nearby.end(), [&](const Region* r) { return r->contains(x); }))
            ++hits;
        int j = d - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == cells_per_axis - 1) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
    }
    return static_cast<double>(hits) * cell_volume;
}

std::vector<BallDensitySample> ball_density_check(const SensorSet& set, const BallDensitySpec& spec,
                                                  std::span<const std::vector<double>> centers, int cells_per_axis) {
    spec.validate();
    std::vector<BallDensitySample> out;
    out.reserve(centers.size());
    for (const auto& x : centers) {
        if (static_cast<int>(x.size()) != set.dim()) throw InputError("ball_density_check: center dimension mismatch");
        BallDensitySample s;
        s.x = x;
        s.radius = spec.radius_at(x);
        const Region ball = Region::ball(x, s.radius);
        const double volume = ball.measure();
        s.coarse = rasterized_intersection_volume(set, ball, cells_per_axis) / volume;
        s.fine = rasterized_intersection_volume(set, ball, 2 * cells_per_axis) / volume;
        s.measured = std::clamp(2.0 * s.fine - s.coarse, 0.0, 1.0);
        s.required = spec.required_ratio(x);
        s.pass = s.measured >= s.required;
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coverings

CoveringFamily lattice_covering(double rho, int dim, int degree, double kappa, std::optional<double> window) {
    if (!(rho > 0.0)) throw InputError("lattice_covering: rho must be positive");
    if (dim < 1) throw InputError("lattice_covering: dimension must be at least 1");
    if (degree < 0) throw InputError("lattice_covering: degree must be non-negative");
    const double C = concentration_radius(dim, kappa);
    CoveringFamily cov;
    cov.dim = dim;
    cov.degree = degree;
    cov.kappa = kappa;
    cov.params.eta = std::pow(static_cast<double>(dim), -dim / 2.0);
    cov.params.D = dim * rho;
    cov.params.eps = 1.0;
    cov.central_radius = C * std::sqrt(static_cast<double>(degree));
    const double half_width = window.value_or(cov.central_radius + rho);
    if (!(half_width > 0.0)) throw InputError("lattice_covering: window must be positive");
    const auto w = static_cast<long long>(std::floor(half_width / rho + 1e-12));

    for_each_lattice_point(dim, w, [&](const std::vector<long long>& k) {
        std::vector<double> center(k.size());
        double dist2 = 0.0;
        for (std::size_t j = 0; j < k.size(); ++j) {
            center[j] = static_cast<double>(k[j]) * rho;
            const double excess = std::abs(center[j]) - rho / 2.0;
            if (excess > 0) dist2 += excess * excess;
        }
        CoveringElement e{Region::box(std::move(center), std::vector<double>(k.size(), rho / 2.0)),
                          std::vector<double>(k.size(), rho), std::nullopt, false};
        const bool central = dist2 < cov.central_radius * cov.central_radius;
        if (central) cov.central.push_back(cov.elements.size());
        cov.is_central.push_back(central);
        cov.elements.push_back(std::move(e));
    });
    return cov;
}

BesicovitchResult besicovitch_covering(const BallDensitySpec& spec, int dim, int degree, double K,
                                       std::optional<double> grid_spacing) {
    spec.validate();
    if (dim < 1) throw InputError("besicovitch_covering: dimension must be at least 1");
    if (degree < 1) throw InputError("besicovitch_covering: degree must be at least 1");
    if (!(K >= 1.0)) throw InputError("besicovitch_covering: K must be at least 1");

    const double kappa = std::pow(K, dim);
    const double C = concentration_radius(dim, kappa);
    const double a_radius = C * std::sqrt(static_cast<double>(degree));
    const std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
    // Both profiles are radial and non-decreasing in |x|, so the minimum sits at 0.
    const double min_rho = spec.radius_at(origin);
    const double h = grid_spacing.value_or(min_rho / 8.0);
    if (!(h > 0.0) || h > min_rho)
        throw InputError(fmt::format(
            "besicovitch_covering: grid spacing {} is coarser than the smallest radius {}; refine to at most {}", h,
            min_rho, min_rho / 8.0));

    const auto r2max = static_cast<long long>(std::floor((a_radius / h) * (a_radius / h)));
    const long long rg = isqrt_floor(static_cast<double>(r2max));
    const int line_dim = dim - 1;
    const double lookup_size = std::pow(static_cast<double>(2 * rg + 1), line_dim);
    if (lookup_size > 5e7) throw InputError("besicovitch_covering: grid too large for this dimension; use a coarser spacing");

    // Lines run along the last axis and are keyed by the remaining d−1 coordinates.
    struct Line {
        std::vector<long long> p;
        long long p2;
        long long half;
        std::size_t offset;
    };
    std::vector<Line> lines;
    std::vector<std::int64_t> line_lookup(static_cast<std::size_t>(lookup_size), -1);
    auto lookup_index = [&](const std::vector<long long>& p) -> std::int64_t {
        std::size_t f = 0;
        for (long long v : p) {
            if (v < -rg || v > rg) return -1;
            f = f * static_cast<std::size_t>(2 * rg + 1) + static_cast<std::size_t>(v + rg);
        }
        return static_cast<std::int64_t>(f);
    };
    std::size_t total = 0;
    for_each_lattice_point(line_dim, rg, [&](const std::vector<long long>& p) {
        long long p2 = 0;
        for (long long v : p) p2 += v * v;
        if (p2 > r2max) return;
        const long long half = isqrt_floor(static_cast<double>(r2max - p2));
        line_lookup[static_cast<std::size_t>(lookup_index(p))] = static_cast<std::int64_t>(lines.size());
        lines.push_back(Line{p, p2, half, total});
        total += static_cast<std::size_t>(2 * half + 1);
    });

    std::vector<std::uint8_t> count(total, 0);
    bool saturated = false;

    struct Cursor {
        long long r2;
        std::size_t line;
        long long i;
        int step;  // −1 walks the non-negative half inward, +1 the negative half
    };
    // Pop order: larger |x| first, then lexicographically smaller coordinates.
    auto later = [](const Cursor& a, const Cursor& b) {
        if (a.r2 != b.r2) return a.r2 < b.r2;
        if (a.line != b.line) return a.line > b.line;
        return a.i > b.i;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heap(later);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& L = lines[li];
        heap.push(Cursor{L.p2 + L.half * L.half, li, L.half, -1});
        if (L.half > 0) heap.push(Cursor{L.p2 + L.half * L.half, li, -L.half, +1});
    }

    std::vector<std::vector<double>> centers;
    std::vector<double> radii;
    std::vector<double> y(static_cast<std::size_t>(dim));
    std::vector<long long> q(static_cast<std::size_t>(line_dim)), target(static_cast<std::size_t>(line_dim));

    while (!heap.empty()) {
        Cursor c = heap.top();
        heap.pop();
        const Line& L = lines[c.line];
        const std::size_t flat = L.offset + static_cast<std::size_t>(c.i + L.half);
        if (count[flat] == 0) {
            for (int j = 0; j < line_dim; ++j) y[static_cast<std::size_t>(j)] = h * static_cast<double>(L.p[static_cast<std::size_t>(j)]);
            y[static_cast<std::size_t>(line_dim)] = h * static_cast<double>(c.i);
            const double rho = spec.radius_at(y);
            centers.push_back(y);
            radii.push_back(rho);
            const double rr = (rho / h) * (rho / h);
            const long long qmax = isqrt_floor(rr);
            for_each_lattice_point(line_dim, qmax, [&](const std::vector<long long>& off) {
                long long q2 = 0;
                for (long long v : off) q2 += v * v;
                if (static_cast<double>(q2) > rr) return;
                for (int j = 0; j < line_dim; ++j)
                    target[static_cast<std::size_t>(j)] = L.p[static_cast<std::size_t>(j)] + off[static_cast<std::size_t>(j)];
                const auto li = lookup_index(target);
                if (li < 0 || line_lookup[static_cast<std::size_t>(li)] < 0) return;
                const Line& T = lines[static_cast<std::size_t>(line_lookup[static_cast<std::size_t>(li)])];
                const long long s = isqrt_floor(rr - static_cast<double>(q2));
                const long long first = std::max(c.i - s, -T.half);
                const long long last = std::min(c.i + s, T.half);
                for (long long i = first; i <= last; ++i) {
                    auto& v = count[T.offset + static_cast<std::size_t>(i + T.half)];
                    if (v == 255) saturated = true;
                    else ++v;
                }
            });
        }
        const long long next = c.i + c.step;
        if ((c.step < 0 && next >= 0) || (c.step > 0 && next < 0))
            heap.push(Cursor{L.p2 + next * next, c.line, next, c.step});
    }

    BesicovitchResult result;
    result.grid_spacing = h;
    result.grid_points = total;
    result.K = K;
    result.overlap_saturated = saturated;
    for (auto v : count) {
        if (v == 0) ++result.uncovered_points;
        result.measured_overlap = std::max(result.measured_overlap, static_cast<int>(v));
    }

    CoveringFamily& cov = result.covering;
    cov.dim = dim;
    cov.degree = degree;
    cov.kappa = kappa;
    cov.params.eta = unit_ball_volume(dim) / std::pow(2.0, dim);
    cov.params.D = 4.0 * dim * spec.R * C;
    cov.params.eps = spec.eps;
    cov.central_radius = a_radius;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        cov.central.push_back(cov.elements.size());
        cov.is_central.push_back(true);
        cov.elements.push_back(CoveringElement{Region::ball(centers[k], radii[k]),
                                               std::vector<double>(static_cast<std::size_t>(dim), 2.0 * radii[k]),
                                               std::nullopt, false});
    }
    cov.is_central.push_back(false);
    cov.elements.push_back(CoveringElement{Region::ball(origin, a_radius),
                                           std::vector<double>(static_cast<std::size_t>(dim), 2.0 * a_radius),
                                           std::nullopt, true});
    return result;
}

int covering_multiplicity(const CoveringFamily& covering, std::span<const double> x) {
    int m = 0;
    for (const auto& e : covering.elements) {
        if (e.remainder) {
            if (std::sqrt(squared_norm(x)) >= e.region.radius()) ++m;
        } else if (e.region.contains(x)) {
            ++m;
        }
    }
    return m;
}

CoveringCheck check_covering(const CoveringFamily& covering, double half_width, int points_per_axis) {
    if (points_per_axis < 1) throw InputError("check_covering: need at least one point per axis");
    const int d = covering.dim;
    CoveringCheck check;
    const double tau = unit_ball_volume(d);
    check.eta_within_cap = covering.params.eta <= d * tau * (1.0 + 1e-12);

    const double l1_cap = covering.params.D * std::pow(static_cast<double>(covering.degree), (1.0 - covering.params.eps) / 2.0);
    check.side_lengths_ok = true;
    check.shape_ok = true;
    for (std::size_t k : covering.central) {
        const auto& e = covering.elements[k];
        double l1 = 0.0;
        for (double l : e.side_lengths) l1 += l;
        check.max_l1 = std::max(check.max_l1, l1);
        if (l1 > l1_cap * (1.0 + 1e-12)) check.side_lengths_ok = false;
        // Ψ_k is the identity in both constructions.
        const double shape = e.region.measure() / std::pow(e.region.diameter(), d);
        if (shape < covering.params.eta * (1.0 - 1e-12)) check.shape_ok = false;
    }

    // Bucket elements into strips along axis 0.
    double strip = 0.0;
    for (const auto& e : covering.elements)
        if (!e.remainder) strip = std::max(strip, e.region.upper()[0] - e.region.lower()[0]);
    if (strip <= 0.0) strip = 1.0;
    const double origin = -half_width - strip;
    const auto strips = static_cast<std::size_t>(std::ceil((2.0 * half_width + 2.0 * strip) / strip)) + 1;
    std::vector<std::vector<std::size_t>> buckets(strips);
    std::vector<std::size_t> remainders;
    for (std::size_t k = 0; k < covering.elements.size(); ++k) {
        const auto& e = covering.elements[k];
        if (e.remainder) {
            remainders.push_back(k);
            continue;
        }
        const double lo = e.region.lower()[0];
        const double hi = e.region.upper()[0];
        if (hi < -half_width || lo > half_width) continue;
        const auto a = static_cast<std::size_t>(std::max(0.0, std::floor((lo - origin) / strip)));
        const auto b = std::min(strips - 1, static_cast<std::size_t>(std::max(0.0, std::floor((hi - origin) / strip))));
        for (std::size_t s = a; s <= b; ++s) buckets[s].push_back(k);
    }

    // Golden-ratio offset keeps samples off lattice faces.
    constexpr double kOffset = 0.3819660112501051;
    const double step = 2.0 * half_width / points_per_axis;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    while (true) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = -half_width + (idx[j] + kOffset) * step;
        int m = 0;
        const auto s = static_cast<std::size_t>(std::floor((x[0] - origin) / strip));
        for (std::size_t k : buckets[std::min(s, strips - 1)])
            if (covering.elements[k].region.contains(x)) ++m;
        for (std::size_t k : remainders)
            if (std::sqrt(squared_norm(x)) >= covering.elements[k].region.radius()) ++m;
        ++check.samples;
        if (m == 0) ++check.uncovered;
        check.max_overlap = std::max(check.max_overlap, m);
        int j = d - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == points_per_axis - 1) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
    }
    check.overlap_ok = check.max_overlap <= covering.kappa;
    return check;
}

SensorSet scaled_set(const SensorSet& set, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("scaled_set: t must be positive");
    const double factor = std::pow(t, 0.25);
    std::vector<Region> regions;
    regions.reserve(set.regions().size());
    for (const auto& r : set.regions()) regions.push_back(t == 1.0 ? r : r.dilated(factor));
    return SensorSet(set.dim(), std::move(regions));
}

// ---------------------------------------------------------------------------
// Text format

std::string format_region(const Region& region) {
    std::string out = region.kind() == Region::Kind::box ? "box" : "ball";
    for (double c : region.center()) out += " " + format_double(c);
    if (region.kind() == Region::Kind::box)
        for (double h : region.half_sides()) out += " " + format_double(h);
    else
        out += " " + format_double(region.radius());
    return out;
}

Region parse_region(int dim, std::string_view line) {
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) throw InputError("parse_region: empty region description");
    const auto d = static_cast<std::size_t>(dim);
    auto values = [&](std::size_t first, std::size_t count) {
        std::vector<double> v;
        for (std::size_t i = first; i < first + count; ++i) v.push_back(parse_double(tokens[i], "region coordinate"));
        return v;
    };
    if (tokens[0] == "box") {
        if (tokens.size() != 1 + 2 * d)
            throw InputError(fmt::format("parse_region: box needs {} numbers, got {}", 2 * d, tokens.size() - 1));
        return Region::box(values(1, d), values(1 + d, d));
    }
    if (tokens[0] == "ball") {
        if (tokens.size() != 2 + d)
            throw InputError(fmt::format("parse_region: ball needs {} numbers, got {}", d + 1, tokens.size() - 1));
        return Region::ball(values(1, d), parse_double(tokens[1 + d], "ball radius"));
    }
    throw InputError(fmt::format("parse_region: unknown region kind '{}'", tokens[0]));
}

namespace {

int parse_dim_header(std::string_view line) {
    line = trim(line);
    if (line.substr(0, 4) != "dim=") throw InputError("expected header line 'dim=<d>'");
    const auto d = parse_integer(line.substr(4), "dimension");
    if (d < 1) throw InputError("dimension must be at least 1");
    return static_cast<int>(d);
}

std::vector<std::string_view> content_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(start, end - start));
        if (!line.empty() && line[0] != '#') lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

}  // namespace

std::string serialize(const SensorSet& set) {
    std::string out = fmt::format("dim={}\n", set.dim());
    for (const auto& r : set.regions()) out += format_region(r) + "\n";
    return out;
}

SensorSet parse_sensor_set(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw InputError("parse_sensor_set: missing 'dim=' header");
    const int d = parse_dim_header(lines[0]);
    std::vector<Region> regions;
    for (std::size_t i = 1; i < lines.size(); ++i) regions.push_back(parse_region(d, lines[i]));
    return SensorSet(d, std::move(regions));
}

std::string serialize(const CoveringFamily& covering) {
    std::string out = fmt::format("dim={}\n", covering.dim);
    out += fmt::format("param degree {}\n", covering.degree);
    out += "param kappa " + format_double(covering.kappa) + "\n";
    out += "param eta " + format_double(covering.params.eta) + "\n";
    out += "param D " + format_double(covering.params.D) + "\n";
    out += "param eps " + format_double(covering.params.eps) + "\n";
    out += "param central_radius " + format_double(covering.central_radius) + "\n";
    for (std::size_t k = 0; k < covering.elements.size(); ++k) {
        const auto& e = covering.elements[k];
        out += e.remainder ? "remainder " : "";
        out += format_region(e.region);
        if (covering.is_central[k]) out += " central";
        out += "\n";
    }
    return out;
}

CoveringFamily parse_covering(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw InputError("parse_covering: missing 'dim=' header");
    CoveringFamily cov;
    cov.dim = parse_dim_header(lines[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = lines[i];
        if (line.substr(0, 6) == "param ") {
            const auto tokens = split_whitespace(line);
            if (tokens.size() != 3) throw InputError("parse_covering: malformed param line");
            if (tokens[1] == "degree") cov.degree = static_cast<int>(parse_integer(tokens[2], "degree"));
            else if (tokens[1] == "kappa") cov.kappa = parse_double(tokens[2], "kappa");
            else if (tokens[1] == "eta") cov.params.eta = parse_double(tokens[2], "eta");
            else if (tokens[1] == "D") cov.params.D = parse_double(tokens[2], "D");
            else if (tokens[1] == "eps") cov.params.eps = parse_double(tokens[2], "eps");
            else if (tokens[1] == "central_radius") cov.central_radius = parse_double(tokens[2], "central_radius");
            else throw InputError(fmt::format("parse_covering: unknown param '{}'", tokens[1]));
            continue;
        }
        bool remainder = false;
        if (line.substr(0, 10) == "remainder ") {
            remainder = true;
            line = trim(line.substr(10));
        }
        bool central = false;
        if (line.size() >= 8 && line.substr(line.size() - 8) == " central") {
            central = true;
            line = trim(line.substr(0, line.size() - 8));
        }
        Region r = parse_region(cov.dim, line);
        auto l = r.side_lengths();
        if (central) cov.central.push_back(cov.elements.size());
        cov.is_central.push_back(central);
        cov.elements.push_back(CoveringElement{std::move(r), std::move(l), std::nullopt, remainder});
    }
    return cov;
}

}  // namespace hermspec
