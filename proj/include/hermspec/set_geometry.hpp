#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hermspec {

/// Lebesgue measure τ_d of the Euclidean unit ball in ℝᵈ.
double unit_ball_volume(int dim);

/// Axis-aligned open box or open Euclidean ball.
class Region {
public:
    enum class Kind { box, ball };

    static Region box(std::vector<double> center, std::vector<double> half_sides);
    static Region box_from_bounds(std::span<const double> lower, std::span<const double> upper);
    static Region ball(std::vector<double> center, double radius);

    Kind kind() const noexcept { return kind_; }
    int dim() const noexcept { return static_cast<int>(center_.size()); }
    const std::vector<double>& center() const noexcept { return center_; }
    /// Box only.
    const std::vector<double>& half_sides() const noexcept { return half_sides_; }
    /// Ball only.
    double radius() const noexcept { return radius_; }

    double measure() const;
    double diameter() const;
    bool contains(std::span<const double> x) const;

    std::vector<double> lower() const;
    std::vector<double> upper() const;
    /// Side lengths l of the smallest enclosing axis-parallel hyperrectangle.
    std::vector<double> side_lengths() const;

    /// Image under x ↦ factor·x.
    Region dilated(double factor) const;

    friend bool operator==(const Region&, const Region&) = default;

private:
    Region(Kind kind, std::vector<double> center, std::vector<double> half_sides, double radius);

    Kind kind_;
    std::vector<double> center_;
    std::vector<double> half_sides_;
    double radius_ = 0.0;
};

/// True when the open interiors of a and b share a point.
bool interiors_intersect(const Region& a, const Region& b);

/// Finite union of pairwise interior-disjoint regions.
class SensorSet {
public:
    /// Throws InputError on dimension mismatch or overlapping interiors.
    SensorSet(int dim, std::vector<Region> regions);

    static SensorSet empty(int dim) { return SensorSet(dim, {}); }

    int dim() const noexcept { return dim_; }
    const std::vector<Region>& regions() const noexcept { return regions_; }
    bool is_empty() const noexcept { return regions_.empty(); }
    bool has_balls() const;
    double measure() const;
    bool contains(std::span<const double> x) const;

private:
    int dim_;
    std::vector<Region> regions_;
};

/// Cube-density condition |S ∩ Λ_ρ(k)| / |Λ_ρ(k)| ≥ γ^{1+|k|^β} for k ∈ (ρℤ)ᵈ.
struct CubeDensitySpec {
    double gamma = 0.5;
    double beta = 0.0;
    double rho = 1.0;
    int dim = 1;

    void validate() const;
    double required_ratio(std::span<const double> k) const;
};

enum class RadiusProfile { constant, power_law };

/// Ball-density condition |S ∩ B(x,ρ(x))| / |B(x,ρ(x))| ≥ γ^{1+|x|^α}
/// with ρ(x) ≤ R(1+|x|²)^{(1−ε)/2}.
struct BallDensitySpec {
    double gamma = 0.5;
    double alpha = 0.0;
    double eps = 1.0;
    double R = 1.0;
    RadiusProfile profile = RadiusProfile::power_law;
    /// Used by the constant profile; must not exceed R.
    double constant_radius = 1.0;

    void validate() const;
    double radius_at(std::span<const double> x) const;
    /// R(1+|x|²)^{(1−ε)/2}
    double radius_cap(std::span<const double> x) const;
    double required_ratio(std::span<const double> x) const;
};

struct CoveringElement {
    Region region;
    std::vector<double> side_lengths;
    /// Ψ_k; empty means identity.
    std::optional<Eigen::MatrixXd> transform;
    /// Complementary piece ℝᵈ \ ∪(other elements). `region` then holds the ball A the
    /// other elements cover, and the piece is treated as ℝᵈ \ A.
    bool remainder = false;
};

struct CoveringParams {
    double eta = 1.0;
    double D = 1.0;
    double eps = 1.0;
};

/// Essential covering (Q_k) with overlap bound κ, hypothesis parameters and the
/// central index set 𝒥_c = {k : Q_k ∩ B(0, C√N) ≠ ∅}.
struct CoveringFamily {
    int dim = 1;
    int degree = 1;
    std::vector<CoveringElement> elements;
    double kappa = 1.0;
    CoveringParams params;
    /// C√N, the radius defining the central elements.
    double central_radius = 0.0;
    std::vector<std::size_t> central;
    std::vector<bool> is_central;
};

/// Per-cell outcome of the cube density condition.
struct DensityCell {
    std::vector<double> k;
    double measured = 0.0;
    double required = 0.0;
    bool pass = false;
};

struct DensityReport {
    std::vector<DensityCell> cells;
    bool pass = false;
};

struct ExampleSet {
    SensorSet set;
    /// Exact |S ∩ Λ_1(k)| / |Λ_1(k)| = r_k^d for each materialized k.
    DensityReport lattice_ratios;
};

/// S = ∪_k Λ_{r_k}(k), r_k = ½ γ^{(1+|k|^β)/d}, for k ∈ ℤᵈ with |k|_∞ ≤ window_radius.
ExampleSet example_finite_measure_set(const CubeDensitySpec& spec, double window_radius);

/// Exact cube density check for box-only sets over k ∈ (ρℤ)ᵈ, |k|_∞ ≤ window_radius.
/// Throws UnsupportedError if S contains balls.
DensityReport density_check(const SensorSet& set, const CubeDensitySpec& spec, double window_radius);

/// |S ∩ B| by midpoint rasterization of B on an n^d grid over its bounding box.
double rasterized_intersection_volume(const SensorSet& set, const Region& ball, int cells_per_axis);

struct BallDensitySample {
    std::vector<double> x;
    double radius = 0.0;
    double coarse = 0.0;
    double fine = 0.0;
    /// Richardson estimate 2·fine − coarse of the density ratio.
    double measured = 0.0;
    double required = 0.0;
    bool pass = false;
};

/// Ball density condition at the given centers; intersections rasterized at
/// `cells_per_axis` and twice that, then Richardson-extrapolated.
std::vector<BallDensitySample> ball_density_check(const SensorSet& set, const BallDensitySpec& spec,
                                                  std::span<const std::vector<double>> centers,
                                                  int cells_per_axis = 64);

/// Cubes Λ_ρ(k), k ∈ (ρℤ)ᵈ, |k|_∞ ≤ window; η = d^{−d/2}, D = dρ, ε = 1.
/// The default window is C√N + ρ, which contains every central cube.
CoveringFamily lattice_covering(double rho, int dim, int degree, double kappa = 1.0,
                                std::optional<double> window = std::nullopt);

struct BesicovitchResult {
    CoveringFamily covering;
    double grid_spacing = 0.0;
    std::size_t grid_points = 0;
    std::size_t uncovered_points = 0;
    /// Maximum number of selected closed balls containing a grid point.
    int measured_overlap = 0;
    /// The ball count saturated the 8-bit counter; `measured_overlap` is then a lower bound.
    bool overlap_saturated = false;
    double K = 16.0;
};

/// Greedy ball covering of A = B(0, C√N) with C = 32d(1+√log K^d): grid points are
/// visited in order of decreasing ρ (ties: larger |x| first, then lexicographic) and
/// each still-uncovered point becomes the center of a new ball B(x, ρ(x)).
/// `grid_spacing` defaults to min ρ / 8; a coarser spacing than min ρ is rejected.
BesicovitchResult besicovitch_covering(const BallDensitySpec& spec, int dim, int degree, double K = 16.0,
                                       std::optional<double> grid_spacing = std::nullopt);

struct CoveringCheck {
    std::size_t samples = 0;
    std::size_t uncovered = 0;
    int max_overlap = 0;
    bool eta_within_cap = false;   // η ≤ dτ_d
    bool shape_ok = false;         // |Ψ Q_k| / diam(Ψ Q_k)^d ≥ η on central elements
    bool side_lengths_ok = false;  // ‖l_k‖₁ ≤ D N^{(1−ε)/2} on central elements
    double max_l1 = 0.0;
    bool overlap_ok = false;       // max_overlap ≤ κ
};

/// Samples a uniform grid (with a generic offset that avoids cell faces) of
/// `points_per_axis`^d points in [−half_width, half_width]^d and checks the
/// covering hypotheses.
CoveringCheck check_covering(const CoveringFamily& covering, double half_width, int points_per_axis);

/// Every region dilated by t^{1/4} about the origin.
SensorSet scaled_set(const SensorSet& set, double t);

/// Number of elements in the covering whose closed region contains x (remainder excluded).
int covering_multiplicity(const CoveringFamily& covering, std::span<const double> x);

// Line format: "dim=<d>" then one region per line, "box c1..cd h1..hd" or "ball c1..cd r".
std::string serialize(const SensorSet& set);
SensorSet parse_sensor_set(std::string_view text);
Region parse_region(int dim, std::string_view line);
std::string format_region(const Region& region);

// Coverings add "param <name> <value>" lines, a trailing "central" token on central
// elements and a leading "remainder" token on the complementary element.
std::string serialize(const CoveringFamily& covering);
CoveringFamily parse_covering(std::string_view text);

}  // namespace hermspec
