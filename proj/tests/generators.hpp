#pragma once

// Hand-rolled generators for property tests. Every test seeds its own stream so
// failures replay exactly.

#include "hermspec/hermite_basis.hpp"
#include "hermspec/random.hpp"
#include "hermspec/set_geometry.hpp"

#include <cmath>
#include <vector>

namespace hermspec::testing {

inline int uniform_int(SplitMix64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline HermiteVector random_function(SplitMix64& rng, int d, int N) {
    return random_unit_vector(BasisIndexSet(d, N), rng);
}

// Box with corners drawn from [−span, span], sides at least `min_side`.
inline Region random_box(SplitMix64& rng, int d, double span, double min_side = 0.05) {
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const double a = rng.uniform(-span, span - min_side);
        const double b = rng.uniform(a + min_side, span);
        lo[static_cast<std::size_t>(j)] = a;
        hi[static_cast<std::size_t>(j)] = b;
    }
    return Region::box_from_bounds(lo, hi);
}

// Disjoint boxes: slabs along the first axis separated by gaps.
inline SensorSet random_slab_set(SplitMix64& rng, int d, int count, double span) {
    std::vector<Region> regions;
    const double width = 2.0 * span / count;
    for (int i = 0; i < count; ++i) {
        const double a = -span + i * width;
        const double lo0 = rng.uniform(a, a + 0.45 * width);
        const double hi0 = rng.uniform(a + 0.55 * width, a + width);
        std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
        lo[0] = lo0;
        hi[0] = hi0;
        for (int j = 1; j < d; ++j) {
            lo[static_cast<std::size_t>(j)] = rng.uniform(-span, 0.0);
            hi[static_cast<std::size_t>(j)] = rng.uniform(0.1, span);
        }
        regions.push_back(Region::box_from_bounds(lo, hi));
    }
    return SensorSet(d, std::move(regions));
}

}  // namespace hermspec::testing
