#pragma once

#include "hermspec/hermite_basis.hpp"

#include <cstdint>

namespace hermspec {

/// SplitMix64. Chosen over <random> engines because its output sequence is fixed by
/// definition, which keeps seeded suites byte-reproducible across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

/// Coefficients uniform on [−1, 1], then normalized to ‖f‖ = 1.
HermiteVector random_unit_vector(const BasisIndexSet& basis, SplitMix64& rng);

}  // namespace hermspec
