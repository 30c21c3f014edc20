#pragma once

#include <vector>

namespace hermspec {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [−1, 1]. Cached; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

/// n-point Gauss–Hermite rule for the weight e^{−x²} on ℝ. Cached; safe to call concurrently.
const GaussRule& gauss_hermite(int n);

}  // namespace hermspec
