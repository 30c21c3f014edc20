#include "hermspec/random.hpp"

namespace hermspec {

HermiteVector random_unit_vector(const BasisIndexSet& basis, SplitMix64& rng) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.uniform(-1.0, 1.0);
    const double norm = c.norm();
    if (norm > 0.0) c /= norm;
    else c[0] = 1.0;
    return HermiteVector(basis, std::move(c));
}

}  // namespace hermspec
