#pragma once

#include <Eigen/Dense>

namespace hermspec {

struct SymmetricEigen {
    /// Ascending.
    Eigen::VectorXd values;
    /// Column i belongs to values[i].
    Eigen::MatrixXd vectors;
    int sweeps = 0;
};

/// Cyclic Jacobi rotations. A rotation is skipped once |a_pq| ≤ tol·√|a_pp a_qq|, which
/// keeps small eigenvalues of graded positive definite matrices relatively accurate.
/// Throws NumericalError if `max_sweeps` sweeps do not suffice.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 100);

}  // namespace hermspec
