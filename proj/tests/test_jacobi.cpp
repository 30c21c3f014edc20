#include "doctest.h"
#include "generators.hpp"

#include "hermspec/errors.hpp"
#include "hermspec/jacobi.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace hermspec;
using hermspec::testing::uniform_int;

namespace {

Eigen::MatrixXd random_symmetric(SplitMix64& rng, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
    return a;
}

Eigen::MatrixXd random_orthogonal(SplitMix64& rng, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

}  // namespace

TEST_CASE("eigenvalues agree with Eigen's self-adjoint solver (property)") {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = uniform_int(rng, 1, 40);
        const Eigen::MatrixXd a = random_symmetric(rng, n);
        const SymmetricEigen e = jacobi_eigen(a);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(a);
        CHECK((e.values - oracle.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::MatrixXd vtv = e.vectors.transpose() * e.vectors;
        CHECK((vtv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((a * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
        for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
    }
}

TEST_CASE("small eigenvalues of graded positive definite matrices keep relative accuracy") {
    // A = D M D with M = Q Λ Qᵀ well conditioned and D strongly graded. A⁻¹ = D⁻¹ M⁻¹ D⁻¹ is
    // formed entrywise to full relative accuracy, and its largest eigenvalue is normwise
    // accurate, so 1/λ_max(A⁻¹) is an independent oracle for λ_min(A).
    SplitMix64 rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 8;
        const Eigen::MatrixXd q = random_orthogonal(rng, n);
        Eigen::VectorXd lambda(n), grade(n);
        for (int i = 0; i < n; ++i) lambda(i) = 1.0 + i;
        for (int i = 0; i < n; ++i) grade(i) = std::pow(10.0, -1.5 * i);
        const Eigen::MatrixXd m = q * lambda.asDiagonal() * q.transpose();
        const Eigen::MatrixXd minv = q * lambda.cwiseInverse().asDiagonal() * q.transpose();
        const Eigen::MatrixXd a = grade.asDiagonal() * m * grade.asDiagonal();
        const Eigen::MatrixXd ainv = grade.cwiseInverse().asDiagonal() * minv * grade.cwiseInverse().asDiagonal();
        const double oracle = 1.0 / Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ainv, Eigen::EigenvaluesOnly).eigenvalues()(n - 1);
        const SymmetricEigen e = jacobi_eigen(a);
        CHECK(e.values(0) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("trivial and invalid inputs") {
    const SymmetricEigen one = jacobi_eigen(Eigen::MatrixXd::Constant(1, 1, 3.5));
    CHECK(one.values(0) == 3.5);
    CHECK(one.sweeps <= 1);
    const SymmetricEigen id = jacobi_eigen(Eigen::MatrixXd::Identity(5, 5));
    CHECK(id.values.isOnes());
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
    diag.diagonal() << 3.0, -1.0, 2.0;
    CHECK(jacobi_eigen(diag).values == Eigen::Vector3d(-1.0, 2.0, 3.0));
    CHECK_THROWS_AS(jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), InputError);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(2, 2);
    nan(0, 1) = nan(1, 0) = NAN;
    CHECK_THROWS_AS(jacobi_eigen(nan), InputError);
    SplitMix64 rng(1);
    CHECK_THROWS_AS(jacobi_eigen(random_symmetric(rng, 30), 1), NumericalError);
}
