#include "doctest.h"

#include "hermspec/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numeric>

using namespace hermspec;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 5, 8, 64, 128}) {
        const GaussRule& r = gauss_legendre(n);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1 && p <= 40; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[static_cast<std::size_t>(i)] * std::pow(r.nodes[static_cast<std::size_t>(i)], p);
            const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("Gauss-Hermite moments match the gamma function") {
    for (int n : {1, 3, 10, 25, 60}) {
        const GaussRule& r = gauss_hermite(n);
        const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
        CHECK(total == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
        for (int k = 0; k < n && k <= 20; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[static_cast<std::size_t>(i)] * std::pow(r.nodes[static_cast<std::size_t>(i)], 2 * k);
            CHECK(s == doctest::Approx(boost::math::tgamma(k + 0.5)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rules are symmetric and cached") {
    const GaussRule& a = gauss_legendre(17);
    const GaussRule& b = gauss_legendre(17);
    CHECK(&a == &b);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i] == doctest::Approx(-a.nodes[a.nodes.size() - 1 - i]).scale(1.0));
        CHECK(a.weights[i] > 0.0);
    }
}
