// test_quadrature.cpp — Gauss-Legendre rules and integrators

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "mqme/quadrature.hpp"

using namespace mqme::quad;

TEST_CASE("Gauss-Legendre rules are exact to degree 2n - 1") {
    for (int n : {1, 2, 3, 6, 16, 32, 64}) {
        const Rule& r = gauss_legendre(n);
        REQUIRE(static_cast<int>(r.nodes.size()) == n);
        CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(std::is_sorted(r.nodes.begin(), r.nodes.end()));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs(s - exact) <= 1e-13);
        }
    }
    CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("composite integration of complex exponentials") {
    const std::complex<double> nu(0.7, 3.0);
    const auto v = integrate([&](double t) { return std::exp(-nu * t); }, 0.0, 5.0, 8, 16);
    const auto exact = (1.0 - std::exp(-nu * 5.0)) / nu;
    CHECK(std::abs(v - exact) <= 1e-13);
    CHECK(composite_nodes(0.0, 1.0, 3, 4).size() == 12);
    CHECK(panels_for(10.0, 4.0) == 3);
    CHECK(panels_for(0.0, 4.0) == 1);
}

TEST_CASE("adaptive integration resolves an endpoint singularity") {
    const auto r = adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    const auto p = adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-12);
    CHECK(p.value == doctest::Approx(2.0 * std::atan(100.0) * 100.0).epsilon(1e-10));
}

TEST_CASE("half-line integration") {
    CHECK(integrate_half_line([](double t) { return t * t * t * std::exp(-t); }, 1.0, 1e-12) ==
          doctest::Approx(6.0).epsilon(1e-11));
    CHECK(integrate_half_line([](double t) { return std::exp(-0.01 * t); }, 100.0, 1e-12) ==
          doctest::Approx(100.0).epsilon(1e-11));
}
