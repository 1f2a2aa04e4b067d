// test_bounds.cpp — residual bounds against hand values and literal enumerations

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "mqme/bounds.hpp"
#include "mqme/errors.hpp"
#include "mqme/oracles.hpp"

using namespace mqme;
using namespace mqme::bounds;

namespace {

MomentSequence expo(double tau, int k = 40) { return MomentSequence::exponential(tau, k); }

std::vector<double> random_moments(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> u(0.2, 1.5);
    std::vector<double> mu{1.0};
    double f = 1.0;
    for (int i = 1; i <= k; ++i) mu.push_back((f *= i) * std::pow(u(rng), i));
    return mu;
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST_CASE("Born residual hand values") {
    const double g = 0.7, tau = 0.3;
    CHECK(epsilon_born(0, g, expo(tau)) == doctest::Approx(g));
    CHECK(epsilon_born(1, g, expo(tau)) == doctest::Approx(g * g * tau).epsilon(1e-14));
    CHECK(epsilon_born(2, g, expo(tau)) == doctest::Approx(5 * g * g * g * tau * tau).epsilon(1e-14));
    const MomentSequence mu({1.0, 0.4, 0.9, 2.0}, MomentSource::user_supplied);
    CHECK(epsilon_born(1, g, mu) == doctest::Approx(g * g * 0.4).epsilon(1e-14));
    CHECK(epsilon_born(2, g, mu) == doctest::Approx(g * g * g * (2 * 0.9 + 0.4 * 0.4)).epsilon(1e-14));
}

TEST_CASE("kernel moment bound hand values") {
    const double g = 0.7;
    const MomentSequence mu({1.0, 0.4, 0.9, 2.0, 5.0}, MomentSource::user_supplied);
    for (int j = 0; j <= 4; ++j) CHECK(kernel_moment_bound(1, j, g, mu) == doctest::Approx(g * mu[j]).epsilon(1e-14));
    CHECK(kernel_moment_bound(0, 3, g, mu) == 0.0);
    CHECK(kernel_moment_bound(2, 0, g, mu) == doctest::Approx(g + 2 * g * g * 0.4).epsilon(1e-14));
}

TEST_CASE("the two index forms of the kernel moment bound coincide") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto mu = random_moments(rng, 12);
        for (int n = 0; n <= 5; ++n)
            for (int j = 0; j <= 5; ++j)
                CHECK(close(oracle::kernel_moment_bound(n, j, 0.8, mu), oracle::kernel_moment_bound_shifted(n, j, 0.8, mu),
                            1e-13));
    }
}

TEST_CASE("fast bounds agree with literal enumeration") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        const auto v = random_moments(rng, 12);
        const MomentSequence mu(v, MomentSource::user_supplied);
        const double g = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        for (int n = 0; n <= 4; ++n) {
            CHECK(close(epsilon_born(n, g, mu), oracle::epsilon_born(n, g, v), 1e-12));
            for (int j = 0; j <= 4; ++j)
                CHECK(close(kernel_moment_bound(n, j, g, mu), oracle::kernel_moment_bound(n, j, g, v), 1e-12));
            for (int m = 0; m <= 4; ++m) CHECK(close(*xi_bound_tight(m, n, g, mu), oracle::xi_bound_tight(m, n, g, v), 1e-12));
        }
    }
    // a high order point still small enough to enumerate
    const double gt = 16.0 * 0.1 / (5.5 * 5.5);
    CHECK(close(*xi_bound_tight(7, 7, 1.0, expo(gt)), oracle::xi_bound_tight(7, 7, 1.0, expo(gt).values()), 1e-12));
}

TEST_CASE("tight bound conventions and benchmark values") {
    CHECK(*xi_bound_tight(0, 0, 0.37, expo(0.2)) == doctest::Approx(0.37).epsilon(1e-15));
    const double gt = 16.0 * 0.01 / (5.5 * 5.5);
    const double v88 = *xi_bound_tight(8, 8, 1.0, expo(gt));
    CHECK(v88 >= 2.25e-12);
    CHECK(v88 < 2.35e-12);
    const auto parts = *xi_bound_tight_parts(3, 2, 1.0, expo(0.05));
    CHECK(parts.total() == doctest::Approx(*xi_bound_tight(3, 2, 1.0, expo(0.05))).epsilon(1e-15));
    CHECK_FALSE(xi_bound_tight(30, 30, 1.0, expo(0.01, 60)).has_value());
    // homogeneous of degree one in Gamma at fixed Gamma tau
    CHECK(*xi_bound_tight(3, 3, 2.5, expo(0.02 / 2.5)) == doctest::Approx(2.5 * *xi_bound_tight(3, 3, 1.0, expo(0.02))).epsilon(1e-12));
}

TEST_CASE("moment sequences guard their length") {
    const MomentSequence mu({1.0, 0.5, 0.6}, MomentSource::user_supplied);
    CHECK_THROWS_AS(epsilon_born(3, 1.0, mu), InsufficientMomentsError);
    try {
        (void)xi_bound_tight(2, 2, 1.0, mu);
        FAIL("expected InsufficientMomentsError");
    } catch (const InsufficientMomentsError& e) {
        CHECK(e.required_index == 3);
        CHECK(std::string(e.what()).find("index 3") != std::string::npos);
    }
    CHECK(expo(0.5, 4).highest() == 4);
    CHECK(expo(0.5, 4)[3] == doctest::Approx(6 * 0.125));
}

TEST_CASE("tau_0") {
    CHECK(tau_zero(expo(0.3), 3, 3) == doctest::Approx(0.3).epsilon(1e-14));
    const MomentSequence mu({1.0, 0.5, 0.6}, MomentSource::user_supplied);
    CHECK(tau_zero(mu, 2, 1) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-14));
    CHECK(tau_zero(mu, 1, 1) == doctest::Approx(0.5));
    CHECK(tau_zero(mu, 1, 0) == 0.0);
}

TEST_CASE("simple bound") {
    // k = 0: 4x / g; k = 1: x (1 + 4x) / g^3 with x = 0.01, g = 1 - 4x
    const double x = 0.01, g = 1 - 4 * x;
    const double exact = 4 * x / g + x * (1 + 4 * x) / (g * g * g);
    CHECK(*xi_bound_simple(1, 1, 1.0, 0.01) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(*xi_bound_simple(1, 1, 1.0, 0.01) == doctest::Approx(0.0534216).epsilon(1e-6));
    CHECK_FALSE(xi_bound_simple(2, 2, 1.0, 0.1).has_value()); // (m + n - 1) x = 0.3
    CHECK(*xi_bound_simple(1, 1, 1.0, 1e-9) < 1e-8);
    CHECK(*xi_bound_simple(2, 1, 3.0, 0.01 / 3.0) == doctest::Approx(3.0 * *xi_bound_simple(2, 1, 1.0, 0.01)).epsilon(1e-12));
}

TEST_CASE("m_exp") {
    CHECK(m_exp(16.0 * 0.01 / (5.5 * 5.5)) == 8);
    CHECK(m_exp(16.0 * 0.1 / (5.5 * 5.5)) == 1);
    CHECK(m_exp(1.0) == 0);
    CHECK_THROWS_AS(m_exp(0.0), DomainError);
    // (1 + 4x) / (1 + 8 sqrt(x)) - 1 is O(8 sqrt(x)) and the floor removes at most sqrt(x)
    for (double x = 1e-2; x >= 1e-9; x /= 3.0) {
        const double r = std::sqrt(x);
        CHECK(std::abs(m_exp(x) * r - 1.0) <= 9 * r);
    }
}

TEST_CASE("exponential bound") {
    CHECK(xi_bound_exponential(0.01) == doctest::Approx(std::exp(-20.0 * 0.86 / 1.8 + 2.13)).epsilon(1e-14));
    CHECK(xi_bound_exponential(0.01) == doctest::Approx(5.958e-4).epsilon(1e-3));
    CHECK(xi_bound_exponential(1.0 / 16) == doctest::Approx(2.218).epsilon(1e-3));
    CHECK(xi_bound_exponential(0.01, 2.0) == doctest::Approx(xi_bound_exponential(0.01) * std::exp(-0.13)).epsilon(1e-14));
    // log(bound) sqrt(x) = -2 + O(20 sqrt(x))
    for (double x : {1e-3, 1e-4, 1e-5}) CHECK(std::abs(std::log(xi_bound_exponential(x)) * std::sqrt(x) + 2.0) <= 25 * std::sqrt(x));
    CHECK_THROWS_AS(xi_bound_exponential(0.0), DomainError);
}

TEST_CASE("relaxed coefficients") {
    const double g = 0.6, tau = 0.2;
    CHECK(c_relaxed(1, 0, g, tau) == doctest::Approx(g));
    CHECK(c_relaxed(1, 1, g, tau) == doctest::Approx(g * tau));
    CHECK(c_relaxed(2, 0, g, tau) == doctest::Approx(g * (1 + 2 * g * tau)));
    CHECK_THROWS_AS(c_relaxed(1, 2, g, tau), DomainError);
    for (int n = 1; n <= 6; ++n)
        for (int q = 0; q <= n; ++q)
            CHECK(c_relaxed(n, q, g, tau) >= kernel_moment_bound(n, q, g, expo(tau)) * (1 - 1e-12));
}

TEST_CASE("relaxed bound dominates the tight bound and stays fast at high order") {
    for (int i = 0; i < 20; ++i) {
        const double x = std::pow(10.0, -3.0 + 2.5 * i / 19.0);
        for (int m = 0; m <= 6; ++m) {
            const double tight = *xi_bound_tight(m, m, 1.0, expo(x));
            CHECK(xi_bound_relaxed(m, m, 1.0, x) >= tight * (1 - 1e-12));
        }
    }
    CHECK_THROWS_AS(xi_bound_relaxed(3, 2, 1.0, 0.1), DomainError);
    const auto t0 = std::chrono::steady_clock::now();
    const double v = xi_bound_relaxed(25, 25, 1.0, 0.001);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    CHECK(secs < 1.0);
}

TEST_CASE("tight bound is below the simple bound") {
    for (int i = 0; i < 20; ++i) {
        const double x = 0.24 * (i + 1) / 20.0 / 11.0; // (m + n - 1) x < 1/4 up to m = n = 6
        for (int m = 0; m <= 6; ++m)
            for (int n = 0; n <= 6; ++n) {
                const auto s = xi_bound_simple(m, n, 1.0, x);
                REQUIRE(s.has_value());
                CHECK(*xi_bound_tight(m, n, 1.0, expo(x)) <= *s * (1 + 1e-12));
            }
    }
}

TEST_CASE("bounds are monotone in every moment") {
    std::mt19937_64 rng(9);
    const auto base = random_moments(rng, 10);
    for (int i = 1; i <= 7; ++i) {
        auto bumped = base;
        bumped[i] *= 1.5;
        const MomentSequence a(base, MomentSource::user_supplied), b(bumped, MomentSource::user_supplied);
        for (int n = 0; n <= 4; ++n) {
            CHECK(epsilon_born(n, 0.3, b) >= epsilon_born(n, 0.3, a));
            CHECK(kernel_moment_bound(n, 2, 0.3, b) >= kernel_moment_bound(n, 2, 0.3, a));
            CHECK(*xi_bound_tight(3, n, 0.3, b) >= *xi_bound_tight(3, n, 0.3, a));
        }
    }
}

TEST_CASE("sweeps") {
    CHECK(bound_sweep({}, {Order::fixed(1, 1)}).empty());
    const double gt = 16.0 * 0.1 / (5.5 * 5.5);
    const auto one = bound_sweep({gt}, {Order::fixed(1, 1)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].tight.has_value());
    CHECK(one[0].simple.has_value());
    CHECK(one[0].relaxed.has_value());
    CHECK(one[0].exponential.has_value());
    CHECK(one[0].m_exp == 1);
    CHECK((one[0].flags & tight_computed));

    std::vector<double> grid;
    for (int i = 0; i < 40; ++i) grid.push_back(std::pow(10.0, -3.0 + 3.0 * i / 39.0));
    const std::vector<Order> orders{Order::fixed(1, 1), Order::fixed(2, 2), Order::exp_order(), Order::fixed(20, 20)};
    const auto par = bound_sweep(grid, orders);
    const auto ser = bound_sweep_serial(grid, orders);
    CHECK(par.size() == grid.size() * orders.size());
    CHECK(sweep_csv(par) == sweep_csv(ser));
    const std::string csv = sweep_csv(par);
    CHECK(csv.rfind("gamma_tau,m,n,tight,simple,relaxed,exponential,m_exp,flags\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(par.size()) + 1);
    // grid-major order and the m_exp order resolved per point
    CHECK(par[2].m == par[2].m_exp);
    CHECK(par[2].n == par[2].m_exp);
    CHECK(par[4].gamma_tau == grid[1]);
    // the large fixed order exceeds the term budget and falls back to the relaxed value
    CHECK_FALSE(par[3].tight.has_value());
    CHECK((par[3].flags & tight_skipped_too_large));
    CHECK(par[3].relaxed.has_value());
    // low orders use tau_0 = Gamma tau as well
    const auto low = bound_point(0.05, Order::fixed(0, 1));
    REQUIRE(low.simple.has_value());
    CHECK(*low.simple == doctest::Approx(*xi_bound_simple(0, 1, 1.0, 0.05)));
    CHECK(*low.tight <= *low.simple);
}
