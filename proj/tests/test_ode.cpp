// test_ode.cpp — Runge-Kutta integrators on closed-form and Lindblad problems

#include <doctest.h>

#include <cmath>
#include <complex>

#include <unsupported/Eigen/MatrixFunctions>

#include "mqme/dynamics.hpp"
#include "mqme/ode.hpp"

using namespace mqme;
using namespace std::complex_literals;

namespace {

// y' = A y with a damped rotation; exact solution by the matrix exponential.
Eigen::MatrixXcd test_matrix() {
    Eigen::MatrixXcd a(3, 3);
    a << -0.2 + 1.0i, 0.3, 0.0, -0.3, -0.1 - 0.5i, 0.2i, 0.0, 0.2i, -0.05;
    return a;
}

ode::Rhs linear(const Eigen::MatrixXcd& a) {
    return [a](double, const ode::State& y, ode::State& dy) { dy.noalias() = a * y; };
}

ode::State pseudomode_initial(int N) {
    const int D = 2 * N;
    Op full = Op::Zero(D, D);
    full(0, 0) = 1.0; // |up> (x) |0>
    return vec(full);
}

} // namespace

TEST_CASE("dopri5 matches the matrix exponential and lands on output times") {
    const auto a = test_matrix();
    ode::State y0(3);
    y0 << 1.0, 0.5i, -0.2;
    const std::vector<double> times{0.0, 0.3, 1.0, 1.0, 4.5, 10.0};
    ode::Stats stats;
    const auto ys = ode::dopri5(linear(a), y0, times, {}, &stats);
    REQUIRE(ys.size() == times.size());
    CHECK((ys[0] - y0).norm() == 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const ode::State exact = (a * times[i]).exp() * y0;
        CHECK((ys[i] - exact).norm() <= 1e-8 * exact.norm());
    }
    CHECK(stats.accepted > 0);
    CHECK(stats.rhs_calls >= 6 * stats.accepted);

    ode::Options tight;
    tight.rtol = 1e-12;
    tight.atol = 1e-15;
    const auto yt = ode::dopri5(linear(a), y0, times, tight);
    const ode::State exact = (a * 10.0).exp() * y0;
    CHECK((yt.back() - exact).norm() <= 1e-11 * exact.norm());
    CHECK((yt.back() - exact).norm() < (ys.back() - exact).norm());
}

TEST_CASE("rk4 is fourth order") {
    const auto a = test_matrix();
    ode::State y0(3);
    y0 << 1.0, 0.0, 0.0;
    const std::vector<double> times{0.0, 2.0};
    const ode::State exact = (a * 2.0).exp() * y0;
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const double err = (ode::rk4(linear(a), y0, times, h).back() - exact).norm();
        if (prev > 0.0) CHECK(prev / err >= 8.0);
        prev = err;
    }
}

TEST_CASE("rk4 order on the pseudomode model against a tight dopri5 reference") {
    PseudomodeModel pm;
    pm.gamma = 0.1;
    pm.fock_cutoff = 4;
    const auto f = pseudomode_rhs(pm);
    const auto y0 = pseudomode_initial(pm.fock_cutoff);
    const std::vector<double> times{0.0, 2.0};
    ode::Options ref;
    ref.rtol = 1e-13;
    ref.atol = 1e-15;
    const ode::State exact = ode::dopri5(f, y0, times, ref).back();
    const double e1 = (ode::rk4(f, y0, times, 0.05).back() - exact).norm();
    const double e2 = (ode::rk4(f, y0, times, 0.025).back() - exact).norm();
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("step-size limits") {
    const auto a = test_matrix();
    ode::State y0 = ode::State::Ones(3);
    ode::Options opt;
    opt.max_step = 0.01;
    ode::Stats stats;
    (void)ode::dopri5(linear(a), y0, {0.0, 1.0}, opt, &stats);
    CHECK(stats.accepted >= 100);
    opt.max_step = 0.0;
    opt.max_steps = 3;
    CHECK_THROWS(ode::dopri5(linear(a), y0, {0.0, 100.0}, opt));
    CHECK_THROWS(ode::dopri5(linear(a), y0, {1.0, 0.5}));
}
