// ode.hpp — explicit Runge-Kutta integrators for complex linear systems

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace mqme::ode {

using State = Eigen::VectorXcd;
// dy = f(t, y); dy is pre-sized by the caller.
using Rhs = std::function<void(double t, const State& y, State& dy)>;

struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0; // 0: chosen from the first derivative
    double max_step = 0.0;     // 0: unbounded
    long max_steps = 50'000'000;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_calls = 0;
};

// Dormand-Prince 5(4) with embedded error control; returns y at each of `times`
// (non-decreasing, the first entry is the initial time). Steps land exactly on output times.
std::vector<State> dopri5(const Rhs& f, const State& y0, const std::vector<double>& times,
                          const Options& opt = {}, Stats* stats = nullptr);

// Classical fourth-order Runge-Kutta with a fixed step no larger than `step`
// (each output interval is split into equal steps).
std::vector<State> rk4(const Rhs& f, const State& y0, const std::vector<double>& times, double step);

} // namespace mqme::ode
