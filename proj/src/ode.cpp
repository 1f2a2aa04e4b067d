// ode.cpp — Dormand-Prince 5(4) and classical RK4

#include "mqme/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mqme/errors.hpp"

namespace mqme::ode {

namespace {

void check_times(const std::vector<double>& times) {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] >= times[i - 1])) throw DomainError("output times must be non-decreasing");
}

double error_norm(const State& err, const State& y0, const State& y1, const Options& opt) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        s += r * r;
    }
    return std::sqrt(s / std::max<Eigen::Index>(err.size(), 1));
}

} // namespace

std::vector<State> dopri5(const Rhs& f, const State& y0, const std::vector<double>& times, const Options& opt,
                          Stats* stats) {
    check_times(times);
    std::vector<State> out;
    if (times.empty()) return out;
    out.reserve(times.size());
    out.push_back(y0);

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Eigen::Index n = y0.size();
    State y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
    double t = times.front();
    Stats st;
    f(t, y, k1);
    ++st.rhs_calls;

    double h = opt.initial_step;
    if (!(h > 0.0)) {
        const double d0 = y.norm(), d1 = k1.norm();
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        const double span = times.back() - times.front();
        if (span > 0.0) h = std::min(h, span);
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    long steps = 0;
    for (std::size_t oi = 1; oi < times.size(); ++oi) {
        const double target = times[oi];
        while (t < target) {
            if (++steps > opt.max_steps) throw StiffnessError("dopri5: step budget exhausted");
            const bool last = t + h >= target;
            const double hh = last ? target - t : h;
            if (hh < 1e-14 * std::max(1.0, std::abs(t)))
                throw StiffnessError("dopri5: step size underflow at t = " + std::to_string(t));
            tmp = y + hh * a21 * k1;
            f(t + c2 * hh, tmp, k2);
            tmp = y + hh * (a31 * k1 + a32 * k2);
            f(t + c3 * hh, tmp, k3);
            tmp = y + hh * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * hh, tmp, k4);
            tmp = y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * hh, tmp, k5);
            tmp = y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            const double t1 = last ? target : t + hh;
            f(t1, tmp, k6);
            ynew = y + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            f(t1, ynew, k7);
            st.rhs_calls += 6;
            err = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double en = error_norm(err, y, ynew, opt);
            if (!std::isfinite(en)) throw StiffnessError("dopri5: non-finite error estimate");
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            if (en <= 1.0) {
                t = t1;
                y.swap(ynew);
                k1.swap(k7); // first-same-as-last
                ++st.accepted;
                // do not let a shortened final step shrink the running step size
                if (!last || hh >= h) h = hh * fac;
            } else {
                ++st.rejected;
                h = hh * std::min(fac, 1.0);
            }
            if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        }
        out.push_back(y);
    }
    if (stats) *stats = st;
    return out;
}

std::vector<State> rk4(const Rhs& f, const State& y0, const std::vector<double>& times, double step) {
    check_times(times);
    if (!(step > 0.0)) throw DomainError("rk4 needs a positive step");
    std::vector<State> out;
    if (times.empty()) return out;
    out.push_back(y0);
    const Eigen::Index n = y0.size();
    State y = y0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t oi = 1; oi < times.size(); ++oi) {
        const double t0 = times[oi - 1], span = times[oi] - t0;
        const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / step - 1e-9)) : 0;
        const double h = steps > 0 ? span / steps : 0.0;
        for (long s = 0; s < steps; ++s) {
            const double t = t0 + s * h;
            f(t, y, k1);
            tmp = y + 0.5 * h * k1;
            f(t + 0.5 * h, tmp, k2);
            tmp = y + 0.5 * h * k2;
            f(t + 0.5 * h, tmp, k3);
            tmp = y + h * k3;
            f(t + h, tmp, k4);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(y);
    }
    return out;
}

} // namespace mqme::ode
