// quadrature.hpp — Gauss–Legendre rules, composite panels and adaptive integration

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "mqme/errors.hpp"

namespace mqme::quad {

struct Rule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point Gauss–Legendre rule. Rules are computed once per n and cached.
const Rule& gauss_legendre(int n);

struct Node {
    double x;
    double w;
};

// Composite rule: [a, b] split into `panels` equal panels, each with the n-point rule.
std::vector<Node> composite_nodes(double a, double b, int panels, int n);

// Same as composite_nodes but appends to `out` (no allocation once `out` has capacity).
void append_composite_nodes(std::vector<Node>& out, double a, double b, int panels, int n);

// Number of panels of width at most `width` needed to cover `length` (at least one).
inline int panels_for(double length, double width) {
    if (!(length > 0.0)) return 1;
    return std::max(1, static_cast<int>(std::ceil(length / width - 1e-12)));
}

template <typename F>
auto integrate(F&& f, double a, double b, int panels, int n) {
    using T = std::decay_t<decltype(f(a))>;
    const Rule& r = gauss_legendre(n);
    const double h = (b - a) / panels;
    T acc{};
    bool first = true;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double c = lo + 0.5 * h;
        for (int i = 0; i < n; ++i) {
            const double x = c + 0.5 * h * r.nodes[i];
            const double w = 0.5 * h * r.weights[i];
            if (first) {
                acc = w * f(x);
                first = false;
            } else {
                acc += w * f(x);
            }
        }
    }
    return acc;
}

struct AdaptiveResult {
    double value;
    double error_estimate;
    int intervals;
};

// Adaptive Gauss–Legendre for real integrands. The per-interval error is the difference
// between the 2n- and n-point rules; the interval with the largest error is bisected until
// the summed error is at most max(abs_tol, rel_tol |I|).
AdaptiveResult adaptive(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol = 0.0, int n = 15, int max_depth = 40);

// Integral over (0, inf) of a non-negative, eventually decaying function: the upper end
// is pushed out until the last slab contributes less than tail_rel of the accumulated sum.
double integrate_half_line(const std::function<double(double)>& f, double scale, double rel_tol,
                           double tail_rel = 1e-14);

} // namespace mqme::quad
