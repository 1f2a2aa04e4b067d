// quadrature.cpp — Gauss–Legendre rule generation and adaptive drivers

#include "mqme/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

namespace mqme::quad {

namespace {

Rule make_rule(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

} // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make_rule(n));
    return *slot;
}

void append_composite_nodes(std::vector<Node>& out, double a, double b, int panels, int n) {
    const Rule& r = gauss_legendre(n);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int i = 0; i < n; ++i) out.push_back({c + 0.5 * h * r.nodes[i], 0.5 * h * r.weights[i]});
    }
}

std::vector<Node> composite_nodes(double a, double b, int panels, int n) {
    std::vector<Node> out;
    out.reserve(static_cast<std::size_t>(panels) * n);
    append_composite_nodes(out, a, b, panels, n);
    return out;
}

namespace {

double apply(const Rule& r, const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
    return h * s;
}

} // namespace

AdaptiveResult adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                        double abs_tol, int n, int max_depth) {
    const Rule& lo = gauss_legendre(n);
    const Rule& hi = gauss_legendre(2 * n);
    struct Seg {
        double a, b, value, err;
        int depth;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    auto make = [&](double x, double y, int depth) {
        const double fine = apply(hi, f, x, y);
        return Seg{x, y, fine, std::abs(fine - apply(lo, f, x, y)), depth};
    };
    // Global error budget: keep bisecting the interval with the largest error estimate.
    std::priority_queue<Seg> heap;
    heap.push(make(a, b, 0));
    double value = heap.top().value, err = heap.top().err;
    const long max_intervals = 1L << std::min(max_depth, 20);
    while (err > std::max(abs_tol, rel_tol * std::abs(value)) && err > 1e-15 * std::abs(value)) {
        const Seg s = heap.top();
        if (s.depth >= max_depth || static_cast<long>(heap.size()) >= max_intervals)
            throw ToleranceError("adaptive Gauss-Legendre did not converge on [" + std::to_string(s.a) + ", " +
                                 std::to_string(s.b) + "]");
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        const Seg l = make(s.a, mid, s.depth + 1), r = make(mid, s.b, s.depth + 1);
        value += l.value + r.value - s.value;
        err += l.err + r.err - s.err;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum from the pieces to drop the running-update rounding.
    AdaptiveResult res{0.0, 0.0, static_cast<int>(heap.size())};
    while (!heap.empty()) {
        res.value += heap.top().value;
        res.error_estimate += heap.top().err;
        heap.pop();
    }
    return res;
}

double integrate_half_line(const std::function<double(double)>& f, double scale, double rel_tol,
                           double tail_rel) {
    if (!(scale > 0.0)) throw DomainError("integrate_half_line needs a positive length scale");
    double total = 0.0;
    double lo = 0.0;
    double width = scale;
    for (int slab = 0; slab < 400; ++slab) {
        const double hi = lo + width;
        const double part = adaptive(f, lo, hi, rel_tol, 0.0).value;
        total += part;
        lo = hi;
        if (slab > 0 && std::abs(part) <= tail_rel * std::abs(total)) return total;
        if (total == 0.0 && slab > 8) return 0.0;
        width *= 1.5;
    }
    throw ToleranceError("half-line quadrature: tail did not fall below tolerance");
}

} // namespace mqme::quad
