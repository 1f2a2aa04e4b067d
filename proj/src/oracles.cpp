// oracles.cpp — literal enumerations and dense nested quadrature

#include "mqme/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mqme/combinatorics.hpp"
#include "mqme/errors.hpp"
#include "mqme/quadrature.hpp"

namespace mqme::oracle {

namespace {

double moment(const std::vector<double>& mu, int i) {
    if (i >= static_cast<int>(mu.size())) throw InsufficientMomentsError(i, mu.size());
    return mu[i];
}

// sum over W_parts^total of prod (Gamma mu_q)
double product_sum(int total, int parts, double gamma_rate, const std::vector<double>& mu) {
    double s = 0.0;
    for (auto q : comb::weak_compositions(total, parts)) {
        double p = 1.0;
        for (int v : q) p *= gamma_rate * moment(mu, v);
        s += p;
    }
    return s;
}

double binom(int a, int b) { return comb::binomial(a, b).convert_to<double>(); }

} // namespace

double epsilon_born(int n, double gamma_rate, const std::vector<double>& mu) {
    if (n == 0) return gamma_rate;
    return gamma_rate * product_sum(n, n, gamma_rate, mu);
}

double kernel_moment_bound(int n, int j, double gamma_rate, const std::vector<double>& mu) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += product_sum(k + j - 1, k, gamma_rate, mu);
    return s;
}

double kernel_moment_bound_shifted(int n, int j, double gamma_rate, const std::vector<double>& mu) {
    double s = 0.0;
    for (int k = 0; k <= n - 1; ++k) s += product_sum(k + j, k + 1, gamma_rate, mu);
    return s;
}

double xi_bound_tight(int m, int n, double gamma_rate, const std::vector<double>& mu) {
    std::vector<double> M(m + 1);
    for (int j = 0; j <= m; ++j) M[j] = kernel_moment_bound(n, j, gamma_rate, mu);
    double first = 0.0;
    for (auto q : comb::weak_compositions(m, m + 1)) {
        double p = 1.0;
        int prefix = 0;
        for (int l = 1; l <= m + 1; ++l) {
            p *= binom(l - 1 - prefix, q[l - 1]) * M[q[l - 1]];
            prefix += q[l - 1];
        }
        first += p;
    }
    double second = 0.0;
    for (int k = 0; k <= m; ++k) {
        for (auto q : comb::weak_compositions(k, k)) {
            double p = 1.0;
            int prefix = 0;
            for (int l = 1; l <= k; ++l) {
                p *= binom(l - prefix, q[l - 1]) * M[q[l - 1]];
                prefix += q[l - 1];
            }
            second += p;
        }
    }
    return first + epsilon_born(n, gamma_rate, mu) * second;
}

namespace {

constexpr double kPanelWidth = 1.5;

class Dense {
public:
    Dense(const SystemModel& sys, const BathModel& bath, int nodes)
        : sys_(sys), bath_(bath), nodes_(nodes), d2_(sys.dim() * sys.dim()), ch_(bath.channel_count()) {}

    std::vector<quad::Node> nodes(double a, double b) const {
        if (!(b > a)) return {};
        return quad::composite_nodes(a, b, quad::panels_for(b - a, kPanelWidth), nodes_);
    }

    Op x(int b, double s) const {
        const Op u = sys_.propagator(s);
        return u.adjoint() * sys_.coupling(b) * u;
    }
    SuperOp c(int a, double t) const { return commutator(x(a, t)); }

    std::vector<SuperOp> s_ops(double s, double u) const {
        const Eigen::MatrixXcd J = bath_.correlation(u);
        std::vector<SuperOp> out(ch_, SuperOp::Zero(d2_, d2_));
        for (int b = 0; b < ch_; ++b) {
            const Op xb = x(b, s);
            const SuperOp L = left_mult(xb), R = right_mult(xb);
            for (int a = 0; a < ch_; ++a) out[a] += J(a, b) * L - std::conj(J(a, b)) * R;
        }
        return out;
    }

    // int_0^t ds K_1(t, s) w(s)
    template <typename W>
    SuperOp first(double t, W&& w) const {
        SuperOp acc = SuperOp::Zero(d2_, d2_);
        std::vector<SuperOp> ct(ch_);
        for (int a = 0; a < ch_; ++a) ct[a] = c(a, t);
        for (const auto& nd : nodes(0.0, t)) {
            const auto S = s_ops(nd.x, t - nd.x);
            const SuperOp ws = w(nd.x);
            for (int a = 0; a < ch_; ++a) acc -= bath_.gamma() * nd.w * ct[a] * S[a] * ws;
        }
        return acc;
    }

    // gamma^2 int ds1 int_{s1}^t dt2 int_0^{t2} ds2 C(t) C(t2) T[S(s1) S(s2)] w(min(s1, s2))
    template <typename W>
    SuperOp second(double t, W&& w) const {
        SuperOp acc = SuperOp::Zero(d2_, d2_);
        std::vector<SuperOp> ct(ch_);
        for (int a = 0; a < ch_; ++a) ct[a] = c(a, t);
        for (const auto& n1 : nodes(0.0, t)) {
            const double s1 = n1.x;
            const auto S1 = s_ops(s1, t - s1);
            const SuperOp w1 = w(s1);
            std::vector<SuperOp> inner(ch_, SuperOp::Zero(d2_, d2_)); // indexed by the channel of C(t)
            for (const auto& n2 : nodes(s1, t)) {
                const double t2 = n2.x;
                std::vector<SuperOp> IA(ch_, SuperOp::Zero(d2_, d2_)), IB(ch_, SuperOp::Zero(d2_, d2_));
                for (const auto& n3 : nodes(0.0, s1)) {
                    const auto S2 = s_ops(n3.x, t2 - n3.x);
                    const SuperOp w2 = w(n3.x);
                    for (int b = 0; b < ch_; ++b) IA[b] += n3.w * S2[b] * w2;
                }
                for (const auto& n3 : nodes(s1, t2)) {
                    const auto S2 = s_ops(n3.x, t2 - n3.x);
                    for (int b = 0; b < ch_; ++b) IB[b] += n3.w * S2[b];
                }
                for (int b = 0; b < ch_; ++b) {
                    const SuperOp cb = c(b, t2);
                    for (int a = 0; a < ch_; ++a) inner[a] += n2.w * cb * (S1[a] * IA[b] + IB[b] * S1[a] * w1);
                }
            }
            for (int a = 0; a < ch_; ++a) acc += n1.w * ct[a] * inner[a];
        }
        return bath_.gamma() * bath_.gamma() * acc;
    }

    SuperOp identity() const { return SuperOp::Identity(d2_, d2_); }

private:
    const SystemModel& sys_;
    const BathModel& bath_;
    int nodes_;
    int d2_;
    int ch_;
};

// Barycentric interpolation on Chebyshev points of the second kind over [0, T].
class Chebyshev {
public:
    Chebyshev(double T, int n) : T_(T), x_(n), w_(n) {
        for (int j = 0; j < n; ++j) {
            x_[j] = 0.5 * T * (1.0 - std::cos(std::numbers::pi * j / (n - 1)));
            w_[j] = (j % 2 ? -1.0 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
        }
    }
    const std::vector<double>& points() const { return x_; }

    SuperOp operator()(const std::vector<SuperOp>& f, double v) const {
        SuperOp num = SuperOp::Zero(f[0].rows(), f[0].cols());
        double den = 0.0;
        for (std::size_t j = 0; j < x_.size(); ++j) {
            const double diff = v - x_[j];
            if (std::abs(diff) < 1e-14 * std::max(1.0, T_)) return f[j];
            const double c = w_[j] / diff;
            num += c * f[j];
            den += c;
        }
        return num / den;
    }

private:
    double T_;
    std::vector<double> x_, w_;
};

} // namespace

DenseDissipators dense_dissipators(const SystemModel& sys, const BathModel& bath, const std::vector<double>& times,
                                   int nodes, int chebyshev_points) {
    if (times.empty()) return {};
    if (bath.channel_count() != sys.coupling_count())
        throw DomainError("bath channel count must equal the number of coupling operators");
    if (chebyshev_points < 2) throw DomainError("need at least two Chebyshev points");
    const double T = *std::max_element(times.begin(), times.end());
    if (!(T > 0.0) || *std::min_element(times.begin(), times.end()) < 0.0)
        throw DomainError("dense dissipators need times in [0, T] with T > 0");
    const Dense dn(sys, bath, nodes);
    const auto one = [&](double) { return dn.identity(); };
    const auto d12 = [&](double t) -> SuperOp { return dn.first(t, one) + dn.second(t, one); };

    const Chebyshev cheb(T, chebyshev_points);
    std::vector<SuperOp> f;
    for (double x : cheb.points()) f.push_back(d12(x));
    std::vector<SuperOp> P;
    for (double x : cheb.points()) {
        if (x <= 0.0) {
            P.push_back(SuperOp::Zero(f[0].rows(), f[0].cols()));
            continue;
        }
        P.push_back(quad::integrate([&](double y) -> SuperOp { return cheb(f, y); }, 0.0, x, 1, chebyshev_points));
    }

    DenseDissipators out;
    for (double t : times) {
        out.delta11.push_back(dn.first(t, one));
        out.delta12.push_back(out.delta11.back() + dn.second(t, one));
        const SuperOp Pt = cheb(P, t);
        const auto w = [&](double s) -> SuperOp { return Pt - cheb(P, s); };
        out.delta22.push_back(out.delta12.back() - dn.first(t, w) - dn.second(t, w));
    }
    return out;
}

} // namespace mqme::oracle
