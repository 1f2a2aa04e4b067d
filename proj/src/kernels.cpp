// kernels.cpp — Born kernel, dissipators and their inner-integral tables
//
// Every exponential mode of J splits the nested kernel integrals into one-dimensional
// transforms of the interaction-picture couplings, which are tabulated on a uniform grid:
//   Y_b(x) = int_0^x e^{-r(x-y)} X_b(y) dy          (forward)
//   Z_b(x) = int_x^E e^{-r(y-x)} X_a(y) dy          (backward, E = table end)
//   G_b(x) = int_0^x e^{-r(x-y)} X_b(y)^side P(y) dy (forward, weighted by P = int Delta_1n)
// Values between grid points are obtained by stepping exactly from the nearest grid point
// with a short Gauss-Legendre rule. The outer s-integrals are panel Gauss-Legendre.

#include "mqme/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "mqme/errors.hpp"
#include "mqme/quadrature.hpp"

namespace mqme {

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw DomainError("rel_tol must lie in (0, 1e-2]");
    if (node_count < 4) throw DomainError("node_count must be >= 4");
    if (!(memory_cutoff_factor > 0.0)) throw DomainError("memory_cutoff_factor must be > 0");
    if (!(panel_width_factor > 0.0)) throw DomainError("panel_width_factor must be > 0");
    if (table_points_per_window < 10) throw DomainError("table_points_per_window must be >= 10");
    if (!(table_step_factor > 0.0)) throw DomainError("table_step_factor must be > 0");
    if (local_nodes < 2) throw DomainError("local_nodes must be >= 2");
}

namespace {

struct Branch {
    int alpha, beta;
    cplx coef, rate;
    bool left; // X_beta(s)^L or ^R
};

SuperOp side_mult(const Op& x, bool left) { return left ? left_mult(x) : right_mult(x); }

} // namespace

struct KernelEvaluator::Engine {
    // set-up, eigenbasis of H_S
    int d = 0;
    int channels = 0;
    double gamma = 0.0;
    double h = 0.0;
    int K = 0; // grid points 0..K
    Eigen::MatrixXd omega; // E_j - E_k
    std::vector<Op> xe;    // couplings in the eigenbasis
    std::vector<Branch> br;
    std::vector<std::vector<int>> by_alpha;
    QuadConfig quad;
    double panel_width = 0.0;
    double u_max = 0.0;

    // n-independent tables
    std::vector<std::vector<Op>> Y, Zh;
    std::vector<SuperOp> D11, P11;

    struct Order {
        bool ready = false;
        std::vector<SuperOp> D, P;
        std::vector<std::vector<SuperOp>> G;
    };
    Order ord[3];

    double x(int k) const { return k * h; }

    Op xhat(int b, double y) const {
        Op o = xe[b];
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (o(j, k) != 0.0) o(j, k) *= std::exp(cplx(0.0, omega(j, k) * y));
        return o;
    }
    SuperOp comm(int a, double y) const { return commutator(xhat(a, y)); }

    int floor_index(double v) const {
        if (v < -1e-12 * h || v > x(K) * (1 + 1e-12)) throw DomainError("time outside the kernel table range");
        return std::clamp(static_cast<int>(std::floor(v / h)), 0, K);
    }
    bool on_grid(double v, int k) const { return std::abs(v - x(k)) <= 1e-13 * std::max(1.0, v); }

    template <typename F>
    auto local(double a, double b, F&& f) const {
        return quad::integrate(f, a, b, 1, quad.local_nodes);
    }

    Op Y_at(int bi, double v) const {
        const Branch& b = br[bi];
        const int k = floor_index(v);
        if (on_grid(v, k)) return Y[bi][k];
        return (std::exp(-b.rate * (v - x(k))) * Y[bi][k] +
                local(x(k), v, [&](double y) -> Op { return std::exp(-b.rate * (v - y)) * xhat(b.beta, y); }))
            .eval();
    }

    Op Zh_at(int bi, double v) const {
        const Branch& b = br[bi];
        int k = floor_index(v);
        if (on_grid(v, k)) return Zh[bi][k];
        k = std::min(k + 1, K);
        return (std::exp(-b.rate * (x(k) - v)) * Zh[bi][k] +
                local(v, x(k), [&](double y) -> Op { return std::exp(-b.rate * (y - v)) * xhat(b.alpha, y); }))
            .eval();
    }

    SuperOp Z_at(int bi, double v) const { return commutator(Zh_at(bi, v)); }

    // cubic Hermite on [x_k, x_k+1] with values P and derivatives D
    static SuperOp hermite(const std::vector<SuperOp>& P, const std::vector<SuperOp>& D, int k, double h,
                           double v, double x0) {
        const double s = (v - x0) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return h00 * P[k] + h10 * h * D[k] + h01 * P[k + 1] + h11 * h * D[k + 1];
    }

    SuperOp P_at(const std::vector<SuperOp>& P, const std::vector<SuperOp>& D, double v) const {
        const int k = floor_index(v);
        if (on_grid(v, k)) return P[k];
        return hermite(P, D, k, h, v, x(k));
    }

    SuperOp G_at(int n, int bi, double v) const {
        const Branch& b = br[bi];
        const Order& o = ord[n];
        const int k = floor_index(v);
        if (on_grid(v, k)) return o.G[bi][k];
        return (std::exp(-b.rate * (v - x(k))) * o.G[bi][k] +
                local(x(k), v,
                      [&](double y) -> SuperOp {
                          return std::exp(-b.rate * (v - y)) * side_mult(xhat(b.beta, y), b.left) *
                                 hermite(o.P, o.D, k, h, y, x(k));
                      }))
            .eval();
    }

    // -gamma sum_a C_a(t) sum_b coef_b Y_b(t)^side
    SuperOp delta11(double t) const {
        SuperOp acc = SuperOp::Zero(d * d, d * d);
        for (int a = 0; a < channels; ++a) {
            SuperOp inner = SuperOp::Zero(d * d, d * d);
            for (int bi : by_alpha[a]) inner += br[bi].coef * side_mult(Y_at(bi, t), br[bi].left);
            acc -= gamma * comm(a, t) * inner;
        }
        return acc;
    }

    // s-panels of [max(0, t - u_max), t], laid out backwards from t
    std::vector<quad::Node> s_nodes(double t, int nodes) const {
        std::vector<quad::Node> out;
        const double lo = std::max(0.0, t - u_max);
        double hi = t;
        while (hi - lo > 1e-14 * std::max(1.0, t)) {
            const double a = std::max(lo, hi - panel_width);
            quad::append_composite_nodes(out, a, hi, 1, nodes);
            hi = a;
        }
        return out;
    }

    // Second-order kernel term int ds K_2-part(t, s) w(s) with w = 1 (weighted = false) or
    // w(s) = P_n(t) - P_n(s) (weighted = true); nodes per panel from the config unless given.
    SuperOp k2_term(double t, int n, bool weighted, int nodes = 0) const {
        const int D2 = d * d;
        if (t <= 0.0 || gamma == 0.0) return SuperOp::Zero(D2, D2);
        const Order& o = ord[n];
        const SuperOp Pt = weighted ? P_at(o.P, o.D, t) : SuperOp();
        const SuperOp P11t = P_at(P11, D11, t);
        const int nb = static_cast<int>(br.size());
        std::vector<SuperOp> Zt(nb);
        for (int bi = 0; bi < nb; ++bi) Zt[bi] = Z_at(bi, t);
        std::vector<SuperOp> acc(channels, SuperOp::Zero(D2, D2));
        std::vector<SuperOp> S(channels);
        for (const auto& nd : s_nodes(t, nodes > 0 ? nodes : quad.node_count)) {
            const double s = nd.x;
            for (int a = 0; a < channels; ++a) {
                S[a] = SuperOp::Zero(D2, D2);
                for (int bi : by_alpha[a])
                    S[a] += br[bi].coef * std::exp(-br[bi].rate * (t - s)) * side_mult(xhat(br[bi].beta, s), br[bi].left);
            }
            const SuperOp ws = weighted ? SuperOp(Pt - P_at(o.P, o.D, s)) : SuperOp::Identity(D2, D2);
            // sum_b' coef int_s^t C(t2) int_s^t2 S(s2, t2 - s2) = -(P_11(t) - P_11(s)) / gamma
            const SuperOp chain = -(P11t - P_at(P11, D11, s)) / gamma;
            SuperOp right_II = chain; // region s2 > s: S(s2) S(s) w(s)
            std::vector<SuperOp> lead(channels, SuperOp::Zero(D2, D2));
            for (int bi = 0; bi < nb; ++bi) {
                const Branch& b = br[bi];
                const SuperOp Zs = (Z_at(bi, s) - std::exp(-b.rate * (t - s)) * Zt[bi]).eval();
                const SuperOp Ys = side_mult(Y_at(bi, s), b.left);
                right_II -= b.coef * Zs * Ys;
                // region s2 <= s: S(s) S(s2) w(s2)
                const SuperOp Gw = weighted ? SuperOp(Ys * Pt - G_at(n, bi, s)) : Ys;
                for (int a = 0; a < channels; ++a) lead[a] += b.coef * Zs * S[a] * Gw;
            }
            for (int a = 0; a < channels; ++a) acc[a] += nd.w * (lead[a] + right_II * S[a] * ws);
        }
        SuperOp out = SuperOp::Zero(D2, D2);
        for (int a = 0; a < channels; ++a) out += gamma * gamma * comm(a, t) * acc[a];
        return out;
    }

    SuperOp delta1n(int n, double t, int nodes = 0) const {
        if (n == 1) return delta11(t);
        return delta11(t) + k2_term(t, 2, false, nodes);
    }

    SuperOp delta(int m, int n, double t, int nodes = 0) const {
        const SuperOp d1 = delta1n(n, t, nodes);
        if (m == 1) return d1;
        const Order& o = ord[n];
        const SuperOp Pt = P_at(o.P, o.D, t);
        SuperOp corr = SuperOp::Zero(d * d, d * d);
        for (int a = 0; a < channels; ++a) {
            SuperOp inner = SuperOp::Zero(d * d, d * d);
            for (int bi : by_alpha[a])
                inner += br[bi].coef * (side_mult(Y_at(bi, t), br[bi].left) * Pt - G_at(n, bi, t));
            corr -= gamma * comm(a, t) * inner;
        }
        if (n == 2) corr += k2_term(t, n, true, nodes);
        return d1 - corr;
    }

    void build_base() {
        const int nb = static_cast<int>(br.size());
        Y.assign(nb, std::vector<Op>(K + 1, Op::Zero(d, d)));
        Zh.assign(nb, std::vector<Op>(K + 1, Op::Zero(d, d)));
        std::vector<std::vector<SuperOp>> V(nb, std::vector<SuperOp>(K + 1, SuperOp::Zero(d * d, d * d)));
        for (int bi = 0; bi < nb; ++bi) {
            const Branch& b = br[bi];
            const cplx step = std::exp(-b.rate * h);
            for (int k = 0; k < K; ++k) {
                const double x1 = x(k + 1);
                Y[bi][k + 1] = step * Y[bi][k] +
                               local(x(k), x1, [&](double y) -> Op { return std::exp(-b.rate * (x1 - y)) * xhat(b.beta, y); });
            }
            for (int k = K - 1; k >= 0; --k) {
                const double x0 = x(k);
                Zh[bi][k] = step * Zh[bi][k + 1] +
                            local(x0, x(k + 1), [&](double y) -> Op { return std::exp(-b.rate * (y - x0)) * xhat(b.alpha, y); });
            }
            for (int k = 0; k < K; ++k)
                V[bi][k + 1] = V[bi][k] + local(x(k), x(k + 1), [&](double y) -> SuperOp {
                                   return comm(b.alpha, y) * side_mult(Y_at(bi, y), b.left);
                               });
        }
        D11.resize(K + 1);
        P11.assign(K + 1, SuperOp::Zero(d * d, d * d));
        for (int k = 0; k <= K; ++k) {
            D11[k] = delta11(x(k));
            for (int bi = 0; bi < nb; ++bi) P11[k] -= gamma * br[bi].coef * V[bi][k];
        }
    }

    void build_order(int n, Execution exec) {
        Order& o = ord[n];
        if (o.ready) return;
        if (n == 1) {
            o.D = D11;
            o.P = P11;
        } else {
            std::vector<SuperOp> T(K + 1);
            run_indexed(K + 1, exec, [&](int k) { T[k] = k2_term(x(k), 2, false); });
            o.D.resize(K + 1);
            o.P.resize(K + 1);
            for (int k = 0; k <= K; ++k) o.D[k] = D11[k] + T[k];
            // P = P_11 + int T, fourth-order cumulative rule on the grid
            o.P[0] = P11[0];
            SuperOp cum = SuperOp::Zero(d * d, d * d);
            for (int k = 0; k < K; ++k) {
                SuperOp inc;
                if (K < 3) inc = 0.5 * h * (T[k] + T[k + 1]);
                else if (k == 0) inc = h / 24.0 * (9.0 * T[0] + 19.0 * T[1] - 5.0 * T[2] + T[3]);
                else if (k == K - 1) inc = h / 24.0 * (T[k - 2] - 5.0 * T[k - 1] + 19.0 * T[k] + 9.0 * T[k + 1]);
                else inc = h / 24.0 * (-T[k - 1] + 13.0 * T[k] + 13.0 * T[k + 1] - T[k + 2]);
                cum += inc;
                o.P[k + 1] = P11[k + 1] + cum;
            }
        }
        const int nb = static_cast<int>(br.size());
        o.G.assign(nb, std::vector<SuperOp>(K + 1, SuperOp::Zero(d * d, d * d)));
        for (int bi = 0; bi < nb; ++bi) {
            const Branch& b = br[bi];
            const cplx step = std::exp(-b.rate * h);
            for (int k = 0; k < K; ++k) {
                const double x1 = x(k + 1), x0 = x(k);
                o.G[bi][k + 1] = step * o.G[bi][k] + local(x0, x1, [&](double y) -> SuperOp {
                                     return std::exp(-b.rate * (x1 - y)) * side_mult(xhat(b.beta, y), b.left) *
                                            hermite(o.P, o.D, k, h, y, x0);
                                 });
            }
        }
        o.ready = true;
    }

    template <typename F>
    static void run_indexed(int count, Execution exec, F&& f) {
        if (exec == Execution::serial) {
            for (int k = 0; k < count; ++k) f(k);
            return;
        }
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 4)
        for (int k = 0; k < count; ++k) {
            try {
                f(k);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    }
};

KernelEvaluator::KernelEvaluator(SystemModel sys, BathModel bath, double t0, QuadConfig quad)
    : sys_(std::move(sys)), bath_(std::move(bath)), t0_(t0), quad_(quad) {
    quad_.validate();
    if (!std::isfinite(t0_)) throw DomainError("t0 must be finite");
    if (bath_.channel_count() != sys_.coupling_count())
        throw DomainError("bath channel count must equal the number of coupling operators");
    tau_ = bath_.correlation_time();
    u_max_ = quad_.memory_cutoff_factor * tau_ * std::log(1.0 / quad_.rel_tol);
    e_sat_ = u_max_ + 2.0 * tau_;
    h_ = std::min(quad_.table_step_factor * tau_, u_max_ / quad_.table_points_per_window);
}

KernelEvaluator::~KernelEvaluator() = default;

SuperOp KernelEvaluator::kernel_k1(double t, double s) const {
    if (s > t) throw DomainError("kernel_k1 needs s <= t");
    if (s < t0_) throw DomainError("kernel_k1 needs s >= t0");
    const int D2 = sys_.dim() * sys_.dim();
    SuperOp acc = SuperOp::Zero(D2, D2);
    if (bath_.gamma() == 0.0) return acc;
    const Eigen::MatrixXcd j = bath_.correlation(t - s);
    for (int a = 0; a < sys_.coupling_count(); ++a) {
        SuperOp inner = SuperOp::Zero(D2, D2);
        for (int b = 0; b < sys_.coupling_count(); ++b) {
            if (j(a, b) == 0.0) continue;
            const Op xs = sys_.interaction_coupling(b, s);
            inner += j(a, b) * left_mult(xs) - std::conj(j(a, b)) * right_mult(xs);
        }
        acc -= bath_.gamma() * commutator(sys_.interaction_coupling(a, t)) * inner;
    }
    return acc;
}

SuperOp KernelEvaluator::dissipator_first_once(double t, int nodes, double width) const {
    const double span = std::min(t - t0_, u_max_);
    const int D2 = sys_.dim() * sys_.dim();
    if (span <= 0.0) return SuperOp::Zero(D2, D2);
    return quad::integrate([&](double u) -> SuperOp { return kernel_k1(t, t - u); }, 0.0, span,
                           quad::panels_for(span, width), nodes);
}

SuperOp KernelEvaluator::dissipator_first(double t) const {
    if (t < t0_) throw DomainError("dissipator needs t >= t0");
    double width = quad_.panel_width_factor * tau_;
    for (int refine = 0; refine <= 3; ++refine, width *= 0.5) {
        const SuperOp coarse = dissipator_first_once(t, quad_.node_count, width);
        const SuperOp fine = dissipator_first_once(t, 2 * quad_.node_count, width);
        const double scale = std::max(fine.cwiseAbs().maxCoeff(), 1e-300);
        if ((fine - coarse).cwiseAbs().maxCoeff() <= quad_.rel_tol * scale) return fine;
    }
    throw ToleranceError("dissipator_first: node doubling did not converge after 3 refinements");
}

KernelEvaluator::Engine& KernelEvaluator::engine(int n) const {
    std::lock_guard lock(mu_);
    if (!engine_) {
        auto e = std::make_unique<Engine>();
        e->d = sys_.dim();
        e->channels = sys_.coupling_count();
        e->gamma = bath_.gamma();
        e->h = h_;
        e->quad = quad_;
        e->panel_width = quad_.panel_width_factor * tau_;
        e->u_max = u_max_;
        e->K = static_cast<int>(std::ceil(e_sat_ / h_)) + 8;
        const auto& E = sys_.energies();
        e->omega.resize(e->d, e->d);
        for (int j = 0; j < e->d; ++j)
            for (int k = 0; k < e->d; ++k) e->omega(j, k) = E(j) - E(k);
        const Op& V = sys_.eigenvectors();
        for (int a = 0; a < e->channels; ++a) e->xe.push_back(V.adjoint() * sys_.coupling(a) * V);
        e->by_alpha.resize(e->channels);
        for (int a = 0; a < e->channels; ++a)
            for (int b = 0; b < e->channels; ++b)
                for (const auto& m : bath_.modes(a, b)) {
                    e->by_alpha[a].push_back(static_cast<int>(e->br.size()));
                    e->br.push_back({a, b, m.amplitude, m.decay, true});
                    e->by_alpha[a].push_back(static_cast<int>(e->br.size()));
                    e->br.push_back({a, b, -std::conj(m.amplitude), std::conj(m.decay), false});
                }
        e->build_base();
        engine_ = std::move(e);
    }
    if (!engine_->ord[n].ready) engine_->build_order(n, Execution::parallel);
    return *engine_;
}

namespace {

// A -> V A V^dagger on column-stacked operators, and its inverse.
SuperOp to_original(const Op& V) { return left_mult(V) * right_mult(V.adjoint()); }
SuperOp to_eigen(const Op& V) { return left_mult(V.adjoint()) * right_mult(V); }

void check_order(int m, int n) {
    if (m < 1 || m > 2 || n < 1 || n > 2)
        throw UnsupportedOrderError("dissipators are implemented for m, n in {1, 2}");
}

} // namespace

SuperOp KernelEvaluator::dissipator(int m, int n, double t) const {
    check_order(m, n);
    if (t < t0_) throw DomainError("dissipator needs t >= t0");
    if (m == 1 && n == 1) return dissipator_first(t);
    const int D2 = sys_.dim() * sys_.dim();
    if (bath_.gamma() == 0.0) return SuperOp::Zero(D2, D2);
    const Engine& e = engine(n);
    const Op& V = sys_.eigenvectors();
    const double rel = t - t0_;
    // beyond the saturation time the frame-rotated generator is constant to the memory cutoff
    const double ev = std::min(rel, e_sat_);
    SuperOp d = to_original(V) * e.delta(m, n, ev) * to_eigen(V);
    const double shift = t - ev; // Delta(t; t0) = U(shift) Delta(ev; 0) U(shift)^-1
    if (shift != 0.0) d = sys_.rotation(shift) * d * sys_.rotation(-shift);
    return d;
}

std::shared_ptr<const DissipatorTable> KernelEvaluator::table(int m, int n, Execution exec) const {
    check_order(m, n);
    const int D2 = sys_.dim() * sys_.dim();
    const int count = static_cast<int>(std::ceil(e_sat_ / h_)) + 1;
    std::vector<SuperOp> frames(count, SuperOp::Zero(D2, D2));
    if (bath_.gamma() != 0.0) {
        const Engine& e = engine(n);
        const Op& V = sys_.eigenvectors();
        const SuperOp to_o = to_original(V), to_e = to_eigen(V);
        Engine::run_indexed(count, exec, [&](int k) {
            const double x = k * h_;
            // L(x) = U(x)^-1 Delta(x; 0) U(x); in the eigenbasis U is a diagonal phase
            SuperOp dl = e.delta(m, n, x);
            const int d = sys_.dim();
            for (int c = 0; c < D2; ++c)
                for (int r = 0; r < D2; ++r) {
                    const int jr = r % d, kr = r / d, jc = c % d, kc = c / d;
                    dl(r, c) *= std::exp(cplx(0.0, (e.omega(jc, kc) - e.omega(jr, kr)) * x));
                }
            frames[k] = to_o * dl * to_e;
        });
    }
    return std::make_shared<DissipatorTable>(sys_, m, n, t0_, h_, std::move(frames));
}

DissipatorTable::DissipatorTable(const SystemModel& sys, int m, int n, double t0, double step,
                                 std::vector<SuperOp> frames)
    : sys_(sys), m_(m), n_(n), t0_(t0), step_(step), frames_(std::move(frames)) {
    if (frames_.empty()) throw DomainError("dissipator table needs at least one frame");
}

SuperOp interpolate_frames(const std::vector<SuperOp>& frames, double step, double e) {
    if (e < -1e-12) throw DomainError("dissipator table queried before t0");
    const int last = static_cast<int>(frames.size()) - 1;
    const double pos = std::max(e, 0.0) / step;
    if (pos >= last) return frames[last];
    if (last < 3) {
        const int k = static_cast<int>(pos);
        const double f = pos - k;
        return (1 - f) * frames[k] + f * frames[std::min(k + 1, last)];
    }
    const int k = std::clamp(static_cast<int>(std::floor(pos)) - 1, 0, last - 3);
    const double s = pos - k;
    const double w0 = -(s - 1) * (s - 2) * (s - 3) / 6.0, w1 = s * (s - 2) * (s - 3) / 2.0;
    const double w2 = -s * (s - 1) * (s - 3) / 2.0, w3 = s * (s - 1) * (s - 2) / 6.0;
    return w0 * frames[k] + w1 * frames[k + 1] + w2 * frames[k + 2] + w3 * frames[k + 3];
}

SuperOp DissipatorTable::frame(double e) const { return interpolate_frames(frames_, step_, e); }

SuperOp DissipatorTable::generator(double t) const {
    return sys_.rotation(t) * frame(t - t0_) * sys_.rotation(-t);
}

SuperOp redfield_dissipator(const SystemModel& sys, const BathModel& bath, double t0, double t) {
    if (t < t0) throw DomainError("redfield_dissipator needs t >= t0");
    const int d = sys.dim();
    const int D2 = d * d;
    Eigen::SelfAdjointEigenSolver<Op> es(sys.hamiltonian());
    const Eigen::VectorXd E = es.eigenvalues();
    const Op V = es.eigenvectors();
    const double T = t - t0;
    // X_beta(s) = sum_w e^{iws} X_{beta,w}, X_{beta,w} = sum_{E_j - E_k = w} P_j X P_k
    struct Component {
        double w;
        Op op;
    };
    SuperOp acc = SuperOp::Zero(D2, D2);
    for (int a = 0; a < sys.coupling_count(); ++a) {
        SuperOp inner = SuperOp::Zero(D2, D2);
        for (int b = 0; b < sys.coupling_count(); ++b) {
            std::vector<Component> comps;
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    const double w = E(j) - E(k);
                    const Op pj = V.col(j) * V.col(j).adjoint(), pk = V.col(k) * V.col(k).adjoint();
                    const Op piece = pj * sys.coupling(b) * pk;
                    auto it = std::find_if(comps.begin(), comps.end(),
                                           [&](const Component& c) { return std::abs(c.w - w) < 1e-12; });
                    if (it == comps.end()) comps.push_back({w, piece});
                    else it->op += piece;
                }
            for (const auto& c : comps) {
                // truncated half-Fourier transforms of J and conj(J) at frequency w
                cplx jl = 0.0, jr = 0.0;
                for (const auto& m : bath.modes(a, b)) {
                    const cplx zl = m.decay + cplx(0.0, c.w), zr = std::conj(m.decay) + cplx(0.0, c.w);
                    jl += m.amplitude * (1.0 - std::exp(-zl * T)) / zl;
                    jr += std::conj(m.amplitude) * (1.0 - std::exp(-zr * T)) / zr;
                }
                const cplx ph = std::exp(cplx(0.0, c.w * t));
                inner += ph * (jl * left_mult(c.op) - jr * right_mult(c.op));
            }
        }
        acc -= bath.gamma() * commutator(sys.interaction_coupling(a, t)) * inner;
    }
    return acc;
}

} // namespace mqme
