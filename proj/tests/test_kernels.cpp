// test_kernels.cpp — memory kernels and dissipators against structural invariants and oracles

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mqme/errors.hpp"
#include "mqme/kernels.hpp"
#include "mqme/oracles.hpp"

using namespace mqme;
using namespace std::complex_literals;

namespace {

constexpr double kOmega = 1.0, kEta = 5.5;

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Op random_hermitian(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Op a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
    return a + a.adjoint();
}

// Three levels, two couplings, cross-correlated channels.
SystemModel qutrit() {
    Op h = Op::Zero(3, 3);
    h(0, 0) = 1.0;
    h(1, 1) = -0.3;
    h(2, 2) = -0.9;
    h(0, 1) = h(1, 0) = 0.2;
    Op x1 = Op::Zero(3, 3), x2 = Op::Zero(3, 3);
    x1(0, 1) = x1(1, 0) = 1.0;
    x2(1, 2) = 1.0i;
    x2(2, 1) = -1.0i;
    return SystemModel(h, {x1, x2});
}

BathModel qutrit_bath() {
    BathModel::Channels ch(2, std::vector<std::vector<ExpMode>>(2));
    ch[0][0] = {{0.5, 2.0 + 1.0i}};
    ch[1][1] = {{0.3, 1.5 - 0.4i}};
    ch[0][1] = {{0.1 + 0.05i, 1.8 + 0.0i}};
    ch[1][0] = {{0.1 - 0.05i, 1.8 + 0.0i}};
    return BathModel(ch, 0.03);
}

// max over A of |Tr Delta(A)| relative to ||Delta||: the <<I| row
double trace_row(const SuperOp& d, int dim) {
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(d.cols());
    for (int i = 0; i < dim; ++i) row += d.row(i * dim + i);
    return row.cwiseAbs().maxCoeff() / std::max(max_abs(d), 1e-300);
}

} // namespace

TEST_CASE("kernel K1 structure") {
    const SystemModel sys = spin_boson_system(kOmega);
    const KernelEvaluator ev(sys, lorentzian_bath(0.1, kOmega, kEta));
    for (double t : {0.0, 0.4, 2.3}) {
        const SuperOp c = commutator(sys.interaction_coupling(0, t));
        CHECK(max_abs(ev.kernel_k1(t, t) - (-0.1 * 0.5) * c * c) <= 1e-14);
    }
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const double t = 3.0 * (i + 1) / 10, s = t * 0.37;
        const SuperOp k = ev.kernel_k1(t, s);
        CHECK(trace_row(k, 2) <= 1e-14);
        const Op a = random_hermitian(2, rng);
        const Op out = mqme::apply(k, a);
        CHECK(max_abs(out - out.adjoint()) <= 1e-13 * max_abs(out));
    }
    CHECK_THROWS_AS(ev.kernel_k1(1.0, 1.5), DomainError);
    const KernelEvaluator zero(sys, lorentzian_bath(0.0, kOmega, kEta));
    CHECK(max_abs(zero.kernel_k1(1.0, 0.5)) == 0.0);
    for (int m = 1; m <= 2; ++m)
        for (int n = 1; n <= 2; ++n) CHECK(max_abs(zero.dissipator(m, n, 2.0)) == 0.0);
}

TEST_CASE("dissipators preserve trace and Hermiticity") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 8.0);
    const KernelEvaluator spin(spin_boson_system(kOmega), lorentzian_bath(0.1, kOmega, kEta));
    const KernelEvaluator three(qutrit(), qutrit_bath());
    for (const KernelEvaluator* ev : {&spin, &three}) {
        const int d = ev->system().dim();
        for (int i = 0; i < 20; ++i) {
            const double t = u(rng);
            for (int m = 1; m <= 2; ++m)
                for (int n = 1; n <= 2; ++n) {
                    const SuperOp D = ev->dissipator(m, n, t);
                    CHECK(trace_row(D, d) <= 1e-8);
                    const Op a = random_hermitian(d, rng);
                    const Op out = mqme::apply(D, a);
                    CHECK(max_abs(out - out.adjoint()) <= 1e-8 * std::max(max_abs(out), 1e-300));
                }
        }
    }
}

TEST_CASE("first-order dissipator") {
    const SystemModel sys = spin_boson_system(kOmega);
    const BathModel bath = lorentzian_bath(0.1, kOmega, kEta);
    const KernelEvaluator ev(sys, bath);
    CHECK(max_abs(ev.dissipator_first(0.0)) == 0.0);
    for (int i = 1; i <= 10; ++i) {
        const double t = 1.7 * i;
        const SuperOp d11 = ev.dissipator(1, 1, t);
        CHECK(max_abs(d11 - ev.dissipator_first(t)) <= 1e-8 * max_abs(d11));
        CHECK(max_abs(d11 - redfield_dissipator(sys, bath, 0.0, t)) <= 1e-6 * max_abs(d11));
    }
    // a longer memory window changes nothing beyond the tolerance
    QuadConfig wide;
    wide.memory_cutoff_factor = 4.0;
    const KernelEvaluator ev_wide(sys, bath, 0.0, wide);
    for (double t : {0.5, 3.0, 12.0})
        CHECK(max_abs(ev_wide.dissipator_first(t) - ev.dissipator_first(t)) <= 1e-8 * max_abs(ev.dissipator_first(t)));
}

TEST_CASE("second-order dissipators agree with a dense nested quadrature") {
    const SystemModel sys = spin_boson_system(kOmega);
    const BathModel bath = lorentzian_bath(0.1, kOmega, kEta);
    const KernelEvaluator ev(sys, bath);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(0.3 * i);
    const auto dense = oracle::dense_dissipators(sys, bath, times);
    const double gt = bath.gamma_rate() * bath.correlation_time();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double scale = max_abs(dense.delta11[i]);
        CHECK(max_abs(ev.dissipator(1, 1, times[i]) - dense.delta11[i]) <= 1e-6 * scale);
        CHECK(max_abs(ev.dissipator(1, 2, times[i]) - dense.delta12[i]) <= 1e-6 * scale);
        CHECK(max_abs(ev.dissipator(2, 2, times[i]) - dense.delta22[i]) <= 1e-6 * scale);
        // the (2,2) correction is small on the scale of Gamma tau
        const double corr = max_abs(ev.dissipator(2, 2, times[i]) - ev.dissipator(1, 1, times[i]));
        CHECK(corr <= 10.0 * gt * scale);
    }
}

TEST_CASE("node doubling and late-time periodicity") {
    const SystemModel sys = spin_boson_system(kOmega);
    const BathModel bath = lorentzian_bath(0.1, kOmega, kEta);
    const KernelEvaluator ev(sys, bath);
    QuadConfig fine;
    fine.node_count = 64;
    const KernelEvaluator ev_fine(sys, bath, 0.0, fine);
    for (int i = 1; i <= 10; ++i) {
        const double t = 0.9 * i;
        for (int m = 1; m <= 2; ++m)
            for (int n = 1; n <= 2; ++n)
                CHECK(max_abs(ev.dissipator(m, n, t) - ev_fine.dissipator(m, n, t)) <=
                      2 * ev.quad().rel_tol * std::max(1.0, max_abs(ev.dissipator(m, n, t))));
    }
    // beyond the memory window the generator repeats with the Hamiltonian period pi / Omega
    const double t = ev.saturation_time() + 1.3, period = std::numbers::pi / kOmega;
    for (int m = 1; m <= 2; ++m)
        for (int n = 1; n <= 2; ++n) {
            const SuperOp a = ev.dissipator(m, n, t), b = ev.dissipator(m, n, t + period);
            CHECK(max_abs(a - b) <= 1e-8 * max_abs(a));
        }
}

TEST_CASE("covariance under a change of time unit") {
    // H -> H / s, decays -> decays / s, gamma -> gamma / s^2: Delta(s t) = Delta(t) / s
    const double s = 2.0;
    const BathModel bath = lorentzian_bath(0.1, kOmega, kEta);
    const KernelEvaluator a(spin_boson_system(kOmega), bath);
    const KernelEvaluator b(spin_boson_system(kOmega / s), bath.time_rescaled(s));
    for (double t : {0.4, 1.1, 2.5})
        for (int m = 1; m <= 2; ++m)
            for (int n = 1; n <= 2; ++n) {
                const SuperOp da = a.dissipator(m, n, t);
                CHECK(max_abs(s * b.dissipator(m, n, s * t) - da) <= 1e-7 * max_abs(da));
            }
}

TEST_CASE("generator tables") {
    const SystemModel sys = spin_boson_system(kOmega);
    const BathModel bath = lorentzian_bath(0.1, kOmega, kEta);
    const KernelEvaluator ev_s(sys, bath), ev_p(sys, bath);
    for (int m = 1; m <= 2; ++m)
        for (int n = 1; n <= 2; ++n) {
            const auto ts = ev_s.table(m, n, Execution::serial);
            const auto tp = ev_p.table(m, n, Execution::parallel);
            REQUIRE(ts->frames().size() == tp->frames().size());
            double diff = 0.0;
            for (std::size_t k = 0; k < ts->frames().size(); ++k) diff = std::max(diff, max_abs(ts->frames()[k] - tp->frames()[k]));
            CHECK(diff == 0.0);
            // cubic interpolation, measured on the scale of the saturated generator
            const double scale = max_abs(ev_s.dissipator(m, n, ts->saturation_time()));
            for (double t : {0.01, 0.05, 0.37, 2.9, ts->saturation_time() + 4.0})
                CHECK(max_abs(ts->generator(t) - ev_s.dissipator(m, n, t)) <= 1e-6 * scale);
        }
}

TEST_CASE("unsupported orders") {
    const KernelEvaluator ev(spin_boson_system(kOmega), lorentzian_bath(0.1, kOmega, kEta));
    CHECK_THROWS_AS(ev.dissipator(3, 1, 1.0), UnsupportedOrderError);
    CHECK_THROWS_AS(ev.dissipator(1, 0, 1.0), UnsupportedOrderError);
    CHECK_THROWS_AS(ev.table(1, 3), UnsupportedOrderError);
    CHECK_THROWS_AS(ev.dissipator(1, 1, -1.0), DomainError);
    // channel count must match the coupling count
    CHECK_THROWS(KernelEvaluator(qutrit(), lorentzian_bath(0.1, kOmega, kEta)));
    QuadConfig bad;
    bad.node_count = 2;
    CHECK_THROWS(KernelEvaluator(spin_boson_system(kOmega), lorentzian_bath(0.1, kOmega, kEta), 0.0, bad));
}
