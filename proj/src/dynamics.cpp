// dynamics.cpp — MQME and pseudomode propagators

#include "mqme/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "mqme/errors.hpp"

namespace mqme {

namespace {

void check_density(const Op& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) throw DomainError("density matrix must be square");
    if (!is_hermitian(rho, 1e-10)) throw DomainError("density matrix must be Hermitian");
    if (std::abs(rho.trace() - 1.0) > 1e-10) throw DomainError("density matrix must have unit trace");
}

void record_observables(Trajectory& tr) {
    auto& tr_ = tr.observables["trace"];
    tr_.clear();
    for (const auto& s : tr.states) tr_.push_back(s.trace().real());
    if (!tr.states.empty() && tr.states.front().rows() == 2) {
        const Op z = pauli::z();
        auto& sz = tr.observables["sz"];
        sz.clear();
        for (const auto& s : tr.states) sz.push_back((z * s).trace().real());
    }
}

using Sparse = Eigen::SparseMatrix<cplx>;

} // namespace

Trajectory propagate_mqme(const KernelEvaluator& ev, int m, int n, const Op& rho0, const std::vector<double>& times,
                          const ode::Options& opt, Execution exec) {
    check_density(rho0);
    if (rho0.rows() != ev.system().dim()) throw DomainError("rho0 dimension does not match the system");
    if (times.empty()) return {};
    if (times.front() < ev.t0()) throw DomainError("propagation must start at or after t0");
    const SystemModel& sys = ev.system();
    const auto table = ev.table(m, n, exec);
    const int d = sys.dim();

    // Delta(t) = U(t) L(t - t0) U(t)^-1; in the eigenbasis U(t) is a diagonal phase
    const Op& V = sys.eigenvectors();
    const SuperOp to_e = left_mult(V.adjoint()) * right_mult(V);
    const SuperOp to_o = left_mult(V) * right_mult(V.adjoint());
    const auto& E = sys.energies();
    Eigen::VectorXd w(d * d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) w(j + d * k) = E(j) - E(k);
    std::vector<SuperOp> frames_e;
    frames_e.reserve(table->frames().size());
    for (const auto& f : table->frames()) frames_e.push_back(to_e * f * to_o);
    const double step = table->step();

    ode::Rhs rhs = [&](double t, const ode::State& y, ode::State& dy) {
        Eigen::VectorXcd ph(d * d);
        for (int r = 0; r < d * d; ++r) ph(r) = std::exp(cplx(0.0, w(r) * t));
        // dy = U L U^-1 y with U = diag(ph)
        dy.noalias() = interpolate_frames(frames_e, step, t - ev.t0()) * ph.conjugate().cwiseProduct(y);
        dy = ph.cwiseProduct(dy);
    };

    auto rotate_in = [&](const Op& rho, double t) { // Schroedinger (original basis) -> interaction, eigenbasis
        Op r = V.adjoint() * rho * V;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) r(j, k) *= std::exp(cplx(0.0, (E(j) - E(k)) * t));
        return r;
    };
    auto rotate_out = [&](Op r, double t) {
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) r(j, k) *= std::exp(cplx(0.0, -(E(j) - E(k)) * t));
        return Op(V * r * V.adjoint());
    };

    const auto ys = ode::dopri5(rhs, vec(rotate_in(rho0, times.front())), times, opt);
    Trajectory tr;
    tr.times = times;
    for (std::size_t i = 0; i < ys.size(); ++i) tr.states.push_back(rotate_out(unvec(ys[i]), times[i]));
    record_observables(tr);
    return tr;
}

void PseudomodeModel::validate() const {
    if (!(eta > 0.0)) throw DomainError("pseudomode eta must be > 0");
    if (!(gamma >= 0.0)) throw DomainError("pseudomode gamma must be >= 0");
    if (fock_cutoff < 2) throw DomainError("pseudomode Fock cutoff must be >= 2");
}

namespace {

struct PseudomodeOps {
    int dim;
    Sparse H, L, LdL;
};

// kron(A, B) for the ordering |s, k> -> s * N + k (system slowest)
Sparse kron(const Sparse& A, const Sparse& B) {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int ka = 0; ka < A.outerSize(); ++ka)
        for (Sparse::InnerIterator ia(A, ka); ia; ++ia)
            for (int kb = 0; kb < B.outerSize(); ++kb)
                for (Sparse::InnerIterator ib(B, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                                       ia.value() * ib.value());
    Sparse out(A.rows() * B.rows(), A.cols() * B.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

PseudomodeOps build_ops(const PseudomodeModel& pm) {
    pm.validate();
    const int N = pm.fock_cutoff;
    Sparse b(N, N), num(N, N), idN(N, N), id2(2, 2), sz(2, 2), sx(2, 2);
    std::vector<Eigen::Triplet<cplx>> tb, tn;
    for (int k = 1; k < N; ++k) tb.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    for (int k = 0; k < N; ++k) tn.emplace_back(k, k, static_cast<double>(k));
    b.setFromTriplets(tb.begin(), tb.end());
    num.setFromTriplets(tn.begin(), tn.end());
    idN.setIdentity();
    id2.setIdentity();
    sz.insert(0, 0) = 1.0;
    sz.insert(1, 1) = -1.0;
    sx.insert(0, 1) = 1.0;
    sx.insert(1, 0) = 1.0;
    const Sparse bd = Sparse(b.adjoint());
    const Sparse B = (b + bd) * (1.0 / std::sqrt(2.0));
    PseudomodeOps ops;
    ops.dim = 2 * N;
    Sparse hb = num + 0.5 * idN;
    ops.H = pm.omega * kron(sz, idN) + pm.omega * kron(id2, hb) + std::sqrt(pm.gamma) * kron(sx, B);
    ops.L = std::sqrt(pm.eta) * kron(id2, b);
    ops.LdL = Sparse(ops.L.adjoint()) * ops.L;
    return ops;
}

Op partial_trace_mode(const Op& full, int N) {
    Op r = Op::Zero(2, 2);
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int k = 0; k < N; ++k) r(s, t) += full(s * N + k, t * N + k);
    return r;
}

} // namespace

ode::Rhs pseudomode_rhs(const PseudomodeModel& pm) {
    auto ops = std::make_shared<PseudomodeOps>(build_ops(pm));
    return [ops](double, const ode::State& y, ode::State& dy) {
        const int D = ops->dim;
        Eigen::Map<const Op> rho(y.data(), D, D);
        const Op Lr = ops->L * rho;
        Op out = cplx(0.0, -1.0) * (ops->H * rho) + cplx(0.0, 1.0) * (ops->H.adjoint() * rho.adjoint()).adjoint();
        out += (ops->L * Lr.adjoint()).adjoint(); // L rho L^dagger
        out -= 0.5 * (ops->LdL * rho);
        out -= 0.5 * (ops->LdL.adjoint() * rho.adjoint()).adjoint();
        dy = Eigen::Map<const ode::State>(out.data(), out.size());
    };
}

PseudomodeRun propagate_pseudomode_fixed(const PseudomodeModel& pm, const Op& rho0_sys,
                                         const std::vector<double>& times, const ode::Options& opt) {
    check_density(rho0_sys);
    if (rho0_sys.rows() != 2) throw DomainError("pseudomode benchmark needs a two-level system state");
    pm.validate();
    const int N = pm.fock_cutoff, D = 2 * N;
    Op vac = Op::Zero(N, N);
    vac(0, 0) = 1.0;
    Op full0 = Op::Zero(D, D);
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) full0.block(s * N, t * N, N, N) = rho0_sys(s, t) * vac;
    const auto ys = ode::dopri5(pseudomode_rhs(pm), vec(full0), times, opt);
    PseudomodeRun run;
    run.fock_cutoff = N;
    run.trajectory.times = times;
    run.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& y : ys) {
        const Op full = Eigen::Map<const Op>(y.data(), D, D);
        run.max_trace_error = std::max(run.max_trace_error, std::abs(full.trace() - 1.0));
        run.max_hermiticity_error = std::max(run.max_hermiticity_error, (full - full.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Op> es(0.5 * (full + full.adjoint()), Eigen::EigenvaluesOnly);
        run.min_eigenvalue = std::min(run.min_eigenvalue, es.eigenvalues().minCoeff());
        run.trajectory.states.push_back(partial_trace_mode(full, N));
    }
    record_observables(run.trajectory);
    return run;
}

PseudomodeRun propagate_pseudomode(const PseudomodeModel& pm, const Op& rho0_sys, const std::vector<double>& times,
                                   const PseudomodeOptions& opt) {
    if (!opt.auto_cutoff) return propagate_pseudomode_fixed(pm, rho0_sys, times, opt.ode);
    PseudomodeModel cur = pm;
    PseudomodeRun prev = propagate_pseudomode_fixed(cur, rho0_sys, times, opt.ode);
    while (true) {
        if (2 * cur.fock_cutoff > opt.max_cutoff)
            throw TruncationError("pseudomode Fock cutoff did not converge below " + std::to_string(opt.max_cutoff));
        PseudomodeModel next = cur;
        next.fock_cutoff = 2 * cur.fock_cutoff;
        PseudomodeRun run = propagate_pseudomode_fixed(next, rho0_sys, times, opt.ode);
        double change = 0.0;
        const auto& a = prev.trajectory.observables.at("sz");
        const auto& b = run.trajectory.observables.at("sz");
        for (std::size_t i = 0; i < a.size(); ++i) change = std::max(change, std::abs(a[i] - b[i]));
        if (change < opt.cutoff_tolerance) {
            prev.cutoff_change = change;
            return prev;
        }
        prev = std::move(run);
        cur = next;
    }
}

BenchmarkResult benchmark_error(double gamma, double eta, double omega, int m, int n, const BenchmarkOptions& opt) {
    if (!(gamma >= 0.0) || !(eta > 0.0) || !(omega > 0.0))
        throw DomainError("benchmark needs gamma >= 0, eta > 0, omega > 0");
    if (opt.samples < 2) throw DomainError("benchmark needs at least two samples");
    BenchmarkResult r;
    r.gamma = gamma;
    r.eta = eta;
    r.omega = omega;
    r.m = m;
    r.n = n;
    const BathModel bath = lorentzian_bath(gamma, omega, eta);
    r.gamma_rate = bath.gamma_rate();
    r.tau = bath.correlation_time();
    r.t_o = gamma > 0.0 ? 10.0 / gamma : 10.0 / omega;
    std::vector<double> times(opt.samples);
    for (int i = 0; i < opt.samples; ++i) times[i] = r.t_o * i / (opt.samples - 1);
    times.back() = r.t_o;

    const KernelEvaluator ev(spin_boson_system(omega), bath, 0.0, opt.quad);
    r.mqme = propagate_mqme(ev, m, n, pauli::up(), times, opt.ode, opt.exec);
    PseudomodeModel pm{omega, eta, gamma, 4};
    r.exact = propagate_pseudomode(pm, pauli::up(), times, opt.pseudomode);
    const auto& a = r.mqme.observables.at("sz");
    const auto& b = r.exact.trajectory.observables.at("sz");
    r.delta_sz.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.delta_sz[i] = std::abs(a[i] - b[i]);
    r.delta_at_t_o = r.delta_sz.back();
    r.normalized = r.gamma_rate > 0.0 ? r.delta_at_t_o / (r.gamma_rate * r.t_o) : 0.0;
    return r;
}

} // namespace mqme
