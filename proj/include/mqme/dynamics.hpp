// dynamics.hpp — master-equation propagation and the pseudomode benchmark

#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqme/kernels.hpp"
#include "mqme/ode.hpp"
#include "mqme/superop.hpp"

namespace mqme {

struct Trajectory {
    std::vector<double> times;
    std::vector<Op> states; // system density matrices, Schroedinger picture
    std::map<std::string, std::vector<double>> observables;
};

// Propagates d/dt rho_I = Delta_mn(t) rho_I in the interaction picture from rho0 at times.front()
// (which must be >= t0) and records Schroedinger-picture states. Observables: "trace", and "sz"
// for two-level systems.
Trajectory propagate_mqme(const KernelEvaluator& ev, int m, int n, const Op& rho0, const std::vector<double>& times,
                          const ode::Options& opt = {}, Execution exec = Execution::parallel);

// Spin coupled to one damped bosonic mode:
// H = omega sz + omega (b^dag b + 1/2) + sqrt(gamma) sx (b + b^dag)/sqrt(2), L = sqrt(eta) b.
struct PseudomodeModel {
    double omega = 1.0;
    double eta = 5.5;
    double gamma = 0.1;
    int fock_cutoff = 4;
    void validate() const;
};

struct PseudomodeRun {
    Trajectory trajectory;  // system-reduced; observables "sz", "trace"
    int fock_cutoff = 0;    // certified cutoff (doubling it changes <sz> by less than the tolerance)
    double cutoff_change = 0.0; // sup |<sz>_N - <sz>_2N| at the certified cutoff
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0; // over the full system-mode states at the recorded times
};

struct PseudomodeOptions {
    ode::Options ode{};
    bool auto_cutoff = true;
    double cutoff_tolerance = 1e-8;
    int max_cutoff = 256;
};

// Starts from rho0_sys (x) |0><0|. With auto_cutoff the Fock cutoff is doubled from pm.fock_cutoff
// until <sz> changes by less than cutoff_tolerance; TruncationError beyond max_cutoff.
PseudomodeRun propagate_pseudomode(const PseudomodeModel& pm, const Op& rho0_sys, const std::vector<double>& times,
                                   const PseudomodeOptions& opt = {});

// Single-mode Lindblad propagation at a fixed cutoff (no convergence loop).
PseudomodeRun propagate_pseudomode_fixed(const PseudomodeModel& pm, const Op& rho0_sys,
                                         const std::vector<double>& times, const ode::Options& opt = {});

// Lindblad right-hand side of the pseudomode model on column-stacked full states.
ode::Rhs pseudomode_rhs(const PseudomodeModel& pm);

struct BenchmarkOptions {
    int samples = 201; // time-grid points on [0, t_o]
    QuadConfig quad{};
    ode::Options ode{};
    PseudomodeOptions pseudomode{};
    Execution exec = Execution::parallel;
};

struct BenchmarkResult {
    double gamma = 0.0, eta = 0.0, omega = 0.0;
    int m = 1, n = 1;
    double gamma_rate = 0.0; // 8 gamma / eta
    double tau = 0.0;        // 2 / eta
    double t_o = 0.0;        // 10 / gamma
    Trajectory mqme;
    PseudomodeRun exact;
    std::vector<double> delta_sz;
    double delta_at_t_o = 0.0;
    double normalized = 0.0; // delta_at_t_o / (gamma_rate t_o)
};

// Runs both propagators from |up><up| (x) |0><0| on a uniform grid up to t_o = 10/gamma
// (10/omega when gamma = 0) and compares <sz>.
BenchmarkResult benchmark_error(double gamma, double eta, double omega, int m, int n,
                                const BenchmarkOptions& opt = {});

} // namespace mqme
