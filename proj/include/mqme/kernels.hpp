// kernels.hpp — memory kernels and order-(m, n) dissipators for exponential baths
//
// Superoperators act on column-stacked operators in the interaction picture of H_S.
// The bath enters through S_ab(s, u) = J_ab(u) X_b(s)^L - conj(J_ab(u)) X_b(s)^R and the
// commutator C_a(t) = X_a(t)^L - X_a(t)^R; the Born kernel is K_1(t, s) = -gamma sum C_a(t) S_ab(s, t-s).

#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "mqme/bath.hpp"
#include "mqme/superop.hpp"

namespace mqme {

struct QuadConfig {
    double rel_tol = 1e-8;
    int node_count = 32;               // Gauss-Legendre nodes per panel
    double memory_cutoff_factor = 2.0; // u_max = c tau ln(1/rel_tol)
    double panel_width_factor = 4.0;   // panel width in units of tau
    int table_points_per_window = 400; // inner tables: at least this many points per u_max
    double table_step_factor = 0.05;   // and at most this many tau between points
    int local_nodes = 6;               // rule for sub-step integrals between table points

    void validate() const;
};

enum class Execution { serial, parallel };

class DissipatorTable;

class KernelEvaluator {
public:
    KernelEvaluator(SystemModel sys, BathModel bath, double t0 = 0.0, QuadConfig quad = {});
    ~KernelEvaluator();
    KernelEvaluator(const KernelEvaluator&) = delete;
    KernelEvaluator& operator=(const KernelEvaluator&) = delete;

    const SystemModel& system() const { return sys_; }
    const BathModel& bath() const { return bath_; }
    double t0() const { return t0_; }
    const QuadConfig& quad() const { return quad_; }

    double memory_cutoff() const { return u_max_; }    // u_max
    double saturation_time() const { return e_sat_; } // beyond t0 + e_sat the frame-rotated generator is constant
    double grid_step() const { return h_; }

    // K_1(t, s) for t0 <= s <= t.
    SuperOp kernel_k1(double t, double s) const;

    // Delta_11(t) = int_{t0}^t K_1(t, s) ds by panel Gauss-Legendre in u = t - s, checked by node doubling.
    SuperOp dissipator_first(double t) const;

    // Delta_mn(t) for m, n in {1, 2}.
    SuperOp dissipator(int m, int n, double t) const;

    // Generator table on the grid k * grid_step() for the propagators.
    std::shared_ptr<const DissipatorTable> table(int m, int n, Execution exec = Execution::parallel) const;

    struct Engine; // inner-integral tables, defined in kernels.cpp

private:
    SuperOp dissipator_first_once(double t, int nodes, double width) const;
    Engine& engine(int n) const;

    SystemModel sys_;
    BathModel bath_;
    double t0_;
    QuadConfig quad_;
    double tau_;
    double u_max_;
    double e_sat_;
    double h_;
    mutable std::mutex mu_;
    mutable std::unique_ptr<Engine> engine_;
};

// Frame-rotated generator L(e) = U(e)^-1 Delta(t0 + e) U(e) on a uniform grid, with
// U(x) A = e^{iHx} A e^{-iHx}; the interaction-picture generator is Delta(t) = U(t) L(t - t0) U(t)^-1.
class DissipatorTable {
public:
    DissipatorTable(const SystemModel& sys, int m, int n, double t0, double step, std::vector<SuperOp> frames);

    int m() const { return m_; }
    int n() const { return n_; }
    double step() const { return step_; }
    double saturation_time() const { return step_ * (static_cast<double>(frames_.size()) - 1); }
    const std::vector<SuperOp>& frames() const { return frames_; }

    // L(e), cubic interpolation for e inside the grid, L(e_sat) beyond it.
    SuperOp frame(double e) const;
    // Delta(t) in the interaction picture.
    SuperOp generator(double t) const;

private:
    SystemModel sys_;
    int m_, n_;
    double t0_, step_;
    std::vector<SuperOp> frames_;
};

// Four-point Lagrange interpolation of frames sampled at k * step, clamped to the last frame.
SuperOp interpolate_frames(const std::vector<SuperOp>& frames, double step, double e);

// Textbook Bloch-Redfield dissipator from the Bohr-frequency decomposition X(s) = sum_w e^{iws} X_w and
// truncated half-Fourier transforms of J; used to cross-check Delta_11.
SuperOp redfield_dissipator(const SystemModel& sys, const BathModel& bath, double t0, double t);

} // namespace mqme
