// bounds.hpp — residual-norm bounds for order-(m, n) Markovian master equations
//
// All functions take the interaction rate Gamma and moments mu_i (or a time scale tau).
// Every bound is homogeneous of degree one in Gamma once tau is measured in units of
// 1/Gamma, so normalized values (bound / Gamma) follow from Gamma = 1, tau = Gamma tau.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mqme {
class BathModel;
}

namespace mqme::bounds {

enum class MomentSource { from_bath, exponential_model, user_supplied };

class MomentSequence {
public:
    MomentSequence(std::vector<double> values, MomentSource source);

    // mu_i = i! tau^i for i = 0 .. highest.
    static MomentSequence exponential(double tau, int highest);
    static MomentSequence from_bath(const BathModel& bath, int highest);

    double operator[](int i) const; // throws InsufficientMomentsError past the end
    void require(int highest_index) const;
    int highest() const { return static_cast<int>(values_.size()) - 1; }
    const std::vector<double>& values() const { return values_; }
    MomentSource source() const { return source_; }

private:
    std::vector<double> values_;
    MomentSource source_;
};

// Born residual eps_n = Gamma sum_{W_n^n} prod_i (Gamma mu_{q_i}); eps_0 = Gamma.
double epsilon_born(int n, double gamma_rate, const MomentSequence& mu);

// Kernel moment bound M_n[j] = sum_{k=1..n} sum_{W_k^{k+j-1}} prod_i (Gamma mu_{q_i}); M_0[j] = 0.
double kernel_moment_bound(int n, int j, double gamma_rate, const MomentSequence& mu);

// Number of products the tight bound enumerates: |W_{m+1}^m| + sum_{k<=m} |W_k^k|, times m+1 factors.
double tight_term_estimate(int m, int n);

inline constexpr double kDefaultTermBudget = 1e8;

// Tightest bound on ||xi_mn||_tr. Empty when tight_term_estimate(m, n) exceeds the budget.
std::optional<double> xi_bound_tight(int m, int n, double gamma_rate, const MomentSequence& mu,
                                     double term_budget = kDefaultTermBudget);

// The two pieces of the tight bound: the nested-kernel sum and eps_n times the k-sum.
struct TightParts {
    double first_sum;
    double epsilon;
    double second_sum;
    double total() const { return first_sum + epsilon * second_sum; }
};
std::optional<TightParts> xi_bound_tight_parts(int m, int n, double gamma_rate, const MomentSequence& mu,
                                               double term_budget = kDefaultTermBudget);

// tau_0 = max_{i = 1 .. m+n-1} (mu_i / i!)^{1/i}; 0 when the range is empty.
double tau_zero(const MomentSequence& mu, int m, int n);

// Simple bound; empty unless (m + n - 1) Gamma tau_0 < 1/4.
std::optional<double> xi_bound_simple(int m, int n, double gamma_rate, double tau0);

// m_exp = floor((1 + 4x) / (sqrt(x) + 8x)), x = Gamma tau.
int m_exp(double gamma_tau);

inline constexpr double kExponentialConstant = 2.13;

// Exponential bound on ||xi||/Gamma at order m_exp.
double xi_bound_exponential(double gamma_tau, double constant = kExponentialConstant);

// c_n[q] = Gamma tau^q sum_{k=0}^{n-1} (q+k)! (Gamma tau)^k C(q+2k, q+k), valid for q <= n.
double c_relaxed(int n, int q, double gamma_rate, double tau);

// Relaxed bound for m <= n with exponential-model moments, maximising over partitions.
double xi_bound_relaxed(int m, int n, double gamma_rate, double tau);

enum Flag : unsigned {
    tight_computed = 1u << 0,
    tight_skipped_too_large = 1u << 1,
    simple_precondition_failed = 1u << 2,
    relaxed_computed = 1u << 3,
};
std::string flags_string(unsigned flags); // '|'-joined names, fixed order

struct BoundReport {
    double gamma_tau = 0.0;
    int m = 0;
    int n = 0;
    double gamma_rate = 1.0; // reports from bound_sweep are normalized: Gamma = 1
    double tau = 0.0;
    double epsilon_born = 0.0;
    std::optional<double> tight;
    std::optional<double> simple;
    std::optional<double> relaxed;
    std::optional<double> exponential;
    int m_exp = 0;
    unsigned flags = 0;
};

// An order (m, n), or the symbolic order (m_exp, m_exp) resolved per grid point.
struct Order {
    int m = 1;
    int n = 1;
    bool use_m_exp = false;
    static Order fixed(int m, int n) { return {m, n, false}; }
    static Order exp_order() { return {0, 0, true}; }
};

struct SweepOptions {
    double term_budget = kDefaultTermBudget;
    double exponential_constant = kExponentialConstant;
    int threads = 0; // 0: OpenMP default
};

// One report per (grid point, order), grid-major, with mu_i = i! tau^i and Gamma = 1.
BoundReport bound_point(double gamma_tau, const Order& order, const SweepOptions& opt = {});
std::vector<BoundReport> bound_sweep(const std::vector<double>& grid, const std::vector<Order>& orders,
                                     const SweepOptions& opt = {});
// Single-threaded reference with identical output.
std::vector<BoundReport> bound_sweep_serial(const std::vector<double>& grid, const std::vector<Order>& orders,
                                            const SweepOptions& opt = {});

// CSV with header gamma_tau,m,n,tight,simple,relaxed,exponential,m_exp,flags.
std::string sweep_csv(const std::vector<BoundReport>& reports);

} // namespace mqme::bounds
