// bounds.cpp — bound formulas and sweeps

#include "mqme/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <omp.h>

#include "mqme/bath.hpp"
#include "mqme/combinatorics.hpp"
#include "mqme/errors.hpp"
#include "mqme/io.hpp"

namespace mqme::bounds {

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

// Coefficients of (sum_q a_q x^q)^k up to degree `deg`; all terms non-negative.
std::vector<double> poly_power(const std::vector<double>& a, int k, int deg) {
    std::vector<double> p(deg + 1, 0.0);
    p[0] = 1.0;
    for (int r = 0; r < k; ++r) {
        std::vector<double> q(deg + 1, 0.0);
        for (int i = 0; i <= deg; ++i) {
            if (p[i] == 0.0) continue;
            for (int j = 0; i + j <= deg && j < static_cast<int>(a.size()); ++j) q[i + j] += p[i] * a[j];
        }
        p.swap(q);
    }
    return p;
}

std::vector<double> scaled_moments(double gamma_rate, const MomentSequence& mu, int highest) {
    mu.require(highest);
    std::vector<double> a(std::max(highest, 0) + 1);
    for (int i = 0; i <= highest; ++i) a[i] = gamma_rate * mu[i];
    return a;
}

// Sum over q in W_len^total of prod_l C(l + offset - S_{<l}, q_l) * w[q_l], depth-first with
// pruning of zero binomials (C(a, b) = 0 when b > a or a < 0).
double binomial_weighted_sum(int len, int total, int offset, const std::vector<double>& w) {
    if (len == 0) return total == 0 ? 1.0 : 0.0;
    std::function<double(int, int, int)> rec = [&](int l, int prefix, int remaining) -> double {
        const int a = l + offset - prefix;
        if (a < 0) return 0.0;
        if (l == len) return comb::binomial_f(a, remaining) * w[remaining];
        double s = 0.0;
        for (int q = 0; q <= std::min(a, remaining); ++q) {
            const double f = comb::binomial_f(a, q) * w[q];
            if (f == 0.0) continue;
            s += f * rec(l + 1, prefix + q, remaining - q);
        }
        return s;
    };
    return rec(1, 0, total);
}

} // namespace

MomentSequence::MomentSequence(std::vector<double> values, MomentSource source)
    : values_(std::move(values)), source_(source) {
    if (values_.empty()) throw DomainError("moment sequence needs mu_0");
    if (std::abs(values_[0] - 1.0) > 1e-12) throw DomainError("moment sequence must have mu_0 = 1");
    for (double v : values_)
        if (!(v >= 0.0)) throw DomainError("moments must be non-negative");
    values_[0] = 1.0;
}

MomentSequence MomentSequence::exponential(double tau, int highest) {
    if (!(tau >= 0.0)) throw DomainError("tau must be >= 0");
    std::vector<double> v(std::max(highest, 0) + 1);
    v[0] = 1.0;
    for (int i = 1; i <= highest; ++i) v[i] = v[i - 1] * i * tau;
    return MomentSequence(std::move(v), MomentSource::exponential_model);
}

MomentSequence MomentSequence::from_bath(const BathModel& bath, int highest) {
    return MomentSequence(bath.moments(std::max(highest, 0)), MomentSource::from_bath);
}

void MomentSequence::require(int highest_index) const {
    if (highest_index >= static_cast<int>(values_.size()))
        throw InsufficientMomentsError(static_cast<std::size_t>(highest_index), values_.size());
}

double MomentSequence::operator[](int i) const {
    require(i);
    return values_[i];
}

double epsilon_born(int n, double gamma_rate, const MomentSequence& mu) {
    if (n < 0) throw DomainError("epsilon_born needs n >= 0");
    if (n == 0) return gamma_rate;
    const auto a = scaled_moments(gamma_rate, mu, n);
    return gamma_rate * poly_power(a, n, n)[n];
}

double kernel_moment_bound(int n, int j, double gamma_rate, const MomentSequence& mu) {
    if (n < 0 || j < 0) throw DomainError("kernel_moment_bound needs n, j >= 0");
    if (n == 0) return 0.0;
    const int deg = n + j - 1;
    const auto a = scaled_moments(gamma_rate, mu, deg);
    double s = 0.0;
    std::vector<double> p(deg + 1, 0.0);
    p[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        p = [&] {
            std::vector<double> q(deg + 1, 0.0);
            for (int i = 0; i <= deg; ++i)
                for (int t = 0; i + t <= deg; ++t) q[i + t] += p[i] * a[t];
            return q;
        }();
        s += p[k + j - 1];
    }
    return s;
}

double tight_term_estimate(int m, int n) {
    (void)n;
    double count = comb::composition_count_f(m, m + 1);
    for (int k = 0; k <= m; ++k) count += comb::composition_count_f(k, k);
    return count * (m + 1);
}

std::optional<TightParts> xi_bound_tight_parts(int m, int n, double gamma_rate, const MomentSequence& mu,
                                               double term_budget) {
    if (m < 0 || n < 0) throw DomainError("tight bound needs m, n >= 0");
    if (n + m - 1 >= 0) mu.require(n + m - 1);
    mu.require(n);
    if (tight_term_estimate(m, n) > term_budget) return std::nullopt;
    std::vector<double> mk(m + 1);
    for (int j = 0; j <= m; ++j) mk[j] = kernel_moment_bound(n, j, gamma_rate, mu);
    TightParts parts{};
    parts.first_sum = binomial_weighted_sum(m + 1, m, -1, mk);
    parts.epsilon = epsilon_born(n, gamma_rate, mu);
    parts.second_sum = 0.0;
    for (int k = 0; k <= m; ++k) parts.second_sum += binomial_weighted_sum(k, k, 0, mk);
    return parts;
}

std::optional<double> xi_bound_tight(int m, int n, double gamma_rate, const MomentSequence& mu,
                                     double term_budget) {
    const auto p = xi_bound_tight_parts(m, n, gamma_rate, mu, term_budget);
    if (!p) return std::nullopt;
    return p->total();
}

double tau_zero(const MomentSequence& mu, int m, int n) {
    const int top = m + n - 1;
    if (top < 1) return 0.0;
    mu.require(top);
    double t0 = 0.0;
    for (int i = 1; i <= top; ++i) t0 = std::max(t0, std::pow(mu[i] / factorial(i), 1.0 / i));
    return t0;
}

std::optional<double> xi_bound_simple(int m, int n, double gamma_rate, double tau0) {
    if (m < 0 || n < 0) throw DomainError("simple bound needs m, n >= 0");
    const double x = gamma_rate * tau0;
    const double g = 1.0 - 4.0 * (m + n - 1) * x;
    if (!((m + n - 1) * x < 0.25)) return std::nullopt;
    const double tail = factorial(n) * std::pow(4.0 * x, n);
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double fk = factorial(k);
        s += fk * fk * std::pow(x, k) * ((k == m ? 1.0 : 0.0) + tail) / std::pow(g, 2 * k + 1);
    }
    return gamma_rate * s;
}

int m_exp(double gamma_tau) {
    if (!(gamma_tau > 0.0)) throw DomainError("m_exp needs Gamma tau > 0");
    const double r = std::sqrt(gamma_tau);
    return static_cast<int>(std::floor((1.0 + 4.0 * gamma_tau) / (r + 8.0 * gamma_tau)));
}

double xi_bound_exponential(double gamma_tau, double constant) {
    if (!(gamma_tau > 0.0)) throw DomainError("exponential bound needs Gamma tau > 0");
    const double r = std::sqrt(gamma_tau);
    return std::exp(-(2.0 / r) * (1.0 - r - 4.0 * gamma_tau) / (1.0 + 8.0 * r) + constant);
}

double c_relaxed(int n, int q, double gamma_rate, double tau) {
    if (q < 0 || q > n) throw DomainError("c_relaxed needs 0 <= q <= n");
    const double x = gamma_rate * tau;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += factorial(q + k) * std::pow(x, k) * comb::binomial_f(q + 2 * k, q + k);
    return gamma_rate * std::pow(tau, q) * s;
}

double xi_bound_relaxed(int m, int n, double gamma_rate, double tau) {
    if (m < 0 || n < 0 || m > n) throw DomainError("relaxed bound needs 0 <= m <= n");
    std::vector<double> c(m + 1);
    for (int q = 0; q <= m; ++q) c[q] = c_relaxed(n, q, gamma_rate, tau);
    auto max_product = [&](int total, int parts) {
        if (parts == 0) return 1.0;
        double best = 0.0;
        for (auto p : comb::partitions_at_most(total, parts)) {
            double prod = 1.0;
            for (int q : p) prod *= c[q];
            best = std::max(best, prod);
        }
        return best;
    };
    const double first = factorial(m) * max_product(m, m + 1);
    double ksum = 0.0;
    for (int k = 0; k <= m; ++k) ksum += factorial(k) * max_product(k, k);
    const double x = gamma_rate * tau;
    const double second = gamma_rate * comb::composition_count_f(n, n) * factorial(n) * std::pow(x, n) * ksum;
    return first + second;
}

std::string flags_string(unsigned flags) {
    static const std::pair<unsigned, const char*> names[] = {
        {tight_computed, "tight-computed"},
        {tight_skipped_too_large, "tight-skipped-too-large"},
        {simple_precondition_failed, "simple-precondition-failed"},
        {relaxed_computed, "relaxed-computed"},
    };
    std::string out;
    for (const auto& [bit, name] : names) {
        if (!(flags & bit)) continue;
        if (!out.empty()) out += '|';
        out += name;
    }
    return out;
}

BoundReport bound_point(double gamma_tau, const Order& order, const SweepOptions& opt) {
    if (!(gamma_tau > 0.0)) throw DomainError("sweep grid values must be > 0");
    BoundReport r;
    r.gamma_tau = gamma_tau;
    r.gamma_rate = 1.0;
    r.tau = gamma_tau;
    r.m_exp = m_exp(gamma_tau);
    r.m = order.use_m_exp ? r.m_exp : order.m;
    r.n = order.use_m_exp ? r.m_exp : order.n;
    const auto mu = MomentSequence::exponential(gamma_tau, r.m + r.n + 1);
    r.epsilon_born = epsilon_born(r.n, 1.0, mu);
    r.tight = xi_bound_tight(r.m, r.n, 1.0, mu, opt.term_budget);
    r.flags |= r.tight ? tight_computed : tight_skipped_too_large;
    // mu_i = i! tau^i gives tau_0 = tau (tau_zero has an empty index range when m + n < 2)
    r.simple = xi_bound_simple(r.m, r.n, 1.0, gamma_tau);
    if (!r.simple) r.flags |= simple_precondition_failed;
    if (r.m <= r.n) {
        r.relaxed = xi_bound_relaxed(r.m, r.n, 1.0, gamma_tau);
        r.flags |= relaxed_computed;
    }
    r.exponential = xi_bound_exponential(gamma_tau, opt.exponential_constant);
    return r;
}

namespace {
void check_grid(const std::vector<double>& grid) {
    for (double g : grid)
        if (!(g > 0.0)) throw DomainError("sweep grid values must be > 0");
}
} // namespace

std::vector<BoundReport> bound_sweep_serial(const std::vector<double>& grid, const std::vector<Order>& orders,
                                            const SweepOptions& opt) {
    check_grid(grid);
    std::vector<BoundReport> out;
    out.reserve(grid.size() * orders.size());
    for (double g : grid)
        for (const auto& o : orders) out.push_back(bound_point(g, o, opt));
    return out;
}

std::vector<BoundReport> bound_sweep(const std::vector<double>& grid, const std::vector<Order>& orders,
                                     const SweepOptions& opt) {
    check_grid(grid);
    const long items = static_cast<long>(grid.size() * orders.size());
    std::vector<BoundReport> out(items);
    const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < items; ++i) {
        try {
            out[i] = bound_point(grid[i / orders.size()], orders[i % orders.size()], opt);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

std::string sweep_csv(const std::vector<BoundReport>& reports) {
    std::string s = "gamma_tau,m,n,tight,simple,relaxed,exponential,m_exp,flags\n";
    auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
    for (const auto& r : reports) {
        s += io::format_double(r.gamma_tau);
        s += ',' + std::to_string(r.m) + ',' + std::to_string(r.n) + ',';
        s += opt(r.tight) + ',' + opt(r.simple) + ',' + opt(r.relaxed) + ',' + opt(r.exponential) + ',';
        s += std::to_string(r.m_exp) + ',' + flags_string(r.flags) + '\n';
    }
    return s;
}

} // namespace mqme::bounds
