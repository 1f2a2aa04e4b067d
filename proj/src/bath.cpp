// bath.cpp — bath correlation scales

#include "mqme/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mqme/errors.hpp"
#include "mqme/quadrature.hpp"

namespace mqme {

namespace {

constexpr double kQuadRelTol = 1e-12;

double log_sum_exp(const std::vector<double>& xs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : xs) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - mx);
    return mx + std::log(s);
}

} // namespace

BathModel::BathModel(Channels channels, double gamma, double rate_normalization, int cached_moments)
    : channels_(std::move(channels)), gamma_(gamma), rate_norm_(rate_normalization) {
    if (!(gamma_ >= 0.0)) throw DomainError("bath coupling gamma must be >= 0");
    if (!(rate_norm_ > 0.0)) throw DomainError("rate normalization must be > 0");
    const int d = channel_count();
    if (d == 0) throw DomainError("bath needs at least one channel");
    bool any_mode = false;
    kappa_ = -1.0;
    for (const auto& row : channels_) {
        if (static_cast<int>(row.size()) != d) throw DomainError("bath channel array must be square");
        for (const auto& entry : row) {
            if (entry.size() > 1) closed_form_ = false;
            for (const auto& m : entry) {
                if (!(m.decay.real() > 0.0)) throw DomainError("bath mode decay must have positive real part");
                if (!std::isfinite(std::abs(m.amplitude))) throw DomainError("bath mode amplitude not finite");
                if (m.amplitude == 0.0) continue;
                any_mode = true;
                if (kappa_ < 0.0) kappa_ = m.decay.real();
                else if (m.decay.real() != kappa_) single_rate_ = false;
            }
        }
    }
    single_rate_ = single_rate_ && closed_form_ && any_mode;
    if (!any_mode) throw DomainError("bath has no non-zero correlation mode");

    // stationarity: J(0) must be Hermitian for J(-t) = J(t)^dagger to be continuous at 0
    const Eigen::MatrixXcd j0 = correlation(0.0);
    if ((j0 - j0.adjoint()).norm() > 1e-12 * std::max(1.0, j0.norm()))
        throw DomainError("bath correlation J(0) is not Hermitian; J_ab(-t) = conj(J_ba(t)) is violated");

    norm_integral_ = integral_norm();
    gamma_rate_ = 4.0 * gamma_ * rate_norm_ * norm_integral_;

    log_moments_.resize(std::max(cached_moments, 1) + 1);
    for (std::size_t i = 0; i < log_moments_.size(); ++i) log_moments_[i] = log_moment_uncached(static_cast<int>(i));
    tau_ = find_tau();
    moments_.resize(log_moments_.size());
    for (std::size_t i = 0; i < moments_.size(); ++i) moments_[i] = std::exp(log_moments_[i]);
    moments_[0] = 1.0;
}

Eigen::MatrixXcd BathModel::correlation(double t) const {
    const int d = channel_count();
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (const auto& m : channels_[a][b]) j(a, b) += m.amplitude * std::exp(-m.decay * t);
    return j;
}

double BathModel::correlation_norm(double t) const {
    double s = 0.0;
    for (const auto& row : channels_)
        for (const auto& entry : row) {
            cplx v = 0.0;
            for (const auto& m : entry) v += m.amplitude * std::exp(-m.decay * t);
            s += std::abs(v);
        }
    return s;
}

double BathModel::integral_norm() const {
    if (closed_form_) {
        double s = 0.0;
        for (const auto& row : channels_)
            for (const auto& entry : row)
                for (const auto& m : entry) s += std::abs(m.amplitude) / m.decay.real();
        return s;
    }
    double kmin = std::numeric_limits<double>::infinity();
    for (const auto& row : channels_)
        for (const auto& entry : row)
            for (const auto& m : entry) kmin = std::min(kmin, m.decay.real());
    return quad::integrate_half_line([this](double t) { return correlation_norm(t); }, 1.0 / kmin, kQuadRelTol);
}

double BathModel::log_moment_uncached(int i) const {
    if (i < 0) throw DomainError("moment index must be >= 0");
    if (i == 0) return 0.0;
    if (closed_form_) {
        // mu_i = sum_e w_e i!/kappa_e^i with w_e = (|c_e|/kappa_e) / sum
        std::vector<double> terms;
        const double lf = std::lgamma(i + 1.0);
        for (const auto& row : channels_)
            for (const auto& entry : row)
                for (const auto& m : entry) {
                    if (m.amplitude == 0.0) continue;
                    const double k = m.decay.real();
                    terms.push_back(std::log(std::abs(m.amplitude) / k / norm_integral_) + lf - i * std::log(k));
                }
        return log_sum_exp(terms);
    }
    double kmin = std::numeric_limits<double>::infinity();
    for (const auto& row : channels_)
        for (const auto& entry : row)
            for (const auto& m : entry) kmin = std::min(kmin, m.decay.real());
    // integrate ||J|| (t/t*)^i around the peak t* = i/kmin to stay in range
    const double tstar = i / kmin;
    const double v = quad::integrate_half_line(
        [&](double t) {
            if (t <= 0.0) return 0.0;
            return correlation_norm(t) * std::exp(i * std::log(t / tstar));
        },
        1.0 / kmin, kQuadRelTol);
    return i * std::log(tstar) + std::log(v / norm_integral_);
}

double BathModel::log_moment(int i) const {
    if (i < 0) throw DomainError("moment index must be >= 0");
    if (i < static_cast<int>(log_moments_.size())) return log_moments_[i];
    return log_moment_uncached(i);
}

double BathModel::moment(int i) const {
    if (i == 0) return 1.0;
    return std::exp(log_moment(i));
}

std::vector<double> BathModel::moments(int highest) const {
    std::vector<double> out(highest + 1);
    for (int i = 0; i <= highest; ++i) out[i] = moment(i);
    return out;
}

int tau_index_cap(double gamma_tau) {
    if (!(gamma_tau > 0.0)) throw DomainError("Gamma tau must be > 0");
    const double c = std::ceil(2.0 / std::sqrt(gamma_tau));
    if (c > 1e7) throw DomainError("Gamma tau too small: correlation-time index range is unbounded");
    return static_cast<int>(c);
}

bool tau_predicate(const BathModel& bath, double tau, double slack) {
    const int cap = tau_index_cap(bath.gamma_rate() * tau);
    const double lt = std::log(tau), ls = std::log1p(slack);
    for (int i = 1; i <= cap; ++i)
        if (!(bath.log_moment(i) < std::lgamma(i + 1.0) + i * lt + ls)) return false;
    return true;
}

double BathModel::find_tau() const {
    if (single_rate_) return 1.0 / kappa_;
    if (!(gamma_rate_ > 0.0)) throw DomainError("correlation time needs Gamma > 0 for a multi-rate bath");
    const double mu1 = std::exp(log_moments_[1]);
    double lo = mu1, hi = 1e6 * mu1;
    if (!tau_predicate(*this, hi)) throw ToleranceError("correlation time: no tau <= 1e6 mu_1 satisfies the moment predicate");
    for (int it = 0; it < 200 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tau_predicate(*this, mid)) hi = mid;
        else lo = mid;
    }
    if (hi - lo > 1e-6 * hi) throw ToleranceError("correlation time bisection did not converge");
    return hi;
}

BathModel BathModel::time_rescaled(double s) const {
    if (!(s > 0.0)) throw DomainError("time rescaling factor must be > 0");
    Channels c = channels_;
    for (auto& row : c)
        for (auto& entry : row)
            for (auto& m : entry) m.decay /= s;
    return BathModel(std::move(c), gamma_ / (s * s), rate_norm_, static_cast<int>(log_moments_.size()) - 1);
}

BathModel lorentzian_bath(double gamma, double omega, double eta) {
    if (!(eta > 0.0)) throw DomainError("Lorentzian bath needs eta > 0");
    if (!(gamma >= 0.0)) throw DomainError("Lorentzian bath needs gamma >= 0");
    BathModel::Channels ch{{{ExpMode{0.5, cplx(eta / 2.0, omega)}}}};
    return BathModel(std::move(ch), gamma, 2.0);
}

} // namespace mqme
