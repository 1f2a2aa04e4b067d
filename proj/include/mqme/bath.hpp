// bath.hpp — Gaussian bath correlations as sums of complex exponentials
//
// J_ab(t) = sum_modes c e^{-nu t} for t >= 0; J(-t) = J(t)^dagger by stationarity.
// Derived scales: interaction rate Gamma, normalized moments mu_i, correlation time tau.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mqme {

using cplx = std::complex<double>;

struct ExpMode {
    cplx amplitude;
    cplx decay; // Re(decay) > 0
};

struct BathScales {
    double gamma_rate = 0.0;
    std::vector<double> moments; // mu_0 = 1, mu_1, ...
    double corr_time = 0.0;
};

class BathModel {
public:
    using Channels = std::vector<std::vector<std::vector<ExpMode>>>; // [alpha][beta] -> modes

    // rate_normalization multiplies the integral in Gamma = 4 gamma * norm * int ||J||_{1,1}.
    // It is 1 for general baths; lorentzian_bath sets it to 2 so that Gamma = 8 gamma / eta.
    // Moments up to index `cached_moments` are computed once at construction.
    BathModel(Channels channels, double gamma, double rate_normalization = 1.0, int cached_moments = 65);

    int channel_count() const { return static_cast<int>(channels_.size()); }
    const std::vector<ExpMode>& modes(int alpha, int beta) const { return channels_[alpha][beta]; }
    const Channels& channels() const { return channels_; }
    double gamma() const { return gamma_; }
    double rate_normalization() const { return rate_norm_; }

    // J(t) for t >= 0.
    Eigen::MatrixXcd correlation(double t) const;
    // ||J(t)||_{1,1}: sum of the entry moduli.
    double correlation_norm(double t) const;

    double gamma_rate() const { return gamma_rate_; }
    double moment(int i) const;
    double log_moment(int i) const;
    std::vector<double> moments(int highest) const;
    double correlation_time() const { return tau_; }
    BathScales scales() const { return {gamma_rate_, moments_, tau_}; }

    // True when every entry is a single mode and all modes share one Re(decay):
    // then mu_i = i!/kappa^i exactly and tau = 1/kappa.
    bool single_rate() const { return single_rate_; }
    // True when every entry holds at most one mode (moments in closed form).
    bool closed_form() const { return closed_form_; }

    // The same bath in time units 1/s: decays divided by s and gamma by s^2, so mu_i -> s^i mu_i,
    // Gamma -> Gamma / s, tau -> s tau and Gamma tau is unchanged.
    BathModel time_rescaled(double s) const;

private:
    double log_moment_uncached(int i) const;
    double integral_norm() const; // int_0^inf ||J||_{1,1}
    double find_tau() const;

    Channels channels_;
    double gamma_;
    double rate_norm_;
    bool closed_form_ = true;
    bool single_rate_ = true;
    double kappa_ = 0.0;
    double norm_integral_ = 0.0;
    double gamma_rate_ = 0.0;
    std::vector<double> moments_;
    std::vector<double> log_moments_;
    double tau_ = 0.0;
};

// Single-channel bath J(t) = 1/2 e^{-(i omega + eta/2) t}: Gamma = 8 gamma / eta, tau = 2 / eta.
BathModel lorentzian_bath(double gamma, double omega, double eta);

// Index cap ceil(2 / sqrt(Gamma tau)) of the correlation-time predicate.
int tau_index_cap(double gamma_tau);

// Whether mu_i < i! tau^i (times 1 + slack) for i = 1 .. tau_index_cap(Gamma tau).
bool tau_predicate(const BathModel& bath, double tau, double slack = 0.0);

} // namespace mqme
