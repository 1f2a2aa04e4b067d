// oracles.hpp — slow, literal reference implementations used to cross-check the fast paths

#pragma once

#include <vector>

#include "mqme/bath.hpp"
#include "mqme/superop.hpp"

namespace mqme::oracle {

// Literal enumeration of the defining weak-composition sums; moments are plain values mu_0 .. mu_K.
double epsilon_born(int n, double gamma_rate, const std::vector<double>& mu);
// M_n[j] = sum_{k=1..n} sum_{W_k^{k+j-1}} prod (Gamma mu_q).
double kernel_moment_bound(int n, int j, double gamma_rate, const std::vector<double>& mu);
// The same quantity in the shifted form sum_{k=0..n-1} sum_{W_{k+1}^{k+j}} prod (Gamma mu_q).
double kernel_moment_bound_shifted(int n, int j, double gamma_rate, const std::vector<double>& mu);
// Tight bound by enumerating every composition, including those with vanishing binomials.
double xi_bound_tight(int m, int n, double gamma_rate, const std::vector<double>& mu);

// Dense nested Gauss-Legendre evaluation of Delta_12 and Delta_22 at t0 = 0 in the original basis,
// without exponential splitting or tables. The cumulative integral of Delta_12 that enters Delta_22
// is represented by a Chebyshev interpolant on [0, max(times)].
struct DenseDissipators {
    std::vector<SuperOp> delta11, delta12, delta22;
};
DenseDissipators dense_dissipators(const SystemModel& sys, const BathModel& bath, const std::vector<double>& times,
                                   int nodes = 20, int chebyshev_points = 24);

} // namespace mqme::oracle
