// test_bath.cpp — interaction rate, moments, correlation time and covariance under rescaling

#include <doctest.h>

#include <cmath>
#include <complex>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "mqme/bath.hpp"
#include "mqme/errors.hpp"

using namespace mqme;
using namespace std::complex_literals;

namespace {

// Two overlapping modes with different rates in one channel: moments need quadrature.
BathModel two_rate_bath(double gamma = 0.05) {
    BathModel::Channels ch{{{{0.4 + 0.1i, 1.0 + 0.7i}, {0.25 - 0.1i, 0.3 + 2.0i}}}};
    return BathModel(ch, gamma);
}

// Two coupled channels with distinct single modes per entry (closed form).
BathModel coupled_bath() {
    BathModel::Channels ch(2, std::vector<std::vector<ExpMode>>(2));
    ch[0][0] = {{0.5, 1.0 + 1.0i}};
    ch[1][1] = {{0.3, 0.5 - 0.2i}};
    ch[0][1] = {{0.1 + 0.05i, 0.8 + 0.0i}};
    ch[1][0] = {{0.1 - 0.05i, 0.8 + 0.0i}};
    return BathModel(ch, 0.02);
}

double quad_norm_moment(const BathModel& b, int i) {
    boost::math::quadrature::exp_sinh<double> q;
    auto num = q.integrate(
        [&](double t) {
            const double v = b.correlation_norm(t);
            return v == 0.0 ? 0.0 : v * std::pow(t, i);
        },
        1e-14);
    auto den = q.integrate([&](double t) { return b.correlation_norm(t); }, 1e-14);
    return num / den;
}

} // namespace

TEST_CASE("Lorentzian bath scales") {
    const BathModel b = lorentzian_bath(0.1, 1.0, 5.5);
    CHECK(b.gamma_rate() == doctest::Approx(0.8 / 5.5).epsilon(1e-12));
    CHECK(b.gamma_rate() == doctest::Approx(0.145455).epsilon(1e-5));
    CHECK(b.moment(0) == 1.0);
    CHECK(b.moment(1) == doctest::Approx(2.0 / 5.5).epsilon(1e-12));
    CHECK(b.correlation_time() == doctest::Approx(0.363636).epsilon(1e-5));
    CHECK(b.single_rate());

    const BathModel b2 = lorentzian_bath(0.1, 1.0, 2.0);
    CHECK(b2.moment(3) == doctest::Approx(6.0).epsilon(1e-12));
    const auto j1 = b2.correlation(1.0)(0, 0);
    CHECK(std::abs(j1 - 0.5 * std::exp(-1.0) * std::exp(-1.0i)) <= 1e-15);
    CHECK(std::abs(b2.correlation(0.0)(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(b2.correlation(200.0)(0, 0)) <= 1e-40);

    const BathModel small = lorentzian_bath(0.01, 1.0, 5.5);
    CHECK(small.gamma_rate() * small.correlation_time() == doctest::Approx(0.16 / (5.5 * 5.5)).epsilon(1e-12));
    CHECK(small.gamma_rate() * small.correlation_time() == doctest::Approx(0.00528926).epsilon(1e-6));
}

TEST_CASE("zero coupling and invalid arguments") {
    const BathModel b = lorentzian_bath(0.0, 1.0, 1.0);
    CHECK(b.gamma_rate() == 0.0);
    CHECK(b.correlation_time() == doctest::Approx(2.0));
    CHECK_THROWS_AS(lorentzian_bath(0.1, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(lorentzian_bath(-0.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(BathModel({{{{1.0, -1.0 + 0.0i}}}}, 1.0), DomainError);
    CHECK_THROWS_AS(BathModel({{{{1.0i, 1.0 + 0.0i}}}}, 1.0), DomainError); // J(0) not Hermitian
    CHECK_THROWS_AS(b.moment(-1), DomainError);
}

TEST_CASE("two identical single-mode channels give Gamma = 4") {
    BathModel::Channels ch(2, std::vector<std::vector<ExpMode>>(2));
    ch[0][0] = {{0.5, 1.0 + 0.0i}};
    ch[1][1] = {{0.5, 1.0 + 0.0i}};
    const BathModel b(ch, 1.0);
    CHECK(b.gamma_rate() == doctest::Approx(4.0).epsilon(1e-12));
    boost::math::quadrature::exp_sinh<double> q;
    CHECK(4.0 * q.integrate([&](double t) { return b.correlation_norm(t); }, 1e-14) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(b.correlation_time() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("moments agree with an independent quadrature") {
    for (const BathModel& b : {two_rate_bath(), coupled_bath(), lorentzian_bath(0.2, 1.3, 0.7)}) {
        for (int i = 0; i <= 12; ++i) {
            const double ref = quad_norm_moment(b, i);
            CHECK(std::abs(b.moment(i) - ref) <= 1e-8 * ref);
        }
    }
    const BathModel b = two_rate_bath();
    CHECK_FALSE(b.closed_form());
    boost::math::quadrature::exp_sinh<double> q;
    const double integral = q.integrate([&](double t) { return b.correlation_norm(t); }, 1e-14);
    CHECK(b.gamma_rate() == doctest::Approx(4.0 * 0.05 * integral).epsilon(1e-9));
}

TEST_CASE("correlation time satisfies its predicate and is minimal") {
    for (const BathModel& b : {two_rate_bath(), coupled_bath(), two_rate_bath(2.0)}) {
        const double tau = b.correlation_time();
        CHECK(tau >= b.moment(1) * (1 - 1e-12));
        CHECK(tau_predicate(b, tau, 1e-12));
        CHECK_FALSE(tau_predicate(b, 0.99 * tau));
    }
    CHECK(tau_index_cap(1.0) == 2);
    CHECK(tau_index_cap(0.04) == 10);
    CHECK_THROWS_AS(tau_index_cap(0.0), DomainError);
}

TEST_CASE("time rescaling covariance") {
    for (const BathModel& b : {two_rate_bath(), coupled_bath(), lorentzian_bath(0.1, 1.0, 5.5)}) {
        const double s = 2.0;
        const BathModel r = b.time_rescaled(s);
        for (int i = 0; i <= 8; ++i) CHECK(r.moment(i) == doctest::Approx(std::pow(s, i) * b.moment(i)).epsilon(1e-8));
        CHECK(r.gamma_rate() == doctest::Approx(b.gamma_rate() / s).epsilon(1e-8));
        CHECK(r.correlation_time() == doctest::Approx(s * b.correlation_time()).epsilon(1e-5));
        CHECK(r.gamma_rate() * r.correlation_time() == doctest::Approx(b.gamma_rate() * b.correlation_time()).epsilon(1e-5));
        CHECK(std::abs(r.correlation(s * 0.7)(0, 0) - b.correlation(0.7)(0, 0)) <= 1e-14);
    }
    CHECK_THROWS_AS(lorentzian_bath(0.1, 1.0, 1.0).time_rescaled(0.0), DomainError);
}
