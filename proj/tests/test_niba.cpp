#include <doctest.h>

#include <cmath>

#include "fpheom/niba.hpp"

using namespace fpheom;

namespace {

// Independent closed forms at T = 0 for the Eq.-3 spectral family,
// via the Gamma-function continuation of the frequency integrals:
//   Q'(t) = 4 a G(s-1) [1 - Re (1+i wc t)^(1-s)]
//   Q''(t) = -4 a G(s-1) (1+wc^2 t^2)^((1-s)/2) sin((1-s) atan(wc t))
// with the s -> 1 limits 2 a ln(1+wc^2 t^2) and 4 a atan(wc t).
double qp_closed(double t, double a, double s, double wc) {
    if (std::abs(s - 1.0) < 1e-12) return 2.0 * a * std::log(1.0 + wc * wc * t * t);
    const double g = std::tgamma(s - 1.0);
    const double r = std::pow(1.0 + wc * wc * t * t, 0.5 * (1.0 - s));
    return 4.0 * a * g * (1.0 - r * std::cos((1.0 - s) * std::atan(wc * t)));
}

double qpp_closed(double t, double a, double s, double wc) {
    if (std::abs(s - 1.0) < 1e-12) return 4.0 * a * std::atan(wc * t);
    const double g = std::tgamma(s - 1.0);
    const double r = std::pow(1.0 + wc * wc * t * t, 0.5 * (1.0 - s));
    return -4.0 * a * g * r * std::sin((1.0 - s) * std::atan(wc * t));
}

BathSpec bath(double a, double s) { return {SpectralParams{a, s, 20.0}, kInfiniteBeta}; }

} // namespace

TEST_CASE("pair interaction: boundary anchors") {
    auto [qp0, qpp0] = pair_interaction(0.0, bath(0.05, 0.5));
    CHECK(qp0 == 0.0);
    CHECK(qpp0 == 0.0);
    auto [qpa, qppa] = pair_interaction(3.0, bath(0.0, 0.5));
    CHECK(qpa == 0.0);
    CHECK(qppa == 0.0);
}

TEST_CASE("pair interaction matches the s = 1 closed form to 1e-8") {
    const BathSpec b = bath(0.05, 1.0);
    for (double t = 0.25; t <= 10.0; t += 0.75) {
        auto [qp, qpp] = pair_interaction(t, b, 1e-12);
        CHECK(std::abs(qp - 2.0 * 0.05 * std::log(1.0 + 400.0 * t * t)) < 1e-8);
        CHECK(std::abs(qpp - 4.0 * 0.05 * std::atan(20.0 * t)) < 1e-8);
    }
}

TEST_CASE("pair interaction matches the general-s closed forms") {
    for (double s : {0.25, 0.5, 0.75}) {
        const BathSpec b = bath(0.05, s);
        for (double t : {0.05, 0.3, 1.0, 4.0, 10.0}) {
            auto [qp, qpp] = pair_interaction(t, b, 1e-12);
            CHECK(std::abs(qp - qp_closed(t, 0.05, s, 20.0)) < 1e-8 * std::max(1.0, qp));
            CHECK(std::abs(qpp - qpp_closed(t, 0.05, s, 20.0)) < 1e-8 * std::max(1.0, qpp));
        }
    }
}

TEST_CASE("Q' starts at zero and never decreases") {
    const BathSpec b = bath(0.05, 0.5);
    double prev = 0.0;
    for (double t = 0.1; t <= 8.0; t += 0.1) {
        auto [qp, qpp] = pair_interaction(t, b);
        CHECK(qp >= prev - 1e-12);
        prev = qp;
    }
}

TEST_CASE("kernel anchors: K(0) = 4 delta^2 exactly, alpha = 0 constant") {
    const SpinSystem sys(0.0, 1.0);
    CHECK(niba_kernel(0.0, sys, bath(0.33, 0.5)) == 4.0);
    CHECK(niba_kernel(7.7, sys, bath(0.0, 0.5)) == 4.0);
    const SpinSystem sys2(0.0, 1.5);
    CHECK(niba_kernel(0.0, sys2, bath(0.1, 0.25)) == 9.0);
}

TEST_CASE("kernel is bounded by its decay envelope") {
    const SpinSystem sys(0.0, 1.0);
    const BathSpec b = bath(0.05, 0.5);
    for (double t = 0.0; t <= 10.0; t += 0.23) {
        const double k = niba_kernel(t, sys, b);
        auto [qp, qpp] = pair_interaction(t, b);
        CHECK(std::abs(k) <= 4.0 * std::exp(-qp) + 1e-12);
        CHECK(std::abs(k) <= 4.0 + 1e-12);
    }
}

TEST_CASE("biased case is rejected; s = 0 at T = 0 is rejected") {
    CHECK_THROWS_AS(niba_kernel(1.0, SpinSystem(0.5, 1.0), bath(0.05, 0.5)), DomainError);
    CHECK_THROWS_AS(pair_interaction(1.0, bath(0.05, 0.0)), DomainError);
}

TEST_CASE("first zero crossing moves earlier as s decreases") {
    const SpinSystem sys(0.0, 1.0);
    auto first_crossing = [&](double s) {
        const BathSpec b = bath(0.05, s);
        double prev = niba_kernel(0.0, sys, b);
        for (double t = 0.01; t < 10.0; t += 0.01) {
            const double k = niba_kernel(t, sys, b);
            if (prev > 0.0 && k <= 0.0) return t;
            prev = k;
        }
        return 1e9;
    };
    const double c25 = first_crossing(0.25);
    const double c50 = first_crossing(0.5);
    CHECK(c25 < c50);
    CHECK(c50 < 10.0);  // both cross within the window at these parameters
}

TEST_CASE("Fig.-3 shape split: s = 0.75 monotone positive, s = 0.25 oscillatory") {
    const SpinSystem sys(0.0, 1.0);
    const std::vector<double> k75 = niba_kernel_series(0.02, 5.0, sys, bath(0.05, 0.75));
    bool positive = true, monotone = true;
    for (std::size_t i = 0; i < k75.size(); ++i) {
        positive &= k75[i] > 0.0;
        if (i) monotone &= k75[i] <= k75[i - 1] + 1e-12;
    }
    CHECK(positive);
    CHECK(monotone);

    const std::vector<double> k25 = niba_kernel_series(0.02, 5.0, sys, bath(0.05, 0.25));
    int sign_changes = 0;
    for (std::size_t i = 1; i < k25.size(); ++i)
        if (k25[i - 1] * k25[i] < 0.0) ++sign_changes;
    CHECK(sign_changes >= 2);
}
