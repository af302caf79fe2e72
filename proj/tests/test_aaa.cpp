#include <doctest.h>

#include <cmath>

#include "fpheom/aaa.hpp"
#include "fpheom/bath.hpp"
#include "fpheom/experiment.hpp"

using namespace fpheom;

namespace {

std::vector<double> sample(const SampleGrid& g, double (*f)(double)) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.points[i]);
    return v;
}

double lorentzian(double w) { return 1.0 / (w * w + 1.0); }

} // namespace

TEST_CASE("aaa: constant samples fit exactly with one support point") {
    const SampleGrid g = SampleGrid::uniform(-5.0, 5.0, 21);
    std::vector<double> v(g.size(), 3.25);
    const BarycentricApproximant a = aaa_fit(g, v, 1e-12);
    CHECK(a.support_points.size() == 1);
    CHECK(a.converged);
    CHECK(a.achieved_error == 0.0);
    CHECK(a.evaluate(1.234).real() == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(poles_and_residues(a).empty());
}

TEST_CASE("aaa: Lorentzian needs three support points and gives poles +-i") {
    const SampleGrid g = SampleGrid::uniform(-10.0, 10.0, 201);
    const BarycentricApproximant a = aaa_fit(g, sample(g, lorentzian), 1e-13);
    CHECK(a.converged);
    CHECK(a.support_points.size() == 3);

    const auto prs = poles_and_residues(a);
    REQUIRE(prs.size() == 2);
    // partial fractions: residue -i/2 at +i, +i/2 at -i
    for (const auto& pr : prs) {
        CHECK(std::abs(pr.pole.real()) < 1e-8);
        CHECK(std::abs(std::abs(pr.pole.imag()) - 1.0) < 1e-8);
        const cplx want = pr.pole.imag() > 0 ? cplx(0, -0.5) : cplx(0, 0.5);
        CHECK(std::abs(pr.residue - want) < 1e-8);
    }
}

TEST_CASE("aaa: interpolation property at support points") {
    const SampleGrid g = SampleGrid::logarithmic(0.02, 500.0, 300);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v[i] = noise_power(g.points[i], BathSpec{SpectralParams{0.1, 0.5, 20.0}, kInfiniteBeta});
    const BarycentricApproximant a = aaa_fit(g, v, 1e-6);
    for (std::size_t k = 0; k < a.support_points.size(); ++k) {
        const double fv = a.support_values[k];
        const cplx rv = a.evaluate(a.support_points[k]);
        CHECK(std::abs(rv - fv) <= 1e-13 * std::max(1.0, std::abs(fv)));
    }
}

TEST_CASE("aaa: greedy max error is monotone over degrees") {
    const SampleGrid g = SampleGrid::uniform(-40.0, 40.0, 401);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v[i] = std::exp(-std::abs(g.points[i]) / 7.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 2; m <= 14; m += 2) {
        const BarycentricApproximant a = aaa_fit(g, v, 0.0, m);
        CHECK(a.achieved_error <= prev * (1.0 + 1e-12));
        prev = a.achieved_error;
    }
}

TEST_CASE("aaa: unreached tolerance is flagged, not hidden") {
    const SampleGrid g = SampleGrid::uniform(-40.0, 40.0, 401);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v[i] = std::exp(-std::abs(g.points[i]) / 7.0);  // kink resists low degrees
    const BarycentricApproximant a = aaa_fit(g, v, 1e-14, 4);
    CHECK_FALSE(a.converged);
    CHECK(a.achieved_error > 0.0);
}

TEST_CASE("modes_from_poles: single Lorentzian noise power") {
    // S(w) = 2 gl/( (w-W)^2 + g^2 ): lower pole W - ig, residue i*l
    // -> one mode d = 2l, z = g + iW, C(t) = 2l e^{-gt} e^{-iWt}
    const double gam = 0.7, lam = 1.3, Om = 2.0;
    std::vector<PoleResidue> prs = {
        {cplx(Om, gam), cplx(0.0, -lam)},   // upper pole: dropped by closure
        {cplx(Om, -gam), cplx(0.0, lam)}};  // lower pole
    const ModeSet ms = modes_from_poles(prs, 1e-3);
    REQUIRE(ms.size() == 1);
    CHECK(std::abs(ms.modes[0].amplitude - cplx(2.0 * lam, 0.0)) < 1e-14);
    CHECK(std::abs(ms.modes[0].rate - cplx(gam, Om)) < 1e-14);
    const cplx c1 = reconstruct_correlation(ms, 1.0);
    CHECK(std::abs(c1 - 2.0 * lam * std::exp(-gam) * std::exp(cplx(0.0, -Om))) < 1e-14);
}

TEST_CASE("modes_from_poles: upper-half-plane-only input gives an empty set") {
    std::vector<PoleResidue> prs = {{cplx(1.0, 2.0), cplx(1.0, 0.0)},
                                    {cplx(-1.0, 0.5), cplx(0.0, 1.0)}};
    const ModeSet ms = modes_from_poles(prs, 1e-3);
    CHECK(ms.size() == 0);
    CHECK(reconstruct_correlation(ms, 3.0) == cplx(0.0, 0.0));
}

TEST_CASE("poles of a fitted real-symmetric function close under conjugation") {
    const SampleGrid g = SampleGrid::uniform(-10.0, 10.0, 401);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = g.points[i];
        v[i] = 1.0 / (w * w + 1.0) + 0.5 / ((w - 2) * (w - 2) + 4.0) +
               0.5 / ((w + 2) * (w + 2) + 4.0);
    }
    const auto prs = poles_and_residues(aaa_fit(g, v, 1e-11));
    for (const auto& pr : prs) {
        bool paired = false;
        for (const auto& qr : prs)
            paired |= std::abs(qr.pole - std::conj(pr.pole)) < 1e-10;
        CHECK(paired);
    }
}

TEST_CASE("round trip: rational noise power with known lower poles") {
    // S(w) = sum of two Lorentzians -> modes recoverable to 1e-8
    const double g1 = 0.9, l1 = 2.0, W1 = 1.5;
    const double g2 = 2.2, l2 = 0.8, W2 = -3.0;
    const SampleGrid grid = SampleGrid::uniform(-30.0, 30.0, 601);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.points[i];
        v[i] = 2.0 * g1 * l1 / ((w - W1) * (w - W1) + g1 * g1) +
               2.0 * g2 * l2 / ((w - W2) * (w - W2) + g2 * g2);
    }
    const ModeSet ms = modes_from_poles(poles_and_residues(aaa_fit(grid, v, 1e-12)), 1e-3);
    REQUIRE(ms.size() == 2);
    for (const auto& m : ms.modes) {
        CHECK(m.rate.real() > 0.0);
        const bool first = std::abs(m.rate - cplx(g1, W1)) < 1e-8;
        const bool second = std::abs(m.rate - cplx(g2, W2)) < 1e-8;
        CHECK((first || second));
        if (first) CHECK(std::abs(m.amplitude - cplx(2 * l1, 0.0)) < 1e-8);
        if (second) CHECK(std::abs(m.amplitude - cplx(2 * l2, 0.0)) < 1e-8);
    }
}

TEST_CASE("certify: exact mode set at machine precision, empty set fails at ~1") {
    const double gam = 0.7, lam = 1.3, Om = 2.0;
    ModeSet ms;
    ms.fit_tolerance = 1e-12;
    ms.modes.push_back({cplx(2.0 * lam, 0.0), cplx(gam, Om)});
    std::vector<double> ts;
    std::vector<cplx> cs;
    for (double t = 0.01; t < 8.0; t += 0.37) {
        ts.push_back(t);
        cs.push_back(2.0 * lam * std::exp(-cplx(gam, Om) * t));
    }
    const double c0 = 2.0 * lam;
    const ModeSet ok = certify(ms, ts, cs, c0);
    CHECK(ok.certified_residual >= 0.0);
    CHECK(ok.certified_residual < 1e-14);

    ModeSet empty;
    empty.fit_tolerance = 1e-3;
    try {
        certify(empty, ts, cs, c0);
        FAIL("expected CertificationError");
    } catch (const CertificationError& e) {
        CHECK(e.worst_residual == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("certified sub-Ohmic decomposition meets the 1e-3 threshold") {
    // alpha=0.1, s=0.5, wc=20, T=0 on [0, 20]: residual <= 1e-3 and the
    // amplitude sum pins C(0) to the same tolerance.
    const BathSpec bath{SpectralParams{0.1, 0.5, 20.0}, kInfiniteBeta};
    ExperimentConfig::Fit fit;
    fit.tol = 1e-3;
    fit.grid = {2e-2, 25.0, 250};
    const ModeSet ms = decompose_certified(bath, fit, 20.0);
    CHECK(ms.certified());
    CHECK(ms.certified_residual <= 1e-3);
    for (const auto& m : ms.modes) CHECK(m.rate.real() > 0.0);

    const double c0 = 0.1 * 400.0 * std::tgamma(1.5);
    CHECK(std::abs(ms.amplitude_sum() - cplx(c0, 0.0)) <= ms.fit_tolerance * c0 + 1e-9);
    // reconstruction at t=0 within 1e-3 relative of 35.4491
    CHECK(std::abs(reconstruct_correlation(ms, 0.0) - cplx(35.4491, 0.0)) < 1e-3 * 35.4491);

    // JSON round trip preserves the set
    const ModeSet back = modeset_from_json(modeset_to_json(ms));
    REQUIRE(back.size() == ms.size());
    CHECK(back.certified_residual == doctest::Approx(ms.certified_residual));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        CHECK(std::abs(back.modes[k].amplitude - ms.modes[k].amplitude) < 1e-12);
        CHECK(std::abs(back.modes[k].rate - ms.modes[k].rate) < 1e-12);
    }
}

TEST_CASE("refine_amplitudes never worsens the residual") {
    const BathSpec bath{SpectralParams{0.1, 0.5, 20.0}, kInfiniteBeta};
    const SampleGrid g = default_fit_grid(bath.spectral, 2e-2, 25.0, 250);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = noise_power(g.points[i], bath);
    const ModeSet raw = modes_from_poles(poles_and_residues(aaa_fit(g, v, 0.0, 12)), 1e-2);
    REQUIRE(raw.size() >= 3);

    const SampleGrid cert = default_certification_grid(20.0, 20.0, 300);
    std::vector<cplx> oracle(cert.size());
    for (std::size_t i = 0; i < cert.size(); ++i)
        oracle[i] = correlation_oracle(cert.points[i], bath);
    const double c0 = std::abs(correlation_oracle(0.0, bath));

    const double before = reconstruction_residual(raw, cert.points, oracle, c0);
    const ModeSet fine = refine_amplitudes(raw, cert.points, oracle);
    const double after = reconstruction_residual(fine, cert.points, oracle, c0);
    CHECK(after <= before * (1.0 + 1e-12));
    for (std::size_t k = 0; k < fine.size(); ++k)
        CHECK(fine.modes[k].rate == raw.modes[k].rate);  // rates untouched
}
