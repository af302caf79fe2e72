#include <doctest.h>

#include <cmath>

#include "fpheom/bath.hpp"
#include "fpheom/experiment.hpp"
#include "fpheom/perturbative.hpp"

using namespace fpheom;

namespace {

const Mat2 kUp = 0.5 * (identity2() + sigma_z());

ModeSet small_modes() {
    ModeSet ms;
    ms.fit_tolerance = 1e-2;
    ms.modes.push_back({cplx(1.1, 0.4), cplx(1.2, 2.0)});
    ms.modes.push_back({cplx(0.4, -0.2), cplx(0.5, -0.7)});
    return ms;
}

ModeSet fig1_modes() {
    static ModeSet ms = [] {
        const BathSpec bath{SpectralParams{0.1, 0.5, 20.0}, kInfiniteBeta};
        ExperimentConfig::Fit fit;
        fit.tol = 1e-3;
        fit.grid = {2e-2, 25.0, 250};
        return decompose_certified(bath, fit, 20.0);
    }();
    return ms;
}

double sup_pop_diff(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.times.size() == b.times.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.population.size(); ++i)
        d = std::max(d, std::abs(a.population[i] - b.population[i]));
    return d;
}

} // namespace

TEST_CASE("interaction picture q: Hermitian, q(0) = sigma_z") {
    const SpinSystem sys(0.4, 0.8);
    CHECK((interaction_picture_q(sys, 0.0) - sigma_z()).cwiseAbs().maxCoeff() < 1e-15);
    for (double t : {0.3, 1.7, 9.2}) {
        const Mat2 q = interaction_picture_q(sys, t);
        CHECK((q - q.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        // unitary conjugation preserves the spectrum {+1, -1}
        CHECK(std::abs(q.trace()) < 1e-14);
        CHECK(std::abs(q.determinant() + 1.0) < 1e-13);
    }
}

TEST_CASE("free limit: both perturbative solvers give cos(2t)") {
    const SpinSystem sys(0.0, 1.0);
    ModeSet empty;
    const PropagatorConfig cfg(0.00025, 10.0, 40, 0.0);
    for (const Trajectory& tr : {redfield_plus_propagate(kUp, sys, empty, cfg),
                                 redfield_propagate(kUp, sys, empty, cfg)}) {
        double worst = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            worst = std::max(worst, std::abs(tr.population[i] - std::cos(2.0 * tr.times[i])));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("trace and Hermiticity are conserved by both solvers") {
    const SpinSystem sys(0.3, 1.0);
    const ModeSet ms = small_modes();
    const PropagatorConfig cfg(0.002, 6.0, 5, ms.max_abs_rate());
    for (const Trajectory& tr : {redfield_plus_propagate(kUp, sys, ms, cfg),
                                 redfield_propagate(kUp, sys, ms, cfg)}) {
        for (double te : tr.trace_error) CHECK(te <= 1e-8);
        for (const Mat2& r : tr.reduced)
            CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("tier-1 hierarchy equals the time-nonlocal Born solver") {
    // the sign structure of the hierarchy couplings is pinned by this oracle
    const SpinSystem sys(0.0, 1.0);
    const ModeSet ms = fig1_modes();
    const double dt = 0.1 / ms.max_abs_rate() / 2.0;
    const PropagatorConfig cfg(dt, 5.0, 8, ms.max_abs_rate());
    const Trajectory heom1 = propagate(kUp, sys, ms, cfg, 1);
    const Trajectory rp = redfield_plus_propagate(kUp, sys, ms, cfg);
    CHECK(sup_pop_diff(heom1, rp) < 1e-4);
}

TEST_CASE("Redfield and Redfield-plus agree to third order at short times") {
    const SpinSystem sys(0.3, 1.0);
    ModeSet ms;  // single-mode bath
    ms.modes.push_back({cplx(1.1, 0.4), cplx(1.2, 2.0)});
    auto window_diff = [&](double t_final) {
        const PropagatorConfig cfg(0.0005, t_final, 1, ms.max_abs_rate());
        const Trajectory a = redfield_plus_propagate(kUp, sys, ms, cfg);
        const Trajectory b = redfield_propagate(kUp, sys, ms, cfg);
        double d = 0.0;
        for (std::size_t i = 0; i < a.reduced.size(); ++i)
            d = std::max(d, (a.reduced[i] - b.reduced[i]).cwiseAbs().maxCoeff());
        return d;
    };
    const double d1 = window_diff(0.2);
    const double d2 = window_diff(0.4);
    // both kernels vanish at t = 0, so the gap opens no slower than t^3:
    // halving the window shrinks it by at least ~8x
    CHECK(d2 / d1 > 6.0);
    CHECK(d1 < 5e-4);
}

TEST_CASE("time-local Redfield drifts away from Redfield-plus at long times") {
    // the sub-Ohmic memory is heavy-tailed, so the time-local substitution
    // degrades once t exceeds a fraction of the system period
    const SpinSystem sys(0.0, 1.0);
    const ModeSet ms = fig1_modes();
    const PropagatorConfig cfg = PropagatorConfig::auto_config(sys, ms, 8.0, 100);
    const Trajectory rp = redfield_plus_propagate(kUp, sys, ms, cfg);
    const Trajectory rf = redfield_propagate(kUp, sys, ms, cfg);
    const double early = [&] {
        double d = 0.0;
        for (std::size_t i = 0; i < rp.times.size(); ++i)
            if (rp.times[i] <= 0.5)
                d = std::max(d, std::abs(rp.population[i] - rf.population[i]));
        return d;
    }();
    CHECK(early < 0.02);
    CHECK(sup_pop_diff(rp, rf) > 0.2);
}
