#ifndef FPHEOM_PERTURBATIVE_HPP
#define FPHEOM_PERTURBATIVE_HPP

#include "fpheom/heom.hpp"
#include "fpheom/types.hpp"

namespace fpheom {

// e^{iHt} for the two-level H = eps*sz + del*sx.
Mat2 evolution_operator(const SpinSystem& sys, double t);

// q^I(t) = e^{iHt} sigma_z e^{-iHt}
Mat2 interaction_picture_q(const SpinSystem& sys, double t);

// Shared precomputed data for the perturbative solvers: q^I(t) and the
// reconstructed bath correlation on the solver grid.
struct InteractionPictureCache {
    double dt = 0.0;
    std::vector<Mat2> qI;    // q^I(j dt)
    std::vector<cplx> corr;  // C(j dt) from the mode set

    static InteractionPictureCache build(const SpinSystem& sys, const ModeSet& modes,
                                         double dt, std::size_t steps);
};

// Second-order time-nonlocal master equation (Born, no Markov step):
//   d rho^I/dt = -int_0^t { C(t-u) [q^I(t), q^I(u) rho^I(u)]
//                         - C*(t-u) [q^I(t), rho^I(u) q^I(u)] } du
// History by trapezoid on the solver grid; Heun predictor-corrector
// stepping. Equals the tier-1 truncated hierarchy exactly in the continuum.
Trajectory redfield_plus_propagate(const Mat2& initial, const SpinSystem& sys,
                                   const ModeSet& modes, const PropagatorConfig& cfg);

// Conventional time-local Redfield: rho^I(u) -> rho^I(t) under the memory
// integral. The kernel integral Lambda(t) = int_0^t C(t-u) q^I(u) du is
// evaluated in closed form from the exponential modes; RK4 stepping.
Trajectory redfield_propagate(const Mat2& initial, const SpinSystem& sys, const ModeSet& modes,
                              const PropagatorConfig& cfg);

} // namespace fpheom

#endif
