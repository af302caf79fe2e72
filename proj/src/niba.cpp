#include "fpheom/niba.hpp"

#include <cmath>

#include "fpheom/bath.hpp"
#include "fpheom/quadrature.hpp"

namespace fpheom {

namespace {

// (8/pi) J(w)/w^2 with the w->0 power extracted analytically:
// J/w^2 = (pi/2) a wc^(1-s) w^(s-2) e^(-w/wc).
double envelope(double w, const SpectralParams& p) {
    return 4.0 * p.alpha * std::pow(p.omega_c, 1.0 - p.s) * std::pow(w, p.s - 2.0) *
           std::exp(-w / p.omega_c);
}

} // namespace

std::pair<double, double> pair_interaction(double t, const BathSpec& b, double quad_tol) {
    if (t < 0.0)
        throw DomainError("pair_interaction: t must be >= 0");
    const SpectralParams& p = b.spectral;
    if (b.zero_temperature() && p.s <= 0.0)
        throw DomainError("pair_interaction: Q diverges for s <= 0 at T = 0");
    if (t == 0.0 || p.alpha == 0.0) return {0.0, 0.0};

    const double beta = b.inverse_temperature;
    const double wc = p.omega_c;
    auto coth_half = [&](double w) {
        if (b.zero_temperature()) return 1.0;
        const double x = 0.5 * beta * w;
        return (x > 20.0) ? 1.0 : 1.0 / std::tanh(x);
    };
    // real part: (1 - cos wt) regularizes w^(s-2) at the origin
    auto f_re = [&](double w) -> cplx {
        if (w <= 0.0) return 0.0;
        const double osc = 2.0 * std::pow(std::sin(0.5 * w * t), 2.0);  // 1 - cos(wt)
        return envelope(w, p) * coth_half(w) * osc;
    };
    auto f_im = [&](double w) -> cplx {
        if (w <= 0.0) return 0.0;
        return envelope(w, p) * std::sin(w * t);
    };

    // scale estimate for the absolute tolerance: Q' grows ~ t^(1-s), use
    // the small-frequency mass through the (wt)^2 expansion plus 1
    const double rough = 4.0 * p.alpha * std::max(1.0, std::pow(wc * t, 1.0 - p.s));
    const double abs_tol = 0.5 * quad_tol * rough;

    const double w_hi = wc * 35.0;
    const double split = std::min(1.0 / std::max(t, 1.0 / wc), w_hi);
    const double strip = M_PI / (4.0 * t);

    std::vector<double> brk = {0.0, split};
    double a = split;
    while (a < w_hi) {
        a = std::min(a + strip, w_hi);
        brk.push_back(a);
    }
    const QuadResult qre = integrate_gk_seeded(f_re, brk, abs_tol);
    const QuadResult qim = integrate_gk_seeded(f_im, brk, abs_tol);
    return {qre.value.real(), qim.value.real()};
}

double niba_kernel(double t, const SpinSystem& sys, const BathSpec& b, double quad_tol) {
    if (sys.epsilon != 0.0)
        throw DomainError("niba_kernel: only the unbiased case (epsilon = 0) is supported");
    const double d2 = 4.0 * sys.delta * sys.delta;
    if (b.spectral.alpha == 0.0 || t == 0.0) return d2;
    auto [qp, qpp] = pair_interaction(t, b, quad_tol);
    return d2 * std::exp(-qp) * std::cos(qpp);
}

PairInteraction pair_interaction_series(const std::vector<double>& times, const BathSpec& b,
                                        double quad_tol) {
    PairInteraction out;
    out.times = times;
    out.q_real.reserve(times.size());
    out.q_imag.reserve(times.size());
    for (double t : times) {
        auto [qp, qpp] = pair_interaction(t, b, quad_tol);
        out.q_real.push_back(qp);
        out.q_imag.push_back(qpp);
    }
    return out;
}

std::vector<double> niba_kernel_series(double h, double t_final, const SpinSystem& sys,
                                       const BathSpec& b, double quad_tol) {
    const std::size_t n = static_cast<std::size_t>(std::llround(t_final / h));
    std::vector<double> out(n + 1);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i <= static_cast<long long>(n); ++i)
        out[static_cast<std::size_t>(i)] =
            niba_kernel(h * static_cast<double>(i), sys, b, quad_tol);
    return out;
}

} // namespace fpheom
