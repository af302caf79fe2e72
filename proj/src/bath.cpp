#include "fpheom/bath.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fpheom/quadrature.hpp"

namespace fpheom {

double spectral_density(double omega, const SpectralParams& p) {
    if (omega < 0.0)
        throw DomainError("spectral_density: omega must be >= 0");
    if (omega == 0.0)
        return (p.s > 0.0) ? 0.0 : M_PI_2 * p.alpha * p.omega_c;
    return M_PI_2 * p.alpha * std::pow(p.omega_c, 1.0 - p.s) * std::pow(omega, p.s) *
           std::exp(-omega / p.omega_c);
}

double noise_power(double omega, const BathSpec& b) {
    if (b.zero_temperature())
        return (omega > 0.0) ? 2.0 * spectral_density(omega, b.spectral) : 0.0;

    const double beta = b.inverse_temperature;
    const double aw = std::abs(omega);
    if (omega == 0.0) {
        // w->0 limit of 2[n+1]J: finite only for the Ohmic edge s = 1.
        if (b.spectral.s < 1.0) return std::numeric_limits<double>::infinity();
        return M_PI * b.spectral.alpha / beta;
    }
    const double j = spectral_density(aw, b.spectral);
    // n+1 = 1/(1-e^(-bw)) for w>0; on the negative axis S(-w) = e^(-bw) S(w).
    const double npl1 = 1.0 / (1.0 - std::exp(-beta * aw));
    const double s_pos = 2.0 * npl1 * j;
    return (omega > 0.0) ? s_pos : std::exp(-beta * aw) * s_pos;
}

cplx correlation_oracle(double t, const BathSpec& b, double quad_tol) {
    // Fold onto [0, inf): S(w)e^(-iwt) + S(-w)e^(+iwt). At T=0 the second
    // term vanishes. Evaluated as two semi-infinite Fourier integrals.
    const double wc = b.spectral.omega_c;
    auto pos = [&](double w) { return noise_power(w, b); };
    QuadResult qp = fourier_semi_infinite(pos, t, wc, quad_tol);
    cplx acc = qp.value;
    if (!b.zero_temperature()) {
        auto neg = [&](double w) { return noise_power(-w, b); };
        QuadResult qn = fourier_semi_infinite(neg, -t, wc, quad_tol);
        acc += qn.value;
    }
    return acc / M_PI;
}

SampleGrid default_fit_grid(const SpectralParams& p, double lo_factor, double hi_factor,
                            std::size_t points_per_side) {
    const double lo = lo_factor * p.omega_c, hi = hi_factor * p.omega_c;
    std::vector<double> pts;
    pts.reserve(2 * points_per_side + 1);
    const double r = std::log(hi / lo) / static_cast<double>(points_per_side - 1);
    for (std::size_t i = 0; i < points_per_side; ++i)
        pts.push_back(-hi * std::exp(-r * static_cast<double>(i)));
    pts.push_back(0.0);
    for (std::size_t i = 0; i < points_per_side; ++i)
        pts.push_back(lo * std::exp(r * static_cast<double>(i)));
    return SampleGrid(std::move(pts), SpacingKind::Composite);
}

SampleGrid default_certification_grid(double omega_c, double t_max, std::size_t points) {
    const double lo = 1e-3 / omega_c;
    std::vector<double> pts;
    pts.reserve(points);
    const double r = std::log(t_max / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        pts.push_back(lo * std::exp(r * static_cast<double>(i)));
    return SampleGrid(std::move(pts), SpacingKind::Logarithmic);
}

SampleGrid SampleGrid::uniform(double a, double b, std::size_t n) {
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return SampleGrid(std::move(pts), SpacingKind::Uniform);
}

SampleGrid SampleGrid::logarithmic(double a, double b, std::size_t n) {
    std::vector<double> pts(n);
    const double r = std::log(b / a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = a * std::exp(r * static_cast<double>(i));
    return SampleGrid(std::move(pts), SpacingKind::Logarithmic);
}

SampleGrid SampleGrid::composite(const std::vector<std::vector<double>>& pieces) {
    std::set<double> uniq;
    for (const auto& piece : pieces) uniq.insert(piece.begin(), piece.end());
    return SampleGrid(std::vector<double>(uniq.begin(), uniq.end()), SpacingKind::Composite);
}

} // namespace fpheom
