#include "fpheom/perturbative.hpp"

#include <cmath>

namespace fpheom {

Mat2 evolution_operator(const SpinSystem& sys, double t) {
    const double w = std::sqrt(sys.epsilon * sys.epsilon + sys.delta * sys.delta);
    if (w == 0.0) return Mat2::Identity();
    const double c = std::cos(w * t), s = std::sin(w * t);
    Mat2 n = (sys.epsilon * sigma_z() + sys.delta * sigma_x()) / w;
    return c * Mat2::Identity() + cplx(0.0, 1.0) * s * n;
}

Mat2 interaction_picture_q(const SpinSystem& sys, double t) {
    const Mat2 u = evolution_operator(sys, t);
    return u * sigma_z() * u.adjoint();
}

InteractionPictureCache InteractionPictureCache::build(const SpinSystem& sys,
                                                       const ModeSet& modes, double dt,
                                                       std::size_t steps) {
    InteractionPictureCache c;
    c.dt = dt;
    c.qI.reserve(steps + 1);
    c.corr.reserve(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = dt * static_cast<double>(j);
        c.qI.push_back(interaction_picture_q(sys, t));
        c.corr.push_back(reconstruct_correlation(modes, t));
    }
    return c;
}

namespace {

void check_initial(const Mat2& rho) {
    if (std::abs(rho(0, 0).imag()) > 1e-12 || std::abs(rho(1, 1).imag()) > 1e-12 ||
        std::abs(rho(0, 1) - std::conj(rho(1, 0))) > 1e-12 ||
        std::abs(rho(0, 0).real() + rho(1, 1).real() - 1.0) > 1e-12)
        throw DomainError("perturbative solver: initial density must be Hermitian, trace 1");
}

Trajectory make_trajectory(const SpinSystem& sys, const std::vector<Mat2>& rhoI, double dt,
                           int stride) {
    Trajectory traj;
    traj.dt = dt;
    for (std::size_t i = 0; i < rhoI.size(); i += static_cast<std::size_t>(stride)) {
        const double t = dt * static_cast<double>(i);
        const Mat2 u = evolution_operator(sys, t);
        const Mat2 rho = u.adjoint() * rhoI[i] * u;  // back to the Schroedinger picture
        traj.times.push_back(t);
        traj.reduced.push_back(rho);
        const cplx p = rho(0, 0) - rho(1, 1);
        traj.population.push_back(p.real());
        traj.trace_error.push_back(std::abs(rho(0, 0) + rho(1, 1) - 1.0));
        traj.max_imag_population = std::max(traj.max_imag_population, std::abs(p.imag()));
    }
    return traj;
}

} // namespace

Trajectory redfield_plus_propagate(const Mat2& initial, const SpinSystem& sys,
                                   const ModeSet& modes, const PropagatorConfig& cfg) {
    check_initial(initial);
    const double dt = cfg.dt;
    const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.t_final / dt - 1e-9));
    const InteractionPictureCache cache = InteractionPictureCache::build(sys, modes, dt, steps);

    std::vector<Mat2> rho(steps + 1);   // interaction picture
    std::vector<Mat2> qr(steps + 1);    // q^I rho^I
    std::vector<Mat2> rq(steps + 1);    // rho^I q^I
    rho[0] = initial;
    qr[0] = cache.qI[0] * rho[0];
    rq[0] = rho[0] * cache.qI[0];

    // trapezoid memory integral M_i = sum_j w_ij [C_{i-j} qr_j - C*_{i-j} rq_j]
    auto memory = [&](std::size_t i) {
        Mat2 acc = Mat2::Zero();
        if (i == 0) return acc;
        acc = 0.5 * (cache.corr[i] * qr[0] - std::conj(cache.corr[i]) * rq[0]);
        for (std::size_t j = 1; j < i; ++j)
            acc += cache.corr[i - j] * qr[j] - std::conj(cache.corr[i - j]) * rq[j];
        acc += 0.5 * (cache.corr[0] * qr[i] - std::conj(cache.corr[0]) * rq[i]);
        return Mat2(dt * acc);
    };
    auto commutator_rhs = [&](std::size_t i, const Mat2& mem) {
        return Mat2(-(cache.qI[i] * mem - mem * cache.qI[i]));
    };

    for (std::size_t i = 0; i < steps; ++i) {
        const Mat2 gi = commutator_rhs(i, memory(i));
        // predictor with frozen history
        rho[i + 1] = rho[i] + dt * gi;
        qr[i + 1] = cache.qI[i + 1] * rho[i + 1];
        rq[i + 1] = rho[i + 1] * cache.qI[i + 1];
        const Mat2 gp = commutator_rhs(i + 1, memory(i + 1));
        // single correction
        rho[i + 1] = rho[i] + 0.5 * dt * (gi + gp);
        qr[i + 1] = cache.qI[i + 1] * rho[i + 1];
        rq[i + 1] = rho[i + 1] * cache.qI[i + 1];
        if (!rho[i + 1].allFinite())
            throw NumericalError("redfield_plus: non-finite state",
                                 dt * static_cast<double>(i));
    }
    return make_trajectory(sys, rho, dt, cfg.record_stride);
}

namespace {

// Lambda(t) = int_0^t C(t-u) q^I(u) du in closed form. q^I(u) decomposes
// into frequencies {0, +2w, -2w}; each mode integrates to elementary
// exponentials.
class RedfieldKernel {
public:
    RedfieldKernel(const SpinSystem& sys, const ModeSet& modes) : modes_(modes) {
        w_ = std::sqrt(sys.epsilon * sys.epsilon + sys.delta * sys.delta);
        if (w_ == 0.0) {
            m0_ = sigma_z();
            mp_ = Mat2::Zero();
            mm_ = Mat2::Zero();
            return;
        }
        const Mat2 n = (sys.epsilon * sigma_z() + sys.delta * sigma_x()) / w_;
        const Mat2 a = 0.5 * (sigma_z() + n * sigma_z() * n);
        const Mat2 b = 0.5 * (sigma_z() - n * sigma_z() * n);
        const Mat2 c = cplx(0.0, 0.5) * (n * sigma_z() - sigma_z() * n);
        m0_ = a;
        mp_ = 0.5 * (b - cplx(0.0, 1.0) * c);  // carries e^{+2iwt}
        mm_ = 0.5 * (b + cplx(0.0, 1.0) * c);  // carries e^{-2iwt}
    }

    Mat2 lambda(double t) const {
        Mat2 acc = Mat2::Zero();
        for (const auto& md : modes_.modes) {
            const cplx z = md.rate;
            const cplx ez = std::exp(-z * t);
            acc += md.amplitude * ((1.0 - ez) / z) * m0_;
            if (w_ > 0.0) {
                const cplx e2p = std::exp(cplx(0.0, 2.0 * w_) * t);
                const cplx e2m = std::conj(e2p);
                acc += md.amplitude * ((e2p - ez) / (z + cplx(0.0, 2.0 * w_))) * mp_;
                acc += md.amplitude * ((e2m - ez) / (z - cplx(0.0, 2.0 * w_))) * mm_;
            }
        }
        return acc;
    }

private:
    const ModeSet& modes_;
    double w_;
    Mat2 m0_, mp_, mm_;
};

} // namespace

Trajectory redfield_propagate(const Mat2& initial, const SpinSystem& sys, const ModeSet& modes,
                              const PropagatorConfig& cfg) {
    check_initial(initial);
    const double dt = cfg.dt;
    const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.t_final / dt - 1e-9));
    RedfieldKernel kernel(sys, modes);

    auto rhs = [&](double t, const Mat2& r) {
        const Mat2 q = interaction_picture_q(sys, t);
        const Mat2 lam = kernel.lambda(t);
        const Mat2 w = lam * r - r * lam.adjoint();
        return Mat2(-(q * w - w * q));
    };

    std::vector<Mat2> rho(steps + 1);
    rho[0] = initial;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = dt * static_cast<double>(i);
        const Mat2 k1 = rhs(t, rho[i]);
        const Mat2 k2 = rhs(t + 0.5 * dt, rho[i] + 0.5 * dt * k1);
        const Mat2 k3 = rhs(t + 0.5 * dt, rho[i] + 0.5 * dt * k2);
        const Mat2 k4 = rhs(t + dt, rho[i] + dt * k3);
        rho[i + 1] = rho[i] + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!rho[i + 1].allFinite())
            throw NumericalError("redfield: non-finite state", t);
    }
    return make_trajectory(sys, rho, dt, cfg.record_stride);
}

} // namespace fpheom
