#include "fpheom/gme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace fpheom {

namespace {

std::size_t steps_for(double h, double t_final, std::size_t available) {
    const std::size_t n = static_cast<std::size_t>(std::llround(t_final / h));
    if (n + 1 > available)
        throw DomainError("gme: kernel grid shorter than requested horizon");
    if (n < 8)
        throw DomainError("gme: need at least 8 grid steps");
    return n;
}

// 4th-order first derivative on a uniform grid; one-sided at the edges.
std::vector<double> derivative4(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n);
    if (n < 5)
        throw DomainError("derivative4: need at least 5 points");
    const double c = 1.0 / (12.0 * h);
    d[0] = c * (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]);
    d[1] = c * (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]);
    d[n - 2] = -c * (-3.0 * y[n - 1] - 10.0 * y[n - 2] + 18.0 * y[n - 3] - 6.0 * y[n - 4] + y[n - 5]);
    d[n - 1] = -c * (-25.0 * y[n - 1] + 48.0 * y[n - 2] - 36.0 * y[n - 3] + 16.0 * y[n - 4] -
                     3.0 * y[n - 5]);
    return d;
}

} // namespace

PopulationSeries gme_forward_plain(const MemoryKernelSeries& kernel, double p0, double t_final,
                                   std::vector<double>* memory_sums) {
    const double h = kernel.h;
    const std::size_t n = steps_for(h, t_final, kernel.values.size());
    const std::vector<double>& K = kernel.values;

    std::vector<double> P(n + 1), F(n + 1);
    P[0] = p0;
    F[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // trapezoid memory of F_{i+1} excluding the unknown j=i+1 term
        double s = 0.5 * K[i + 1] * P[0];
        for (std::size_t j = 1; j <= i; ++j) s += K[i + 1 - j] * P[j];
        // implicit trapezoid step: P' = F, F_{i+1} = -h (s + K0 P_{i+1}/2)
        P[i + 1] = (P[i] + 0.5 * h * (F[i] - h * s)) / (1.0 + 0.25 * h * h * K[0]);
        F[i + 1] = -h * (s + 0.5 * K[0] * P[i + 1]);
    }
    if (memory_sums) *memory_sums = F;
    PopulationSeries out;
    out.h = h;
    out.values = std::move(P);
    return out;
}

PopulationSeries gme_forward(const MemoryKernelSeries& kernel, double p0, double t_final) {
    PopulationSeries coarse = gme_forward_plain(kernel, p0, t_final);
    // halve the step by linear refinement of the kernel grid
    MemoryKernelSeries fine;
    fine.h = 0.5 * kernel.h;
    fine.values.resize(2 * kernel.values.size() - 1);
    for (std::size_t i = 0; i + 1 < kernel.values.size(); ++i) {
        fine.values[2 * i] = kernel.values[i];
        fine.values[2 * i + 1] = 0.5 * (kernel.values[i] + kernel.values[i + 1]);
    }
    fine.values.back() = kernel.values.back();
    PopulationSeries half = gme_forward_plain(fine, p0, t_final);
    PopulationSeries out;
    out.h = kernel.h;
    out.values.resize(coarse.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = (4.0 * half.values[2 * i] - coarse.values[i]) / 3.0;
    return out;
}

std::vector<std::array<double, 2>> gme_forward_matrix(const MatrixKernelSeries& kernel,
                                                      std::array<double, 2> p0, double t_final) {
    const double h = kernel.h;
    const std::size_t n = steps_for(h, t_final, kernel.values.size());
    const auto& K = kernel.values;

    auto mul = [](const std::array<double, 4>& k, const std::array<double, 2>& p) {
        return std::array<double, 2>{k[0] * p[0] + k[1] * p[1], k[2] * p[0] + k[3] * p[1]};
    };
    std::vector<std::array<double, 2>> P(n + 1), F(n + 1);
    P[0] = p0;
    F[0] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        std::array<double, 2> s = mul(K[i + 1], P[0]);
        s[0] *= 0.5;
        s[1] *= 0.5;
        for (std::size_t j = 1; j <= i; ++j) {
            const auto t = mul(K[i + 1 - j], P[j]);
            s[0] += t[0];
            s[1] += t[1];
        }
        // solve (I + h^2/4 K0) P_{i+1} = P_i + h/2 (F_i - h s)
        const double a = 1.0 + 0.25 * h * h * K[0][0], b = 0.25 * h * h * K[0][1];
        const double c = 0.25 * h * h * K[0][2], d = 1.0 + 0.25 * h * h * K[0][3];
        const double r0 = P[i][0] + 0.5 * h * (F[i][0] - h * s[0]);
        const double r1 = P[i][1] + 0.5 * h * (F[i][1] - h * s[1]);
        const double det = a * d - b * c;
        P[i + 1] = {(d * r0 - b * r1) / det, (a * r1 - c * r0) / det};
        const auto t0 = mul(K[0], P[i + 1]);
        F[i + 1] = {-h * (s[0] + 0.5 * t0[0]), -h * (s[1] + 0.5 * t0[1])};
    }
    return P;
}

MemoryKernelSeries extract_kernel(const PopulationSeries& p) {
    const double h = p.h;
    const std::size_t n = p.values.size() - 1;
    if (!(h > 0.0))
        throw DomainError("extract_kernel: population series needs a uniform grid");
    if (p.values.size() < 8)
        throw DomainError("extract_kernel: need at least 8 samples");
    const std::vector<double>& P = p.values;
    if (std::abs(0.5 * h * P[0]) < 1e-300)
        throw DomainError(
            "extract_kernel: near-zero diagonal h*P(0)/2; the scalar reduction is ill-posed -- "
            "use the matrix extraction with two initial conditions");

    const std::vector<double> dP = derivative4(P, h);
    // g_i = -Pdot_i / h = sum_{j<=i} w_ij K_{i-j} P_j
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = -dP[i] / h;

    std::vector<double> K(n + 1, 0.0);
    // Leading block: equations i = 1..3 plus the cubic-extrapolation
    // closure K0 - 3K1 + 3K2 - K3 = 0. The first panel alone cannot split
    // K0 from K1 because Pdot(0) = 0 makes P flat there.
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    Eigen::Vector4d b = Eigen::Vector4d::Zero();
    for (int i = 1; i <= 3; ++i) {
        A(i - 1, i) += 0.5 * P[0];
        for (int j = 1; j < i; ++j) A(i - 1, i - j) += P[static_cast<std::size_t>(j)];
        A(i - 1, 0) += 0.5 * P[static_cast<std::size_t>(i)];
        b(i - 1) = g[static_cast<std::size_t>(i)];
    }
    A(3, 0) = 1.0;
    A(3, 1) = -3.0;
    A(3, 2) = 3.0;
    A(3, 3) = -1.0;
    const Eigen::Vector4d head = A.fullPivLu().solve(b);
    for (int i = 0; i < 4; ++i) K[static_cast<std::size_t>(i)] = head(i);

    for (std::size_t i = 4; i <= n; ++i) {
        double acc = 0.5 * K[0] * P[i];
        for (std::size_t j = 1; j < i; ++j) acc += K[i - j] * P[j];
        K[i] = (g[i] - acc) / (0.5 * P[0]);
    }
    MemoryKernelSeries out;
    out.h = h;
    out.values = std::move(K);
    return out;
}

MatrixKernelSeries extract_kernel_matrix(const std::vector<std::array<double, 2>>& traj_up,
                                         const std::vector<std::array<double, 2>>& traj_down,
                                         double h) {
    if (traj_up.size() != traj_down.size() || traj_up.size() < 8)
        throw DomainError("extract_kernel_matrix: need two equal-length series (>= 8 samples)");
    const std::size_t n = traj_up.size() - 1;

    // P-matrix per time: columns are the two experiments, rows sigma'.
    // The sigma-th row of K solves, per experiment a:
    //   -Pdot_sigma^a(t_i)/h = sum_j w_ij sum_s K_{sigma s}(t_{i-j}) P_s^a(t_j)
    // M0 = [P_s^a(0)] must be invertible (factorized +/- starts give I).
    auto component = [](const std::vector<std::array<double, 2>>& tr, int s) {
        std::vector<double> v(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) v[i] = tr[i][static_cast<std::size_t>(s)];
        return v;
    };
    const std::vector<double> Pu0 = component(traj_up, 0), Pu1 = component(traj_up, 1);
    const std::vector<double> Pd0 = component(traj_down, 0), Pd1 = component(traj_down, 1);

    const double det0 = Pu0[0] * Pd1[0] - Pd0[0] * Pu1[0];
    if (std::abs(det0) < 1e-12)
        throw DomainError("extract_kernel_matrix: initial-condition matrix is singular");

    MatrixKernelSeries out;
    out.h = h;
    out.values.assign(n + 1, {0.0, 0.0, 0.0, 0.0});

    // Solve row by row (sigma = +,-). Each row is a 2-component Volterra
    // system; the leading block mirrors the scalar closure, entrywise.
    for (int sigma = 0; sigma < 2; ++sigma) {
        const std::vector<double> gu = derivative4(sigma == 0 ? Pu0 : Pu1, h);
        const std::vector<double> gd = derivative4(sigma == 0 ? Pd0 : Pd1, h);

        // unknown x_i = (K_{sigma,+}(t_i), K_{sigma,-}(t_i))
        auto dotP = [&](const std::array<double, 2>& x, double a0, double a1) {
            return x[0] * a0 + x[1] * a1;
        };
        std::vector<std::array<double, 2>> Krow(n + 1, {0.0, 0.0});

        // leading 8x8 block: equations i=1..3 for both experiments + closure per entry
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(8, 8);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(8);
        auto xi = [](int i, int comp) { return 2 * i + comp; };  // x = (K(t0),K(t1),K(t2),K(t3)) pairs
        for (int i = 1; i <= 3; ++i) {
            const int equ = 2 * (i - 1), eqd = 2 * (i - 1) + 1;
            A(equ, xi(i, 0)) += 0.5 * Pu0[0];
            A(equ, xi(i, 1)) += 0.5 * Pu1[0];
            A(eqd, xi(i, 0)) += 0.5 * Pd0[0];
            A(eqd, xi(i, 1)) += 0.5 * Pd1[0];
            for (int j = 1; j < i; ++j) {
                A(equ, xi(i - j, 0)) += Pu0[static_cast<std::size_t>(j)];
                A(equ, xi(i - j, 1)) += Pu1[static_cast<std::size_t>(j)];
                A(eqd, xi(i - j, 0)) += Pd0[static_cast<std::size_t>(j)];
                A(eqd, xi(i - j, 1)) += Pd1[static_cast<std::size_t>(j)];
            }
            A(equ, xi(0, 0)) += 0.5 * Pu0[static_cast<std::size_t>(i)];
            A(equ, xi(0, 1)) += 0.5 * Pu1[static_cast<std::size_t>(i)];
            A(eqd, xi(0, 0)) += 0.5 * Pd0[static_cast<std::size_t>(i)];
            A(eqd, xi(0, 1)) += 0.5 * Pd1[static_cast<std::size_t>(i)];
            b(equ) = -gu[static_cast<std::size_t>(i)] / h;
            b(eqd) = -gd[static_cast<std::size_t>(i)] / h;
        }
        for (int comp = 0; comp < 2; ++comp) {
            A(6 + comp, xi(0, comp)) = 1.0;
            A(6 + comp, xi(1, comp)) = -3.0;
            A(6 + comp, xi(2, comp)) = 3.0;
            A(6 + comp, xi(3, comp)) = -1.0;
        }
        Eigen::VectorXd head = A.fullPivLu().solve(b);
        for (int i = 0; i < 4; ++i)
            Krow[static_cast<std::size_t>(i)] = {head(xi(i, 0)), head(xi(i, 1))};

        for (std::size_t i = 4; i <= n; ++i) {
            double au = 0.5 * dotP(Krow[0], Pu0[i], Pu1[i]);
            double ad = 0.5 * dotP(Krow[0], Pd0[i], Pd1[i]);
            for (std::size_t j = 1; j < i; ++j) {
                au += dotP(Krow[i - j], Pu0[j], Pu1[j]);
                ad += dotP(Krow[i - j], Pd0[j], Pd1[j]);
            }
            const double ru = -gu[i] / h - au, rd = -gd[i] / h - ad;
            // 0.5 (x0 Pu0[0] + x1 Pu1[0]) = ru ; 0.5 (x0 Pd0[0] + x1 Pd1[0]) = rd
            Krow[i] = {2.0 * (ru * Pd1[0] - rd * Pu1[0]) / det0,
                       2.0 * (rd * Pu0[0] - ru * Pd0[0]) / det0};
        }
        for (std::size_t i = 0; i <= n; ++i) {
            out.values[i][static_cast<std::size_t>(2 * sigma)] = Krow[i][0];
            out.values[i][static_cast<std::size_t>(2 * sigma + 1)] = Krow[i][1];
        }
    }
    return out;
}

RateMatrix asymptotic_rates(const MemoryKernelSeries& kernel) {
    const std::size_t n = kernel.values.size();
    if (n < 16 || !(kernel.h > 0.0))
        throw DomainError("asymptotic_rates: kernel series too short");
    const double h = kernel.h;
    const double t_end = kernel.t_final();

    RateMatrix r;
    r.horizon = t_end;

    double kmax = 0.0;
    for (double v : kernel.values) kmax = std::max(kmax, std::abs(v));

    // last decade [t_end/10, t_end]
    std::size_t i0 = static_cast<std::size_t>(std::ceil(0.1 * t_end / h));
    i0 = std::max<std::size_t>(i0, 1);
    std::vector<double> lt, lk;
    double tail_median_scale = 0.0;
    {
        std::vector<double> mags;
        for (std::size_t i = i0; i < n; ++i) mags.push_back(std::abs(kernel.values[i]));
        std::sort(mags.begin(), mags.end());
        tail_median_scale = mags[mags.size() / 2];
    }
    if (kmax == 0.0) {  // identically zero kernel
        r.k = 0.0;
        r.converged = true;
        r.tail_exponent = std::numeric_limits<double>::infinity();
        return r;
    }
    if (tail_median_scale > 0.5 * kmax) {
        r.nonintegrable = true;  // kernel has not decayed over the horizon
        return r;
    }

    // power-law fit |K| ~ A t^-p over the final decade
    for (std::size_t i = i0; i < n; ++i) {
        const double v = std::abs(kernel.values[i]);
        if (v > 1e-300) {
            lt.push_back(std::log(h * static_cast<double>(i)));
            lk.push_back(std::log(v));
        }
    }
    double p_exp = std::numeric_limits<double>::infinity();
    double A_fit = 0.0;
    if (lt.size() >= 4) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(lt.size());
        for (std::size_t i = 0; i < lt.size(); ++i) {
            sx += lt[i];
            sy += lk[i];
            sxx += lt[i] * lt[i];
            sxy += lt[i] * lk[i];
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        p_exp = -slope;
        A_fit = std::exp((sy - slope * sx) / m);
    }
    r.tail_exponent = p_exp;

    // trapezoid over the horizon
    double acc = 0.5 * (kernel.values.front() + kernel.values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += kernel.values[i];
    r.k = h * acc;

    if (std::isfinite(p_exp) && p_exp <= 1.0) {
        r.nonintegrable = true;  // algebraic tail with divergent integral
        r.converged = false;
        return r;
    }
    if (std::isfinite(p_exp)) {
        const double tail = A_fit * std::pow(t_end, 1.0 - p_exp) / (p_exp - 1.0);
        // tail estimate is attached only as a bound on the truncation
        r.converged = std::abs(tail) < 0.05 * std::max(std::abs(r.k), 1e-30) ||
                      std::abs(tail) < 1e-9;
        if (r.converged) r.k += std::copysign(tail, kernel.values.back());
    } else {
        r.converged = true;  // decayed to numerical zero
    }
    return r;
}

std::string kernel_to_csv(const MemoryKernelSeries& k, const std::string& value_name) {
    std::string out = "t," + value_name + "\n";
    char line[128];
    for (std::size_t i = 0; i < k.values.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", k.h * static_cast<double>(i),
                      k.values[i]);
        out += line;
    }
    return out;
}

std::string matrix_kernel_to_csv(const MatrixKernelSeries& k) {
    std::string out = "t,K_pp,K_pm,K_mp,K_mm\n";
    char line[256];
    for (std::size_t i = 0; i < k.values.size(); ++i) {
        const auto& v = k.values[i];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      k.h * static_cast<double>(i), v[0], v[1], v[2], v[3]);
        out += line;
    }
    return out;
}

std::string rates_to_json(const RateMatrix& r) {
    nlohmann::json j;
    if (r.nonintegrable) {
        j["k"] = nullptr;
        j["nonintegrable"] = true;
    } else {
        j["k"] = r.k;
        j["nonintegrable"] = false;
    }
    j["horizon"] = r.horizon;
    j["tail_exponent"] = std::isfinite(r.tail_exponent) ? nlohmann::json(r.tail_exponent)
                                                        : nlohmann::json(nullptr);
    j["converged"] = r.converged;
    return j.dump(2);
}

} // namespace fpheom
