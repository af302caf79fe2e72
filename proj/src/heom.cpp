#include "fpheom/heom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fpheom {

PropagatorConfig::PropagatorConfig(double dt, double t_final, int record_stride,
                                   double max_abs_rate)
    : dt(dt), t_final(t_final), record_stride(record_stride) {
    if (!(dt > 0.0))
        throw DomainError("PropagatorConfig: dt must be > 0");
    if (!(t_final > 0.0))
        throw DomainError("PropagatorConfig: t_final must be > 0");
    if (record_stride < 1)
        throw DomainError("PropagatorConfig: record_stride must be >= 1");
    if (dt * max_abs_rate > 0.1 * (1.0 + 1e-12))
        throw DomainError("PropagatorConfig: dt * max|z| = " + std::to_string(dt * max_abs_rate) +
                          " violates the stability bound 0.1");
}

PropagatorConfig PropagatorConfig::auto_config(const SpinSystem& sys, const ModeSet& modes,
                                               double t_final, int record_stride) {
    const double zmax = modes.max_abs_rate();
    const double sys_scale = std::max(std::abs(sys.epsilon) + std::abs(sys.delta), 1.0);
    double dt = 0.05 / sys_scale;
    if (zmax > 0.0) dt = std::min(dt, 0.1 / zmax);
    return PropagatorConfig(dt, t_final, record_stride, zmax);
}

Eigen::Map<const Mat2> HierarchyState::ado(std::size_t ordinal) const {
    return Eigen::Map<const Mat2>(ados.data() + 4 * ordinal);
}

void HierarchyState::set_ado(std::size_t ordinal, const Mat2& m) {
    Eigen::Map<Mat2>(ados.data() + 4 * ordinal) = m;
}

HeomOperator::HeomOperator(const SpinSystem& sys, const ModeSet& modes, int L,
                           std::size_t max_ados, unsigned flip_branch_mask)
    : sys_(sys),
      idx_(enumerate_hierarchy(static_cast<int>(modes.size()), L, max_ados)),
      K_(static_cast<int>(modes.size())),
      eps_(sys.epsilon),
      del_(sys.delta) {
    const std::size_t n = idx_.size();
    damp_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* e = idx_.exponents(i);
        cplx acc = 0.0;
        for (int k = 0; k < K_; ++k) {
            acc += static_cast<double>(e[k]) * modes.modes[static_cast<std::size_t>(k)].rate;
            acc += static_cast<double>(e[K_ + k]) *
                   std::conj(modes.modes[static_cast<std::size_t>(k)].rate);
        }
        damp_[i] = acc;
    }
    // sqrt(j d) tables, principal branch fixed once per mode
    sq_d_.assign(static_cast<std::size_t>(K_) * (L + 2), 0.0);
    sq_dc_.assign(static_cast<std::size_t>(K_) * (L + 2), 0.0);
    for (int k = 0; k < K_; ++k) {
        const double sign = (flip_branch_mask >> k) & 1u ? -1.0 : 1.0;
        const cplx d = modes.modes[static_cast<std::size_t>(k)].amplitude;
        for (int j = 0; j <= L + 1; ++j) {
            sq_d_[static_cast<std::size_t>(k) * (L + 2) + j] =
                sign * std::sqrt(static_cast<double>(j) * d);
            sq_dc_[static_cast<std::size_t>(k) * (L + 2) + j] =
                sign * std::sqrt(static_cast<double>(j) * std::conj(d));
        }
    }
}

// Hierarchy right-hand side. Per ADO:
//   dot(rho) = -i[H, rho] - damp*rho
//              - i sum_k sqrt((m_k+1) d_k)      [q, rho(m_k+)]
//              - i sum_k sqrt((n_k+1) conj d_k) [q, rho(n_k+)]
//              - i sum_k sqrt(m_k d_k)           q rho(m_k-)
//              + i sum_k sqrt(n_k conj d_k)        rho(n_k-) q
// with q = sigma_z; absent neighbors contribute zero (hard terminator).
// Flat layout is column-major per 2x2 block (Eigen convention):
// a[0]=a00, a[1]=a10, a[2]=a01, a[3]=a11.
void HeomOperator::rhs(const cplx* state, cplx* out) const {
    const std::size_t n = idx_.size();
    const int K = K_;
    const int L2 = idx_.tier_cap() + 2;
    const std::uint32_t* upm = idx_.up_m().data();
    const std::uint32_t* upn = idx_.up_n().data();
    const std::uint32_t* dnm = idx_.dn_m().data();
    const std::uint32_t* dnn = idx_.dn_n().data();
    const double eps = eps_, del = del_;
    const cplx mi(0.0, -1.0);

#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const cplx* a = state + 4 * i;
        const cplx a00 = a[0], a10 = a[1], a01 = a[2], a11 = a[3];
        // -i [H, a] with H = eps sz + del sx:
        //   [H,a]00 = del (a10 - a01);       [H,a]01 = 2 eps a01 + del (a11 - a00)
        //   [H,a]10 = -2 eps a10 + del(a00 - a11);  [H,a]11 = del (a01 - a10)
        cplx r00 = mi * (del * (a10 - a01));
        cplx r01 = mi * (2.0 * eps * a01 + del * (a11 - a00));
        cplx r10 = mi * (-2.0 * eps * a10 + del * (a00 - a11));
        cplx r11 = mi * (del * (a01 - a10));
        const cplx dmp = damp_[i];
        r00 -= dmp * a00;
        r01 -= dmp * a01;
        r10 -= dmp * a10;
        r11 -= dmp * a11;

        const std::uint8_t* e = idx_.exponents(i);
        const std::size_t base = i * static_cast<std::size_t>(K);
        for (int k = 0; k < K; ++k) {
            const int mk = e[k], nk = e[K + k];
            const std::uint32_t um = upm[base + k];
            if (um != HierarchyIndexSet::npos) {
                // -i c [q, b]: [q,b]00 = [q,b]11 = 0, [q,b]01 = 2 b01, [q,b]10 = -2 b10
                const cplx c = mi * sq_d_[static_cast<std::size_t>(k) * L2 + mk + 1];
                const cplx* b = state + 4 * um;
                r01 += c * (2.0 * b[2]);
                r10 += c * (-2.0 * b[1]);
            }
            const std::uint32_t un = upn[base + k];
            if (un != HierarchyIndexSet::npos) {
                const cplx c = mi * sq_dc_[static_cast<std::size_t>(k) * L2 + nk + 1];
                const cplx* b = state + 4 * un;
                r01 += c * (2.0 * b[2]);
                r10 += c * (-2.0 * b[1]);
            }
            const std::uint32_t dm = dnm[base + k];
            if (dm != HierarchyIndexSet::npos) {
                // -i c q b: (q b)0j = b0j, (q b)1j = -b1j
                const cplx c = mi * sq_d_[static_cast<std::size_t>(k) * L2 + mk];
                const cplx* b = state + 4 * dm;
                r00 += c * b[0];
                r01 += c * b[2];
                r10 -= c * b[1];
                r11 -= c * b[3];
            }
            const std::uint32_t dn = dnn[base + k];
            if (dn != HierarchyIndexSet::npos) {
                // +i c b q: (b q)i0 = bi0, (b q)i1 = -bi1
                const cplx c = -mi * sq_dc_[static_cast<std::size_t>(k) * L2 + nk];
                const cplx* b = state + 4 * dn;
                r00 += c * b[0];
                r01 -= c * b[2];
                r10 += c * b[1];
                r11 -= c * b[3];
            }
        }
        cplx* o = out + 4 * i;
        o[0] = r00;
        o[1] = r10;
        o[2] = r01;
        o[3] = r11;
    }
}

std::vector<cplx> heom_rhs(const HierarchyState& state, const SpinSystem& sys,
                           const ModeSet& modes) {
    if (!state.index_set)
        throw DomainError("heom_rhs: state has no index set");
    if (static_cast<int>(modes.size()) != state.index_set->num_modes())
        throw DomainError("heom_rhs: mode count does not match the state's hierarchy");
    HeomOperator op(sys, modes, state.index_set->tier_cap());
    std::vector<cplx> out(state.ados.size());
    op.rhs(state.ados.data(), out.data());
    return out;
}

namespace {

void check_initial(const Mat2& rho) {
    if (std::abs(rho(0, 0).imag()) > 1e-12 || std::abs(rho(1, 1).imag()) > 1e-12 ||
        std::abs(rho(0, 1) - std::conj(rho(1, 0))) > 1e-12)
        throw DomainError("propagate: initial density matrix must be Hermitian");
    if (std::abs(rho(0, 0).real() + rho(1, 1).real() - 1.0) > 1e-12)
        throw DomainError("propagate: initial density matrix must have unit trace");
}

} // namespace

Trajectory propagate(const Mat2& initial, const SpinSystem& sys, const ModeSet& modes,
                     const PropagatorConfig& cfg, int L, std::size_t max_ados,
                     unsigned flip_branch_mask, HierarchyState* final_state) {
    check_initial(initial);
    HeomOperator op(sys, modes, L, max_ados, flip_branch_mask);
    const std::size_t n = op.indices().size();
    const std::size_t len = 4 * n;

    std::vector<cplx> y(len, 0.0), k1(len), k2(len), k3(len), k4(len), tmp(len);
    Eigen::Map<Mat2>(y.data()) = initial;

    const double dt = cfg.dt;
    const long long steps = static_cast<long long>(std::ceil(cfg.t_final / dt - 1e-9));

    Trajectory traj;
    traj.ado_count = n;
    traj.dt = dt;

    auto record = [&](double t) {
        const Mat2 rho = Eigen::Map<const Mat2>(y.data());
        traj.times.push_back(t);
        traj.reduced.push_back(rho);
        const cplx tr = y[0] + y[3];
        const cplx p = y[0] - y[3];
        traj.population.push_back(p.real());
        traj.trace_error.push_back(std::abs(tr - 1.0));
        traj.max_imag_population = std::max(traj.max_imag_population, std::abs(p.imag()));
    };
    record(0.0);

    auto axpy_eval = [&](const std::vector<cplx>& base, const std::vector<cplx>& slope,
                         double h, std::vector<cplx>& stage_out) {
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(len); ++j)
            tmp[static_cast<std::size_t>(j)] =
                base[static_cast<std::size_t>(j)] + h * slope[static_cast<std::size_t>(j)];
        op.rhs(tmp.data(), stage_out.data());
    };

    for (long long s = 0; s < steps; ++s) {
        op.rhs(y.data(), k1.data());
        axpy_eval(y, k1, 0.5 * dt, k2);
        axpy_eval(y, k2, 0.5 * dt, k3);
        axpy_eval(y, k3, dt, k4);
        const double w = dt / 6.0;
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(len); ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            y[u] += w * (k1[u] + 2.0 * k2[u] + 2.0 * k3[u] + k4[u]);
        }
        const double t = dt * static_cast<double>(s + 1);
        if (!std::isfinite(y[0].real()) || !std::isfinite(y[3].real()) ||
            std::abs(y[0]) > 1e6)
            throw NumericalError("propagate: non-finite state at t = " + std::to_string(t) +
                                     "; reduce dt or check truncation stability",
                                 dt * static_cast<double>(s));
        if ((s + 1) % cfg.record_stride == 0) record(t);
    }

    if (final_state) {
        // detached snapshot (ados + time); callers owning an index set can
        // attach it themselves
        final_state->index_set = nullptr;
        final_state->ados = y;
        final_state->time = dt * static_cast<double>(steps);
    }
    return traj;
}

PopulationSeries observe_population(const Trajectory& traj) {
    if (traj.times.empty())
        throw DomainError("observe_population: empty trajectory");
    PopulationSeries ps;
    ps.values = traj.population;
    ps.h = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
    return ps;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t,P,re_rho00,re_rho11,re_rho01,im_rho01,trace_error\n";
    char line[256];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Mat2& r = traj.reduced[i];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      traj.times[i], traj.population[i], r(0, 0).real(), r(1, 1).real(),
                      r(0, 1).real(), r(0, 1).imag(), traj.trace_error[i]);
        out += line;
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
    Trajectory traj;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,P,", 0) != 0)
        throw ValidationError("trajectory_from_csv: missing header row");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, p, r00, r11, r01r, r01i, te;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg,%lg,%lg", &t, &p, &r00, &r11, &r01r,
                        &r01i, &te) != 7)
            throw ValidationError("trajectory_from_csv: malformed row: " + line);
        Mat2 rho;
        rho << cplx(r00, 0.0), cplx(r01r, r01i), cplx(r01r, -r01i), cplx(r11, 0.0);
        traj.times.push_back(t);
        traj.reduced.push_back(rho);
        traj.population.push_back(p);
        traj.trace_error.push_back(te);
    }
    return traj;
}

std::string hierarchy_state_to_json(const HierarchyState& st) {
    nlohmann::json j;
    j["time"] = st.time;
    j["ados"] = nlohmann::json::array();
    for (std::size_t i = 0; i + 3 < st.ados.size(); i += 4) {
        j["ados"].push_back({{"re", {st.ados[i].real(), st.ados[i + 1].real(),
                                     st.ados[i + 2].real(), st.ados[i + 3].real()}},
                             {"im", {st.ados[i].imag(), st.ados[i + 1].imag(),
                                     st.ados[i + 2].imag(), st.ados[i + 3].imag()}}});
    }
    return j.dump();
}

} // namespace fpheom
