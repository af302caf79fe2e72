#ifndef FPHEOM_HEOM_HPP
#define FPHEOM_HEOM_HPP

#include <optional>
#include <string>
#include <vector>

#include "fpheom/aaa.hpp"
#include "fpheom/hierarchy.hpp"
#include "fpheom/types.hpp"

namespace fpheom {

// Fixed-step RK4 settings. Construction enforces dt * max|z_k| <= 0.1.
struct PropagatorConfig {
    double dt = 0.0;
    double t_final = 10.0;
    int record_stride = 1;

    PropagatorConfig() = default;
    PropagatorConfig(double dt, double t_final, int record_stride, double max_abs_rate);

    // dt = min(0.1/max|z|, 0.05/max(|eps|+|delta|, 1))
    static PropagatorConfig auto_config(const SpinSystem& sys, const ModeSet& modes,
                                        double t_final, int record_stride = 1);
};

// Full hierarchy state at one instant: 2x2 blocks stored contiguously,
// ado(i) = [a00 a01; a10 a11] at offset 4*i.
struct HierarchyState {
    const HierarchyIndexSet* index_set = nullptr;
    std::vector<cplx> ados;
    double time = 0.0;

    Eigen::Map<const Mat2> ado(std::size_t ordinal) const;
    void set_ado(std::size_t ordinal, const Mat2& m);
};

// Precomputed coupling tables for the right-hand side of the hierarchy
// evolution. flip_branch_mask toggles the sign of sqrt(d_k) per mode
// (gauge choice; physical observables must not depend on it).
class HeomOperator {
public:
    HeomOperator(const SpinSystem& sys, const ModeSet& modes, int L,
                 std::size_t max_ados = 5000000, unsigned flip_branch_mask = 0);

    const HierarchyIndexSet& indices() const { return idx_; }
    const SpinSystem& system() const { return sys_; }
    int num_modes() const { return K_; }

    // dy/dx for the full ADO stack (length 4*N), evaluated in parallel.
    void rhs(const cplx* state, cplx* out) const;

private:
    SpinSystem sys_;
    HierarchyIndexSet idx_;
    int K_;
    std::vector<cplx> damp_;       // per-ADO sum of m_k z_k + n_k z_k*
    std::vector<cplx> sq_d_;       // sqrt(j d_k),  k*(L+2)+j
    std::vector<cplx> sq_dc_;      // sqrt(j conj(d_k))
    double eps_, del_;
};

// Convenience wrapper matching the module contract: derivative of a full
// hierarchy state under (sys, modes) with the state's own truncation.
std::vector<cplx> heom_rhs(const HierarchyState& state, const SpinSystem& sys,
                           const ModeSet& modes);

struct Trajectory {
    std::vector<double> times;
    std::vector<Mat2> reduced;        // rho_{0,0}(t)
    std::vector<double> population;   // Re Tr[sigma_z rho]
    std::vector<double> trace_error;  // |Tr rho - 1|
    double max_imag_population = 0.0; // diagnostic: worst Im Tr[sigma_z rho]
    std::size_t ado_count = 0;
    double dt = 0.0;
};

struct PopulationSeries {
    double h = 0.0;                 // uniform spacing
    std::vector<double> values;     // P(t_i), t_i = i*h

    double t_final() const { return h * static_cast<double>(values.size() - 1); }
};

// RK4 propagation of the truncated hierarchy from a factorized initial
// state: rho_{0,0}(0) = initial, all other ADOs zero. Optionally captures
// the full final hierarchy state.
Trajectory propagate(const Mat2& initial, const SpinSystem& sys, const ModeSet& modes,
                     const PropagatorConfig& cfg, int L, std::size_t max_ados = 5000000,
                     unsigned flip_branch_mask = 0,
                     HierarchyState* final_state = nullptr);

// P(t) = Tr[sigma_z rho_{0,0}(t)] on the trajectory's recording grid.
PopulationSeries observe_population(const Trajectory& traj);

// CSV with columns t,P,re_rho00,re_rho11,re_rho01,im_rho01,trace_error.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);

// Debug-only JSON dump of a full hierarchy state.
std::string hierarchy_state_to_json(const HierarchyState& st);

} // namespace fpheom

#endif
