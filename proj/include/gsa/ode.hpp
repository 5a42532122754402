#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsa/errors.hpp"
#include "gsa/hnorm.hpp"
#include "gsa/problem.hpp"
#include "gsa/schedule.hpp"
#include "gsa/types.hpp"

namespace gsa {

/// Integrator controls for the averaged dynamics x' = h-bar(x).
///
/// Classical fourth-order one-step scheme with a fixed step no larger than
/// h_max; the built-in problems are smooth and non-stiff, and fixed steps let
/// dense output land exactly on requested sample times.
struct FlowControl {
    double h_max = 1e-3;
    double guard_radius = 50.0;  // RegionExit beyond this sup-norm
};

namespace detail {

inline void rk4_step(const DriftField& drift, const Vector& pi, Vector& x, double h) {
    const Vector k1 = averaged_drift(drift, pi, x);
    const Vector k2 = averaged_drift(drift, pi, x + 0.5 * h * k1);
    const Vector k3 = averaged_drift(drift, pi, x + 0.5 * h * k2);
    const Vector k4 = averaged_drift(drift, pi, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_state(const Vector& x, const FlowControl& ctl) {
    if (!x.allFinite()) throw NonFinite("flow state is not finite");
    if (x.lpNorm<Eigen::Infinity>() > ctl.guard_radius)
        throw RegionExit("flow left the guard box (radius " + format_full(ctl.guard_radius) + ")");
}

}  // namespace detail

/// Time-t flow map of the averaged dynamics.
inline Vector flow(const DriftField& drift, const Vector& pi, const Vector& x0, double t,
                   const FlowControl& ctl = {}) {
    if (t < 0.0) throw OutOfDomain("flow requires t >= 0");
    Vector x = x0;
    if (t == 0.0) return x;
    const double h_cap = std::min(ctl.h_max, 1e-3);
    const long steps = static_cast<long>(std::ceil(t / h_cap));
    const double h = t / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
        detail::rk4_step(drift, pi, x, h);
        detail::check_state(x, ctl);
    }
    return x;
}

/// Reference trajectory over one epoch: the averaged dynamics started from
/// the pi-average of the iterate rows at the epoch's opening time, with dense
/// output at every requested sample time.
struct ReferenceSegment {
    std::size_t epoch = 0;
    Vector start;                 // x(T_k) = pi-average of the rows at n_k
    std::vector<double> times;    // sorted sample times in [T_k, T_{k+1}]
    std::vector<Vector> states;   // x(times[i])

    [[nodiscard]] Matrix lifted(std::size_t i, int nodes) const {
        return Vector::Ones(nodes) * states[i].transpose();
    }
};

/// Integrate one epoch of the reference trajectory with dense output at the
/// given times (must be sorted, first entry = epoch start time). Substeps
/// within each sample gap are capped both by h_max and, per the epoch's
/// construction, by the smallest stepsize in the window so output aligns with
/// every iterate knot.
inline ReferenceSegment integrate_segment(const DriftField& drift, const Vector& pi,
                                          const Vector& x0, const std::vector<double>& times,
                                          double h_cap, const FlowControl& ctl = {}) {
    ReferenceSegment seg;
    seg.start = x0;
    seg.times = times;
    seg.states.reserve(times.size());
    Vector x = x0;
    seg.states.push_back(x);
    const double h_eff = std::min(std::min(ctl.h_max, 1e-3), h_cap);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double gap = times[i] - times[i - 1];
        if (gap < 0.0) throw OutOfDomain("segment sample times must be sorted");
        if (gap == 0.0) {
            seg.states.push_back(x);
            continue;
        }
        const long steps = std::max<long>(1, static_cast<long>(std::ceil(gap / h_eff)));
        const double h = gap / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) detail::rk4_step(drift, pi, x, h);
        detail::check_state(x, ctl);
        seg.states.push_back(x);
    }
    return seg;
}

/// Drift ceiling along windows of reference flow:
///   C_T = 1.1 * max over a time x space grid of || h(1 Phi_t(x)^T) ||_H,
/// the maximum taken over t in [0, T] and x in the closed breve ball. The
/// 10% inflation absorbs grid and interpolation slack, keeping every constant
/// derived from C_T conservative.
inline double estimate_C_T(const DriftField& drift, const Vector& pi, const AttractorSpec& spec,
                           const HMetric& hm, double T, int space_resolution = 17,
                           int time_resolution = 9, const FlowControl& ctl = {}) {
    const Vector lo = spec.center.array() - spec.breve_radius;
    const Vector hi = spec.center.array() + spec.breve_radius;
    const int nodes = static_cast<int>(hm.H.rows());
    Matrix lift(nodes, drift.dim);
    Matrix hval(nodes, drift.dim);
    double worst = 0.0;
    for_each_grid_point(lo, hi, space_resolution, [&](const Vector& x) {
        if ((x - spec.center).norm() > spec.breve_radius) return;
        Vector cur = x;
        double t_prev = 0.0;
        for (int ti = 0; ti <= time_resolution; ++ti) {
            const double t = T * static_cast<double>(ti) / static_cast<double>(time_resolution);
            if (t > t_prev) {
                const double gap = t - t_prev;
                const long steps =
                    std::max<long>(1, static_cast<long>(std::ceil(gap / std::min(ctl.h_max, 1e-3))));
                const double h = gap / static_cast<double>(steps);
                for (long s = 0; s < steps; ++s) detail::rk4_step(drift, pi, cur, h);
                detail::check_state(cur, ctl);
                t_prev = t;
            }
            lift = Vector::Ones(nodes) * cur.transpose();
            drift.eval_into(lift, hval);
            worst = std::max(worst, hm.norm(hval));
        }
    });
    return 1.1 * worst;
}

}  // namespace gsa
