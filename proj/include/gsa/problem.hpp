#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gsa/errors.hpp"
#include "gsa/hnorm.hpp"
#include "gsa/types.hpp"

namespace gsa {

enum class DriftKind { Linear, DoubleWell, Custom };

/// Per-node drift maps h^i : R^d -> R^d with certified regularity constants.
///
/// linear       h^i(x) = -rate (x - target_i)
/// double_well  d = 1, h^i(x) = g(x) + offset_i with g(x) = x - x^3 saturated
///              outside |x| <= clamp so the map is globally Lipschitz.
/// custom       arbitrary callables; the caller supplies the constants.
struct DriftField {
    DriftKind kind = DriftKind::Linear;
    int nodes = 1;
    int dim = 1;

    double rate = 1.0;
    Matrix targets;  // linear: nodes x dim
    Vector offsets;  // double_well: per-node additive constant
    double clamp = 2.5;
    std::vector<std::function<Vector(const Vector&)>> custom;

    double lip_scalar = 1.0;   // per-node Lipschitz constant
    bool lip_exact_in_h = false;  // scalar affine maps contract identically in any norm
    double k1 = 1.0;           // ||h(X)||_F <= k1 (1 + ||X||_F)

    [[nodiscard]] Vector eval_node(int i, const Vector& x) const {
        switch (kind) {
            case DriftKind::Linear:
                return -rate * (x - targets.row(i).transpose());
            case DriftKind::DoubleWell: {
                const double xc = std::clamp(x(0), -clamp, clamp);
                Vector out(1);
                out(0) = xc - xc * xc * xc + offsets(i);
                return out;
            }
            case DriftKind::Custom:
                return custom[static_cast<std::size_t>(i)](x);
        }
        return Vector::Zero(dim);
    }

    /// Row i of `out` receives h^i applied to row i of X.
    void eval_into(const Matrix& X, Matrix& out) const {
        if (kind == DriftKind::Linear) {
            out.noalias() = -rate * (X - targets);
            return;
        }
        if (kind == DriftKind::DoubleWell) {
            for (int i = 0; i < nodes; ++i) {
                const double xc = std::clamp(X(i, 0), -clamp, clamp);
                out(i, 0) = xc - xc * xc * xc + offsets(i);
            }
            return;
        }
        for (int i = 0; i < nodes; ++i)
            out.row(i) = custom[static_cast<std::size_t>(i)](X.row(i).transpose()).transpose();
    }

    /// Certified H-norm Lipschitz constant given the metric. Entrywise maps
    /// with sign-varying derivatives need the sqrt(lambda_max) factor; scalar
    /// affine maps (the linear kind) contract identically under every norm.
    [[nodiscard]] double lipschitz_h(const HMetric& hm) const {
        return lip_exact_in_h ? lip_scalar : lip_scalar * std::sqrt(hm.lambda_max);
    }
};

inline DriftField make_linear_drift(const Matrix& targets, double rate = 1.0) {
    DriftField f;
    f.kind = DriftKind::Linear;
    f.nodes = static_cast<int>(targets.rows());
    f.dim = static_cast<int>(targets.cols());
    f.rate = rate;
    f.targets = targets;
    f.lip_scalar = rate;
    f.lip_exact_in_h = true;
    f.k1 = rate * std::max(1.0, targets.norm());
    return f;
}

inline DriftField make_double_well_drift(const Vector& offsets, double clamp = 2.5) {
    if (clamp < 1.0) throw DimensionMismatch("double-well clamp must cover the wells");
    DriftField f;
    f.kind = DriftKind::DoubleWell;
    f.nodes = static_cast<int>(offsets.size());
    f.dim = 1;
    f.offsets = offsets;
    f.clamp = clamp;
    f.lip_scalar = 3.0 * clamp * clamp - 1.0;
    // |g| peaks at the clamp edge once clamp >= 1.
    double worst = clamp * clamp * clamp - clamp;
    double fro2 = 0.0;
    for (int i = 0; i < f.nodes; ++i) {
        const double gi = worst + std::abs(offsets(i));
        fro2 += gi * gi;
    }
    f.k1 = std::max(1.0, std::sqrt(fro2));
    return f;
}

/// pi-weighted mean drift h-bar(x) = sum_j pi(j) h^j(x); the vector field of
/// the averaged dynamics.
inline Vector averaged_drift(const DriftField& drift, const Vector& pi, const Vector& x) {
    Vector acc = Vector::Zero(drift.dim);
    for (int j = 0; j < drift.nodes; ++j) acc += pi(j) * drift.eval_node(j, x);
    return acc;
}

/// State-scaled, entrywise-uniform martingale difference noise.
///
/// Each entry is uniform on [-beta (1 + ||X||_F), +beta (1 + ||X||_F)]:
/// zero conditional mean, hard amplitude bound by construction, and a
/// conditional exponential moment E[exp(|entry|)] <= exp(beta (1 + K5))
/// whenever the state stays in the working region.
struct NoiseModel {
    double beta = 0.0;

    void sample_into(const Matrix& X, Rng& rng, Matrix& out) const {
        if (beta == 0.0) {
            out.setZero();
            return;
        }
        const double amp = beta * (1.0 + X.norm());
        for (int i = 0; i < X.rows(); ++i)
            for (int j = 0; j < X.cols(); ++j) out(i, j) = rng.uniform(-amp, amp);
    }

    /// H-norm growth constant: ||noise||_H <= k2 (1 + ||X||_F).
    [[nodiscard]] double k2(const HMetric& hm, int nodes, int dim) const {
        const double lam = std::max(hm.Lambda, hm.lambda_max);
        return beta * std::sqrt(lam * nodes * dim);
    }

    [[nodiscard]] double kappa() const { return 1.0; }

    /// Conditional MGF bound at exponent kappa within the working region.
    [[nodiscard]] double mgf_bound(double K5) const { return std::exp(beta * (1.0 + K5)); }
};

inline Matrix sample_noise(const NoiseModel& noise, const Matrix& state, Rng& rng) {
    Matrix out(state.rows(), state.cols());
    noise.sample_into(state, rng, out);
    return out;
}

/// Attractor data for a quadratic Lyapunov function V(x) = ||x - center||^2.
///
/// B' is the open ball of radius basin_radius around the center, B-breve the
/// concentric ball of radius breve_radius. Both built-in problems ship this
/// shape; the double well uses it locally around the selected well.
struct AttractorSpec {
    Vector center;
    double epsilon = 0.0;
    double basin_radius = 0.0;
    double breve_radius = 0.0;

    double Delta = 0.0;  // per-window descent margin
    double delta = 0.0;  // tube radius
    double tau = 0.0;    // trapping-time bound
    double v_max = 0.0;  // max V over the closed breve ball
    double K5 = 0.0;     // sup of ||X||_F over the breve product region

    [[nodiscard]] double eval_v(const Vector& x) const { return (x - center).squaredNorm(); }
    [[nodiscard]] Vector grad_v(const Vector& x) const { return 2.0 * (x - center); }
    [[nodiscard]] double level_radius(double level) const {
        return std::sqrt(std::max(level, 0.0));
    }
};

/// Visit every point of a `res`-per-axis product grid over [lo, hi]^d.
template <typename F>
void for_each_grid_point(const Vector& lo, const Vector& hi, int res, F&& fn) {
    const int d = static_cast<int>(lo.size());
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Vector x(d);
    while (true) {
        for (int a = 0; a < d; ++a) {
            const double t = res > 1 ? static_cast<double>(idx[static_cast<std::size_t>(a)]) /
                                           static_cast<double>(res - 1)
                                     : 0.5;
            x(a) = lo(a) + t * (hi(a) - lo(a));
        }
        fn(x);
        int a = 0;
        for (; a < d; ++a) {
            if (++idx[static_cast<std::size_t>(a)] < res) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        if (a == d) return;
    }
}

using FlowMap = std::function<Vector(const Vector&, double)>;

/// Per-window descent margin: 0.9 times the grid minimum of
/// V(x) - V(Phi_T(x)) over the breve ball minus the epsilon sublevel set.
/// Throws NonPositiveMargin when the exterior grid is empty (region equals
/// the sublevel set) or the minimum is not positive (window too short or
/// region not inside the domain of attraction).
inline double descent_margin(const AttractorSpec& spec, const FlowMap& flow, double T,
                             int grid_resolution = 33) {
    const Vector lo = spec.center.array() - spec.breve_radius;
    const Vector hi = spec.center.array() + spec.breve_radius;
    double best = std::numeric_limits<double>::infinity();
    long exterior = 0;
    for_each_grid_point(lo, hi, grid_resolution, [&](const Vector& x) {
        if ((x - spec.center).norm() > spec.breve_radius) return;  // outside the ball
        if (spec.eval_v(x) <= spec.epsilon) return;                // inside the sublevel set
        ++exterior;
        best = std::min(best, spec.eval_v(x) - spec.eval_v(flow(x, T)));
    });
    if (exterior == 0)
        throw NonPositiveMargin("descent margin: no grid points outside the sublevel set");
    if (!(best > 0.0))
        throw NonPositiveMargin("descent margin: grid minimum " + format_full(best) +
                                " is not positive");
    return 0.9 * best;
}

/// Largest dyadic tube radius delta satisfying, simultaneously:
///   (a) the delta-neighbourhood of the sublevel set stays inside B',
///   (b) the delta-neighbourhood of B' stays inside B-breve,
///   (c) points of B-breve at distance delta * ||Pi||_H / sqrt(M) in R^d move
///       V by less than Delta / 3 (closed form for the quadratic V),
///   (d) time-T flow from B' ends at least delta inside the basin boundary
///       (checked on a grid).
inline double choose_delta(const AttractorSpec& spec, const FlowMap& flow, double T,
                           double pi_h_norm, int nodes, int grid_resolution = 33) {
    if (spec.Delta <= 0.0) throw NonPositiveMargin("choose_delta requires a positive margin");
    const double eps_radius = spec.level_radius(spec.epsilon);
    const double osc_scale = pi_h_norm / std::sqrt(static_cast<double>(nodes));

    // Deepest flow endpoint from the basin, reused across candidates.
    double worst_endpoint = 0.0;
    const Vector lo = spec.center.array() - spec.basin_radius;
    const Vector hi = spec.center.array() + spec.basin_radius;
    for_each_grid_point(lo, hi, grid_resolution, [&](const Vector& x) {
        if ((x - spec.center).norm() > spec.basin_radius) return;
        worst_endpoint = std::max(worst_endpoint, (flow(x, T) - spec.center).norm());
    });

    for (int j = 0; j < 60; ++j) {
        const double cand = spec.breve_radius / std::pow(2.0, j);
        if (eps_radius + cand > spec.basin_radius) continue;                 // (a)
        if (spec.basin_radius + cand > spec.breve_radius) continue;          // (b)
        const double dd = cand * osc_scale;
        if (dd * (2.0 * spec.breve_radius + dd) >= spec.Delta / 3.0) continue;  // (c)
        if (worst_endpoint > spec.basin_radius - cand) continue;             // (d)
        return cand;
    }
    throw NonPositiveMargin("no positive tube radius satisfies the nesting conditions");
}

/// Trapping-time bound tau = 3 (max V - epsilon) / Delta * (T + 1).
inline double trapping_time(const AttractorSpec& spec, double T) {
    if (spec.Delta <= 0.0) throw NonPositiveMargin("trapping time requires a positive margin");
    const double drop = std::max(spec.v_max - spec.epsilon, 0.0);
    return 3.0 * drop / spec.Delta * (T + 1.0);
}

/// Problem definition: drift + noise + attractor over a given network size.
struct ProblemInstance {
    int nodes = 1;
    int dim = 1;
    DriftField drift;
    NoiseModel noise;
    AttractorSpec attractor;
};

}  // namespace gsa
