#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gsa/errors.hpp"
#include "gsa/gossip.hpp"
#include "gsa/problem.hpp"
#include "gsa/schedule.hpp"
#include "gsa/types.hpp"

namespace gsa {

/// One realized trajectory of the distributed iteration together with every
/// noise draw, so downstream perturbation sums use exactly the realized
/// noise. Write-once, then read-only.
struct RunRecord {
    int nodes = 0;
    int dim = 0;
    std::uint64_t seed = 0;
    bool boundedness_flag = true;  // stayed below the cap throughout
    long n_completed = 0;          // last stored iterate index
    long cap_step = -1;            // first index that breached the cap, if any
    std::vector<Matrix> X;         // X[n], n = 0..n_completed
    std::vector<Matrix> noise;     // noise[n] is the draw used in step n -> n+1
};

/// One update of the distributed recursion:
///   X(n+1) = P X(n) + a_n (h(X(n)) + noise draw).
/// The draw is written to noise_out (same shape as X) when non-null.
inline Matrix step_update(const Matrix& X, const Matrix& P, const DriftField& drift,
                          const NoiseModel& noise, double a_n, Rng& rng,
                          Matrix* noise_out = nullptr) {
    Matrix hval(X.rows(), X.cols());
    drift.eval_into(X, hval);
    Matrix draw(X.rows(), X.cols());
    noise.sample_into(X, rng, draw);
    Matrix next = P * X + a_n * (hval + draw);
    if (!next.allFinite()) throw NonFinite("iterate became non-finite");
    if (noise_out) *noise_out = draw;
    return next;
}

/// Run the iteration from X0 for n_max steps, recording every iterate and
/// noise draw. If the Frobenius norm of an iterate exceeds `cap`, recording
/// stops there and boundedness_flag is cleared; such replicas are excluded
/// from conditional statistics by the callers.
inline RunRecord run(const ProblemInstance& problem, const GossipModel& gossip,
                     const StepSchedule& sched, const Matrix& X0, long n_max, std::uint64_t seed,
                     double cap = 1e6) {
    RunRecord rec;
    rec.nodes = problem.nodes;
    rec.dim = problem.dim;
    rec.seed = seed;
    rec.X.reserve(static_cast<std::size_t>(n_max) + 1);
    rec.noise.reserve(static_cast<std::size_t>(n_max));

    Rng rng(seed);
    Matrix X = X0;
    rec.X.push_back(X);
    if (X.norm() > cap) {
        rec.boundedness_flag = false;
        rec.cap_step = 0;
        rec.n_completed = 0;
        return rec;
    }
    Matrix hval(X.rows(), X.cols());
    Matrix draw(X.rows(), X.cols());
    Matrix next(X.rows(), X.cols());
    for (long n = 0; n < n_max; ++n) {
        problem.drift.eval_into(X, hval);
        problem.noise.sample_into(X, rng, draw);
        next.noalias() = gossip.P * X;
        next += sched.a(n) * (hval + draw);
        if (!next.allFinite())
            throw NonFinite("iterate became non-finite at step " + std::to_string(n + 1));
        rec.noise.push_back(draw);
        rec.X.push_back(next);
        X.swap(next);
        if (X.norm() > cap) {
            rec.boundedness_flag = false;
            rec.cap_step = n + 1;
            break;
        }
    }
    rec.n_completed = static_cast<long>(rec.X.size()) - 1;
    return rec;
}

/// Piecewise-linear interpolant of a recorded trajectory on the cumulative
/// time axis: exact at the knots t(n), affine between them.
struct InterpolatedPath {
    const RunRecord* record = nullptr;
    const TimeGrid* grid = nullptr;

    [[nodiscard]] double t_min() const { return grid->t[0]; }
    [[nodiscard]] double t_max() const {
        return grid->t[static_cast<std::size_t>(record->n_completed)];
    }

    [[nodiscard]] Matrix operator()(double t) const {
        if (t < t_min() - 1e-12 || t > t_max() + 1e-12)
            throw OutOfDomain("interpolation time " + format_full(t) + " outside [" +
                              format_full(t_min()) + ", " + format_full(t_max()) + "]");
        t = std::clamp(t, t_min(), t_max());
        const auto& ts = grid->t;
        const auto hi_it =
            std::lower_bound(ts.begin(), ts.begin() + record->n_completed + 1, t);
        std::size_t hi = static_cast<std::size_t>(hi_it - ts.begin());
        if (hi == 0) return record->X[0];
        const std::size_t lo = hi - 1;
        const double gap = ts[hi] - ts[lo];
        const double lam = gap > 0.0 ? (t - ts[lo]) / gap : 0.0;
        return (1.0 - lam) * record->X[lo] + lam * record->X[hi];
    }
};

inline Matrix interpolate(const RunRecord& rec, const TimeGrid& grid, double t) {
    return InterpolatedPath{&rec, &grid}(t);
}

/// Distance from consensus: ||X - Pi X||_F.
inline double disagreement(const Matrix& X, const GossipModel& gossip) {
    return (X - gossip.Pi * X).norm();
}

}  // namespace gsa
