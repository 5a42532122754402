#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gsa/errors.hpp"
#include "gsa/types.hpp"

namespace gsa {

enum class ScheduleKind { Harmonic, LogHarmonic, Power, Constant, Table };

inline const char* to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Harmonic: return "harmonic";
        case ScheduleKind::LogHarmonic: return "log_harmonic";
        case ScheduleKind::Power: return "power";
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::Table: return "table";
    }
    return "?";
}

/// Stepsize sequence a(n).
///
/// Built-in kinds (scale s > 0):
///   harmonic      a(n) = s / (1 + n)
///   log_harmonic  a(n) = s / (1 + n log(max(n, 2)))
///   power         a(n) = s / (1 + n)^gamma, or s / (1 + n^gamma) with inner=true
///   constant      a(n) = s
///   table         explicit finite list, horizon-bounded use only
///
/// `c` is the quasi-monotonicity constant (a(m) <= c a(n) for m >= n);
/// 1 suffices for every non-increasing kind above.
struct StepSchedule {
    ScheduleKind kind = ScheduleKind::Harmonic;
    double scale = 1.0;
    double gamma = 1.0;
    bool inner = false;
    std::vector<double> table;
    double c = 1.0;

    [[nodiscard]] double a(long n) const {
        switch (kind) {
            case ScheduleKind::Harmonic:
                return scale / (1.0 + static_cast<double>(n));
            case ScheduleKind::LogHarmonic: {
                const double nn = static_cast<double>(n);
                return scale / (1.0 + nn * std::log(std::max(nn, 2.0)));
            }
            case ScheduleKind::Power: {
                const double nn = static_cast<double>(n);
                return inner ? scale / (1.0 + std::pow(nn, gamma))
                             : scale / std::pow(1.0 + nn, gamma);
            }
            case ScheduleKind::Constant:
                return scale;
            case ScheduleKind::Table:
                if (n < 0 || n >= static_cast<long>(table.size()))
                    throw HorizonExceeded("table schedule index " + std::to_string(n) +
                                          " beyond table of size " + std::to_string(table.size()));
                return table[static_cast<std::size_t>(n)];
        }
        return 0.0;
    }

    /// Conservative upper bound on the tail of squares b(n) = sum_{m>=n} a(m)^2:
    /// an exact partial sum over the next kPartialTerms steps plus a closed-form
    /// integral-comparison tail. Keeping this an upper bound keeps every
    /// tracking constant derived from it conservative.
    [[nodiscard]] double b_upper(long n) const {
        static constexpr long kPartialTerms = 256;
        if (kind == ScheduleKind::Constant) return std::numeric_limits<double>::infinity();
        if (kind == ScheduleKind::Table) {
            double s = 0.0;
            for (long m = n; m < static_cast<long>(table.size()); ++m) s += a(m) * a(m);
            return s;
        }
        double partial = 0.0;
        const long tail_start = n + kPartialTerms;
        for (long m = n; m < tail_start; ++m) partial += a(m) * a(m);
        return partial + analytic_tail(tail_start);
    }

private:
    // Upper bound on sum_{m>=N} a(m)^2 for the closed-form kinds, N >= 4.
    [[nodiscard]] double analytic_tail(long N) const {
        const double s2 = scale * scale;
        const double Nd = static_cast<double>(N);
        switch (kind) {
            case ScheduleKind::Harmonic:
                // sum_{m>=N} (1+m)^{-2} <= 1/N
                return s2 / Nd;
            case ScheduleKind::LogHarmonic: {
                // a(m) <= s/(m ln m) for m >= 3, integral comparison from N-1
                const double x = Nd - 1.0;
                const double lx = std::log(x);
                return s2 / (x * lx * lx);
            }
            case ScheduleKind::Power: {
                if (2.0 * gamma <= 1.0) return std::numeric_limits<double>::infinity();
                const double p = 2.0 * gamma - 1.0;
                if (!inner) return s2 * std::pow(Nd, -p) / p;
                // a(m) <= s/m^gamma for m >= 1
                return s2 * std::pow(Nd - 1.0, -p) / p;
            }
            default:
                return 0.0;
        }
    }
};

/// m(n): first index k >= n with sum_{i=n}^k a(i) >= T. Throws
/// HorizonExceeded if the partial sums do not reach T within `horizon` steps.
inline long window_end(const StepSchedule& sched, long n, double T, long horizon) {
    if (T <= 0.0) return n;
    double acc = 0.0;
    for (long k = n; k <= n + horizon; ++k) {
        acc += sched.a(k);
        if (acc >= T) return k;
    }
    throw HorizonExceeded("window of length " + format_full(T) + " not reached from n=" +
                          std::to_string(n) + " within " + std::to_string(horizon) + " steps");
}

/// One admissibility condition verdict.
struct ScheduleCondition {
    std::string name;
    bool pass = false;
    bool analytic = false;  // decided per-kind rather than numerically
    std::string detail;
};

struct AdmissibilityReport {
    std::vector<ScheduleCondition> conditions;
    bool admissible = false;
    double c = 1.0;
    /// Literal window constant: 1.1 * sup over probes of (m(n)-n)/T_probe.
    double c_star_window = 0.0;
    double t_probe = 1.0;

    [[nodiscard]] const ScheduleCondition* find(const std::string& name) const {
        for (const auto& cond : conditions)
            if (cond.name == name) return &cond;
        return nullptr;
    }
};

namespace detail {

// Divergence of sum a(n) and summability of sum a(n)^2 are series facts per
// kind; numeric truncation cannot decide them.
inline void series_verdicts(const StepSchedule& s, ScheduleCondition& div, ScheduleCondition& sq) {
    div.analytic = sq.analytic = true;
    switch (s.kind) {
        case ScheduleKind::Harmonic:
        case ScheduleKind::LogHarmonic:
            div.pass = true;
            sq.pass = true;
            break;
        case ScheduleKind::Power:
            div.pass = s.gamma <= 1.0;
            sq.pass = s.gamma > 0.5;
            if (!div.pass) div.detail = "gamma > 1: stepsize sum converges";
            if (!sq.pass) sq.detail = "gamma <= 1/2: squared sum diverges";
            break;
        case ScheduleKind::Constant:
            div.pass = true;
            sq.pass = false;
            sq.detail = "constant stepsize: squared sum diverges";
            break;
        case ScheduleKind::Table:
            div.pass = sq.pass = true;
            div.analytic = sq.analytic = false;
            div.detail = sq.detail = "finite table, horizon-bounded use";
            break;
    }
}

// The window condition: the number of steps needed to accumulate a fixed
// window length must stay commensurate with 1/a(n), which for the built-in
// kinds reduces to the tail comparison b(n) <= C a(n). Harmonic and
// log-harmonic satisfy it; powers with gamma < 1 do not.
inline void window_verdict(const StepSchedule& s, long horizon, ScheduleCondition& win) {
    switch (s.kind) {
        case ScheduleKind::Harmonic:
        case ScheduleKind::LogHarmonic:
            win.analytic = true;
            win.pass = true;
            break;
        case ScheduleKind::Power:
            win.analytic = true;
            win.pass = s.gamma >= 1.0;
            if (!win.pass)
                win.detail = "gamma < 1: window step count grows faster than 1/a(n) "
                             "(tail sum b(n)/a(n) unbounded)";
            break;
        case ScheduleKind::Constant:
            win.analytic = true;
            win.pass = true;
            break;
        case ScheduleKind::Table: {
            // Trend test of b(n)/a(n) over the available range.
            const long n_hi = std::max<long>(4, static_cast<long>(s.table.size()) / 2);
            const long n_lo = std::max<long>(2, n_hi / 4);
            const double r_lo = s.b_upper(n_lo) / s.a(n_lo);
            const double r_hi = s.b_upper(n_hi) / s.a(n_hi);
            win.pass = r_hi <= 1.5 * r_lo + 1e-12;
            win.detail = "b/a ratio " + format_full(r_lo) + " -> " + format_full(r_hi);
            (void)horizon;
            break;
        }
    }
}

}  // namespace detail

/// Check every standing stepsize condition over the given horizon.
///
/// Series conditions are certified per kind; quasi-monotonicity, eventual
/// decrease and the window constant are verified empirically on a sample
/// grid. The report lists each condition separately so a failing schedule
/// names exactly what it violates.
inline AdmissibilityReport validate_schedule(const StepSchedule& sched, long horizon,
                                             double t_probe = 1.0) {
    if (horizon < 1) throw Inadmissible("horizon must be >= 1");
    AdmissibilityReport rep;
    rep.c = sched.c;
    rep.t_probe = t_probe;

    ScheduleCondition nonneg{"nonnegative", true, false, ""};
    ScheduleCondition div{"sum_diverges", false, false, ""};
    ScheduleCondition sq{"square_summable", false, false, ""};
    ScheduleCondition quasi{"quasi_monotone", true, false, ""};
    ScheduleCondition dec{"eventually_decreasing", true, false, ""};
    ScheduleCondition win{"window_bound", false, false, ""};

    detail::series_verdicts(sched, div, sq);
    detail::window_verdict(sched, horizon, win);

    const long limit =
        sched.kind == ScheduleKind::Table
            ? std::min<long>(horizon, static_cast<long>(sched.table.size()) - 1)
            : horizon;

    // Geometric probe grid over [0, limit].
    std::vector<long> probes{0};
    for (long n = 1; n <= limit; n = std::max(n + 1, (n * 5) / 4)) probes.push_back(n);

    for (long n : probes) {
        const double an = sched.a(n);
        if (!(an >= 0.0) || !std::isfinite(an)) {
            nonneg.pass = false;
            nonneg.detail = "a(" + std::to_string(n) + ") = " + format_full(an);
            break;
        }
    }

    // a(m) <= c a(n) for sampled pairs m >= n.
    for (std::size_t i = 0; i + 1 < probes.size() && quasi.pass; ++i) {
        const double an = sched.a(probes[i]);
        for (std::size_t j = i + 1; j < probes.size(); ++j) {
            if (sched.a(probes[j]) > sched.c * an * (1.0 + 1e-12)) {
                quasi.pass = false;
                quasi.detail = "a(" + std::to_string(probes[j]) + ") > c a(" +
                               std::to_string(probes[i]) + ")";
                break;
            }
        }
    }

    // Eventual decrease: no increase may occur in the second half of the range.
    long last_increase = -1;
    for (long n = 0; n + 1 <= limit; n = std::max(n + 1, (n * 9) / 8)) {
        if (sched.a(n + 1) > sched.a(n) * (1.0 + 1e-12)) last_increase = n;
    }
    if (last_increase >= limit / 2) {
        dec.pass = false;
        dec.detail = "still increasing at n = " + std::to_string(last_increase);
    }

    // Measured window constant, inflated by 10%.
    double worst = 0.0;
    for (long n : probes) {
        if (n > limit / 2) break;
        try {
            const long m = window_end(sched, n, t_probe, limit);
            worst = std::max(worst, static_cast<double>(m - n) / t_probe);
        } catch (const HorizonExceeded&) {
            break;  // window no longer completes inside the horizon
        }
    }
    rep.c_star_window = 1.1 * std::max(worst, 1.0);
    if (win.detail.empty())
        win.detail = "measured C* = " + format_full(rep.c_star_window) + " over horizon";

    rep.conditions = {nonneg, div, sq, quasi, dec, win};
    rep.admissible = true;
    for (const auto& cond : rep.conditions) rep.admissible = rep.admissible && cond.pass;
    return rep;
}

/// Epoch structure of the cumulative time axis t(n) = sum_{m<=n} a(m).
///
/// Epoch starts satisfy n_k = min{ n : t(n) >= t(n_{k-1}) + T' } exactly, so
/// epoch lengths in time lie in [T', T' + c a(0)] =: [T', T].
struct TimeGrid {
    double t_prime = 1.0;
    double T = 2.0;  // T' + c a(0)
    long n0 = 0;
    long horizon = 0;

    std::vector<double> t;     // t[n], n = 0..horizon
    std::vector<long> n_k;     // epoch start indices, n_k[0] = n0
    std::vector<double> T_m;   // epoch times t(n_k)
    std::vector<long> upsilon; // n_{k+1} - n_k (size n_k.size()-1)

    /// 1.1 * max_k upsilon_k / max(n_k, 1); multiplies the per-epoch union
    /// bound when epoch counts are folded into a sum over iterations.
    double epoch_ratio_bound = 1.0;
    /// 1.1 * max_k upsilon_k / T'; the literal window constant over this grid.
    double c_star_window = 1.0;

    [[nodiscard]] std::size_t epochs() const { return upsilon.size(); }
};

/// Build the epoch grid from n0 up to `horizon` (at most `max_epochs` epochs).
inline TimeGrid build_time_grid(const StepSchedule& sched, double t_prime, long n0, long horizon,
                                long max_epochs = 1000000) {
    if (t_prime <= 0.0) throw Inadmissible("T' must be positive");
    if (horizon < n0 + 1) throw HorizonExceeded("horizon must exceed n0");

    TimeGrid g;
    g.t_prime = t_prime;
    g.T = t_prime + sched.c * sched.a(0);
    g.n0 = n0;
    g.horizon = horizon;

    g.t.resize(static_cast<std::size_t>(horizon) + 1);
    double acc = 0.0;
    for (long n = 0; n <= horizon; ++n) {
        acc += sched.a(n);
        g.t[static_cast<std::size_t>(n)] = acc;
    }

    g.n_k.push_back(n0);
    g.T_m.push_back(g.t[static_cast<std::size_t>(n0)]);
    while (static_cast<long>(g.n_k.size()) <= max_epochs) {
        const long prev = g.n_k.back();
        const double target = g.t[static_cast<std::size_t>(prev)] + t_prime;
        if (g.t[static_cast<std::size_t>(horizon)] < target) break;  // next epoch incomplete
        long n = prev + 1;
        while (g.t[static_cast<std::size_t>(n)] < target) ++n;
        g.n_k.push_back(n);
        g.T_m.push_back(g.t[static_cast<std::size_t>(n)]);
        g.upsilon.push_back(n - prev);

        const double len = g.T_m.back() - g.T_m[g.T_m.size() - 2];
        if (len < t_prime - 1e-12 || len > g.T + 1e-12)
            throw HorizonExceeded("epoch length " + format_full(len) + " outside [T', T]");
    }
    if (g.upsilon.empty())
        throw HorizonExceeded("horizon too short for a single epoch past n0");

    double ratio = 0.0, wconst = 0.0;
    for (std::size_t k = 0; k < g.upsilon.size(); ++k) {
        const double nk = static_cast<double>(std::max<long>(g.n_k[k], 1));
        ratio = std::max(ratio, static_cast<double>(g.upsilon[k]) / nk);
        wconst = std::max(wconst, static_cast<double>(g.upsilon[k]) / t_prime);
    }
    g.epoch_ratio_bound = 1.1 * std::max(ratio, 1.0);
    g.c_star_window = 1.1 * std::max(wconst, 1.0);
    return g;
}

}  // namespace gsa
