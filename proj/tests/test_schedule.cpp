#include <catch2/catch_amalgamated.hpp>

#include "gsa/schedule.hpp"

using namespace gsa;

namespace {

StepSchedule harmonic(double scale = 1.0) {
    StepSchedule s;
    s.kind = ScheduleKind::Harmonic;
    s.scale = scale;
    return s;
}

}  // namespace

TEST_CASE("harmonic schedule passes every condition", "[schedule]") {
    const auto rep = validate_schedule(harmonic(), 20000);
    CHECK(rep.admissible);
    for (const auto& cond : rep.conditions) {
        INFO(cond.name << ": " << cond.detail);
        CHECK(cond.pass);
    }
}

TEST_CASE("log-harmonic schedule passes every condition", "[schedule]") {
    StepSchedule s;
    s.kind = ScheduleKind::LogHarmonic;
    const auto rep = validate_schedule(s, 20000);
    CHECK(rep.admissible);
}

TEST_CASE("sublinear power schedule fails exactly the window condition", "[schedule]") {
    StepSchedule s;
    s.kind = ScheduleKind::Power;
    s.gamma = 2.0 / 3.0;
    s.inner = true;  // a(n) = 1 / (1 + n^{2/3})
    const auto rep = validate_schedule(s, 20000);
    CHECK_FALSE(rep.admissible);
    for (const auto& cond : rep.conditions) {
        INFO(cond.name << ": " << cond.detail);
        if (cond.name == "window_bound")
            CHECK_FALSE(cond.pass);
        else
            CHECK(cond.pass);
    }
}

TEST_CASE("constant schedule fails square summability only", "[schedule]") {
    StepSchedule s;
    s.kind = ScheduleKind::Constant;
    s.scale = 0.1;
    const auto rep = validate_schedule(s, 20000);
    CHECK_FALSE(rep.admissible);
    CHECK_FALSE(rep.find("square_summable")->pass);
    CHECK(rep.find("sum_diverges")->pass);
    CHECK(rep.find("window_bound")->pass);
    CHECK(rep.find("quasi_monotone")->pass);
}

TEST_CASE("window end matches the direct cumulative-sum oracle", "[schedule]") {
    const auto s = harmonic();
    // a(0) = 1 already reaches T = 1.
    CHECK(window_end(s, 0, 1.0, 1000) == 0);

    // Oracle: scan partial sums directly.
    auto oracle = [&](long n, double T) {
        double acc = 0.0;
        long k = n;
        while (true) {
            acc += s.a(k);
            if (acc >= T) return k;
            ++k;
        }
    };
    CHECK(window_end(s, 3, 1.0, 1000) == oracle(3, 1.0));
    CHECK(oracle(3, 1.0) == 9);  // 1/4 + ... + 1/10 first reaches 1 at k = 9
    for (long n : {0L, 1L, 7L, 40L, 333L})
        CHECK(window_end(s, n, 0.7, 100000) == oracle(n, 0.7));

    // Vanishing window never needs a step.
    CHECK(window_end(s, 5, 0.0, 10) == 5);
    CHECK(window_end(s, 5, -1.0, 10) == 5);

    CHECK_THROWS_AS(window_end(s, 0, 1e9, 1000), HorizonExceeded);
}

TEST_CASE("time grid reproduces the hand-computed epoch starts", "[schedule]") {
    const auto g = build_time_grid(harmonic(), 1.0, 0, 2000);
    // t(0) = 1, t(3) = 1 + 1/2 + 1/3 + 1/4 first reaches 2.
    REQUIRE(g.n_k.size() >= 2);
    CHECK(g.n_k[0] == 0);
    CHECK(g.n_k[1] == 3);
    CHECK(g.T == Catch::Approx(2.0));

    // Definition check: n_k is the minimal index reaching the target.
    for (std::size_t k = 1; k < g.n_k.size(); ++k) {
        const double target = g.t[static_cast<std::size_t>(g.n_k[k - 1])] + 1.0;
        CHECK(g.t[static_cast<std::size_t>(g.n_k[k])] >= target);
        CHECK(g.t[static_cast<std::size_t>(g.n_k[k] - 1)] < target);
    }
}

TEST_CASE("uniform table gives uniform epoch lengths", "[schedule]") {
    StepSchedule s;
    s.kind = ScheduleKind::Table;
    s.table.assign(100, 0.5);
    const auto g = build_time_grid(s, 1.0, 0, 99);
    for (long u : g.upsilon) CHECK(u == 2);
}

TEST_CASE("epoch window sums stay inside [T', T' + c a(0)]", "[schedule]") {
    for (double scale : {1.0, 0.5, 2.0}) {
        const auto s = harmonic(scale);
        const auto g = build_time_grid(s, 0.8, 5, 30000);
        for (std::size_t k = 0; k + 1 < g.n_k.size(); ++k) {
            double win = 0.0;
            for (long i = 0; i < g.upsilon[k]; ++i) win += s.a(g.n_k[k] + i);
            CHECK(win >= 0.8 - 1e-12);
            CHECK(win <= 0.8 + s.c * s.a(0) + 1e-12);
        }
    }
}

TEST_CASE("tail-of-squares bound is conservative and vanishing", "[schedule]") {
    StepSchedule kinds[3];
    kinds[0] = harmonic();
    kinds[1].kind = ScheduleKind::LogHarmonic;
    kinds[2].kind = ScheduleKind::Power;
    kinds[2].gamma = 0.75;

    for (const auto& s : kinds) {
        for (long n : {0L, 1L, 10L, 100L, 5000L}) {
            double exact = 0.0;
            for (long m = n; m < n + 2000000; ++m) exact += s.a(m) * s.a(m);
            CHECK(s.b_upper(n) >= exact);           // upper bound
            CHECK(s.b_upper(n) <= 2.0 * exact + 1e-15);  // not wildly loose
        }
        CHECK(s.b_upper(100000) < s.b_upper(10));  // drives the epoch constants to zero
    }
}
