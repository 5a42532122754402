#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace gsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Deterministic 64-bit generator. All randomness in the library flows
/// through this type so that a (master_seed, replica_index) pair fully
/// determines every draw, independent of platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {
        // xorshift-style warmup so nearby seeds decorrelate
        for (int i = 0; i < 4; ++i) next();
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [lo, hi) with 53 bits of mantissa.
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Standard normal via Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Seed for replica `index` under a master seed.
    static std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
        return splitmix(master ^ index);
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Format a double with 17 significant digits (round-trip exact).
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace gsa
