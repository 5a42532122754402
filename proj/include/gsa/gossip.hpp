#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gsa/errors.hpp"
#include "gsa/types.hpp"

namespace gsa {

/// Row-stochastic averaging matrix together with its consensus
/// decomposition: stationary distribution pi, rank-one projector
/// Pi = 1 pi^T and deviation matrix Q = P - Pi.
///
/// Immutable after validation; safe to share across worker threads.
struct GossipModel {
    int size = 0;       // node count M
    Matrix P;           // M x M row-stochastic weights
    Vector pi;          // stationary distribution, pi^T P = pi^T
    Matrix Pi;          // 1 pi^T
    Matrix Q;           // P - Pi, spectral radius < 1
    double spectral_radius = 0.0;  // max |eigenvalue(Q)|
};

namespace detail {

// Strong connectivity of the support graph: every node reachable from
// node 0 and node 0 reachable from every node.
inline bool strongly_connected(const Matrix& P) {
    const int m = static_cast<int>(P.rows());
    auto reach = [&](bool transpose) {
        std::vector<char> seen(m, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < m; ++v) {
                const double w = transpose ? P(v, u) : P(u, v);
                if (w > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (int v = 0; v < m; ++v)
            if (!seen[v]) return false;
        return true;
    };
    return reach(false) && reach(true);
}

}  // namespace detail

constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
constexpr double kSpectralMargin = 1e-10;

/// Stationary distribution of a validated stochastic matrix.
///
/// Direct linear solve of (P^T - I) pi = 0 with the normalization row
/// for M <= 64; power iteration above that.
inline Vector stationary_distribution(const Matrix& P) {
    const int m = static_cast<int>(P.rows());
    Vector pi;
    if (m <= 64) {
        // Replace one equation of the singular system with sum(pi) = 1.
        Matrix A = P.transpose() - Matrix::Identity(m, m);
        A.row(m - 1).setOnes();
        Vector rhs = Vector::Zero(m);
        rhs(m - 1) = 1.0;
        pi = A.fullPivLu().solve(rhs);
    } else {
        pi = Vector::Constant(m, 1.0 / m);
        Vector next(m);
        bool done = false;
        for (long it = 0; it < 1000000; ++it) {
            next.noalias() = P.transpose() * pi;
            next /= next.sum();
            if ((next - pi).lpNorm<Eigen::Infinity>() <= 1e-14) {
                pi = next;
                done = true;
                break;
            }
            pi = next;
        }
        if (!done) throw NoConvergence("stationary distribution: power iteration stalled");
    }
    const double resid = (P.transpose() * pi - pi).lpNorm<Eigen::Infinity>();
    if (!pi.allFinite() || resid > 1e-12)
        throw NoConvergence("stationary distribution: residual " + format_full(resid));
    // Clamp solver dust; entries of an irreducible chain are positive.
    for (int i = 0; i < m; ++i)
        if (pi(i) < 0.0 && pi(i) > -1e-12) pi(i) = 0.0;
    pi /= pi.sum();
    return pi;
}

/// Validate a proposed weight matrix and build its consensus decomposition.
///
/// Throws NotStochastic, Reducible or SpectralViolation naming the offending
/// row or eigenvalue. The spectral condition rho(Q) < 1 - 1e-10 is what every
/// downstream contraction argument uses, so it is checked directly instead of
/// relying on aperiodicity of the support graph.
inline GossipModel validate_gossip(const Matrix& P) {
    if (P.rows() != P.cols() || P.rows() < 1)
        throw NotStochastic("weight matrix must be square with M >= 1");
    const int m = static_cast<int>(P.rows());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            if (P(i, j) < 0.0)
                throw NotStochastic("negative weight at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
        const double s = P.row(i).sum();
        if (std::abs(s - 1.0) > kRowSumTol)
            throw NotStochastic("row " + std::to_string(i) + " sums to " + format_full(s));
    }
    if (!detail::strongly_connected(P))
        throw Reducible("support graph is not strongly connected");

    GossipModel g;
    g.size = m;
    g.P = P;
    g.pi = stationary_distribution(P);
    g.Pi = Vector::Ones(m) * g.pi.transpose();
    g.Q = P - g.Pi;

    const Eigen::EigenSolver<Matrix> es(g.Q, /*computeEigenvectors=*/false);
    g.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
    if (g.spectral_radius >= 1.0 - kSpectralMargin) {
        std::ostringstream msg;
        msg << "deviation matrix has eigenvalue of magnitude " << format_full(g.spectral_radius)
            << " (periodic or near-periodic averaging)";
        throw SpectralViolation(msg.str());
    }

    // Decomposition identities, cheap to assert once at build time.
    const double dq1 = (g.Q * Vector::Ones(m)).lpNorm<Eigen::Infinity>();
    const double dpq = (g.pi.transpose() * g.Q).lpNorm<Eigen::Infinity>();
    if (dq1 > kStationaryTol || dpq > kStationaryTol)
        throw NoConvergence("consensus decomposition residual too large");
    return g;
}

/// Named generators used by the experiment config.

inline Matrix complete_gossip(int m) {
    return Matrix::Constant(m, m, 1.0 / m);
}

/// Half self-weight, half on the ring successor. Doubly stochastic and
/// aperiodic for every m >= 1.
inline Matrix lazy_ring_gossip(int m) {
    Matrix P = 0.5 * Matrix::Identity(m, m);
    for (int i = 0; i < m; ++i) P(i, (i + 1) % m) += 0.5;
    return P;
}

/// Random primitive matrix: ring backbone plus self-loops plus extra random
/// edges, rows renormalized. Strong connectivity and aperiodicity hold by
/// construction.
inline Matrix random_primitive_gossip(int m, std::uint64_t seed, double extra_edge_prob = 0.3) {
    Rng rng(seed);
    Matrix P = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        P(i, i) = rng.uniform(0.2, 1.0);
        P(i, (i + 1) % m) += rng.uniform(0.2, 1.0);
        for (int j = 0; j < m; ++j)
            if (j != i && rng.uniform(0.0, 1.0) < extra_edge_prob) P(i, j) += rng.uniform(0.05, 0.5);
        P.row(i) /= P.row(i).sum();
    }
    return P;
}

}  // namespace gsa
