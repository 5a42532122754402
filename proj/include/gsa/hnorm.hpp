#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <utility>

#include "gsa/errors.hpp"
#include "gsa/types.hpp"

namespace gsa {

/// Solution H of the discrete Lyapunov equation Q^T H Q - H = -I together
/// with the derived contraction data. Under the H-weighted norm the
/// deviation matrix Q contracts by the factor `alpha`.
///
/// Since Q annihilates the all-ones vector, H fixes it, so lambda_min = 1
/// and Lambda = lambda_max up to roundoff.
struct HMetric {
    Matrix H;
    double alpha = 0.0;       // sqrt(1 - 1/lambda_max)
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    double Lambda = 1.0;      // lambda_max / lambda_min
    double Pi_H_norm = 1.0;   // induced norm of the consensus projector
    double residual = 0.0;    // ||Q^T H Q - H + I||_F at the solution

    Eigen::LLT<Matrix> chol;  // Cholesky of H, used by the norm evaluators

    /// Weighted norm sqrt(trace(G^T H G)). For a single column this is
    /// sqrt(x^T H x); for an M x d iterate array it is the column-wise
    /// extension under which Q stays an alpha-contraction.
    [[nodiscard]] double norm(const Eigen::Ref<const Matrix>& G) const {
        if (G.rows() != H.rows()) throw DimensionMismatch("h_norm: row count mismatch");
        return (chol.matrixU() * G).norm();
    }
};

constexpr double kLyapunovTol = 1e-12;
constexpr long kLyapunovIterCap = 100000;

/// Solve Q^T H Q - H = -I by the fixed-point iteration H <- Q^T H Q + I
/// from H = I. Converges whenever rho(Q) < 1; throws NoConvergence if the
/// residual does not fall below 1e-12 within the iteration cap.
inline HMetric solve_discrete_lyapunov(const Matrix& Q) {
    const int m = static_cast<int>(Q.rows());
    if (Q.cols() != m) throw DimensionMismatch("lyapunov: Q must be square");
    const Matrix I = Matrix::Identity(m, m);

    Matrix H = I;
    Matrix next(m, m);
    double resid = 0.0;
    bool converged = false;
    for (long it = 0; it < kLyapunovIterCap; ++it) {
        next.noalias() = Q.transpose() * H * Q;
        next += I;
        next = 0.5 * (next + next.transpose()).eval();  // kill asymmetry drift
        resid = (next - H).norm();                      // equals the equation residual at H
        H = next;
        if (resid <= kLyapunovTol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence("lyapunov: residual " + format_full(resid) + " after iteration cap");

    HMetric hm;
    hm.H = H;
    hm.residual = (Q.transpose() * H * Q - H + I).norm();

    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    hm.lambda_min = es.eigenvalues().minCoeff();
    hm.lambda_max = es.eigenvalues().maxCoeff();
    if (hm.lambda_min < 1.0 - 1e-10)
        throw NoConvergence("lyapunov: lambda_min " + format_full(hm.lambda_min) + " below 1");
    hm.Lambda = hm.lambda_max / hm.lambda_min;
    hm.alpha = std::sqrt(1.0 - 1.0 / hm.lambda_max);

    // ||Pi||_H as the spectral norm of the similarity transform
    // H^{1/2} Pi H^{-1/2}; callers pass Pi when they have one.
    hm.chol.compute(H);
    return hm;
}

/// Contraction factor of Q under the H-norm: alpha = sqrt(1 - 1/lambda_max).
inline double contraction_factor(const HMetric& hm) {
    return std::sqrt(1.0 - 1.0 / hm.lambda_max);
}

/// Induced H-norm of a matrix A (largest singular value of the similarity
/// transform H^{1/2} A H^{-1/2}).
inline double induced_h_norm(const HMetric& hm, const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hm.H);
    const Vector w = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    const Matrix Hs = V * w.cwiseSqrt().asDiagonal() * V.transpose();
    const Matrix Hsi = V * w.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    return Eigen::JacobiSVD<Matrix>(Hs * A * Hsi).singularValues().maxCoeff();
}

/// Attach the consensus projector norm to a solved metric.
inline HMetric solve_discrete_lyapunov(const Matrix& Q, const Matrix& Pi) {
    HMetric hm = solve_discrete_lyapunov(Q);
    hm.Pi_H_norm = induced_h_norm(hm, Pi);
    return hm;
}

/// Weighted norm of an M x d array, free function form.
inline double h_norm(const Eigen::Ref<const Matrix>& G, const HMetric& hm) {
    return hm.norm(G);
}

/// Both sides of the entrywise comparison chain
///   ||G||_H <= sqrt(Lambda(H) M d) max_{i,j} |G_ij|.
/// Returns (lhs, rhs); the inequality is re-checked up to roundoff.
inline std::pair<double, double> frobenius_entry_bound(const Eigen::Ref<const Matrix>& G,
                                                       const HMetric& hm) {
    const double lhs = hm.norm(G);
    const double md = static_cast<double>(G.rows()) * static_cast<double>(G.cols());
    const double rhs = std::sqrt(hm.Lambda * md) * G.cwiseAbs().maxCoeff();
    if (lhs > rhs * (1.0 + 1e-9) + 1e-300)
        throw NoConvergence("entry bound violated: " + format_full(lhs) + " > " + format_full(rhs));
    return {lhs, rhs};
}

}  // namespace gsa
