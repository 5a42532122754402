#include <catch2/catch_amalgamated.hpp>

#include "gsa/gossip.hpp"

#include <Eigen/Eigenvalues>

using namespace gsa;

namespace {

Matrix make2(double a, double b, double c, double d) {
    Matrix P(2, 2);
    P << a, b, c, d;
    return P;
}

// Independent oracle: stationary vector from the null space of P^T - I.
Vector stationary_by_kernel(const Matrix& P) {
    const int m = static_cast<int>(P.rows());
    Eigen::FullPivLU<Matrix> lu(P.transpose() - Matrix::Identity(m, m));
    lu.setThreshold(1e-9);
    Matrix ker = lu.kernel();
    Vector v = ker.col(0);
    return v / v.sum();
}

}  // namespace

TEST_CASE("validate accepts symmetric doubly stochastic pair", "[gossip]") {
    const auto g = validate_gossip(make2(0.5, 0.5, 0.5, 0.5));
    REQUIRE(g.size == 2);
    CHECK(g.pi(0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(g.pi(1) == Catch::Approx(0.5).margin(1e-12));
    CHECK(g.Q.norm() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("stationary distribution of asymmetric two-node chain", "[gossip]") {
    const Matrix P = make2(0.9, 0.1, 0.3, 0.7);
    const auto g = validate_gossip(P);
    CHECK(g.pi(0) == Catch::Approx(0.75).margin(1e-10));
    CHECK(g.pi(1) == Catch::Approx(0.25).margin(1e-10));

    const Vector oracle = stationary_by_kernel(P);
    CHECK((g.pi - oracle).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("periodic chain is rejected with a spectral violation", "[gossip]") {
    CHECK_THROWS_AS(validate_gossip(make2(0.0, 1.0, 1.0, 0.0)), SpectralViolation);
}

TEST_CASE("non-stochastic input is rejected", "[gossip]") {
    CHECK_THROWS_AS(validate_gossip(make2(0.9, 0.2, 0.3, 0.7)), NotStochastic);
    CHECK_THROWS_AS(validate_gossip(make2(1.1, -0.1, 0.3, 0.7)), NotStochastic);
}

TEST_CASE("reducible support graph is rejected", "[gossip]") {
    Matrix P = Matrix::Zero(3, 3);
    P(0, 0) = 1.0;  // node 0 never listens to anyone else
    P(1, 0) = 0.5;
    P(1, 1) = 0.5;
    P(2, 1) = 0.5;
    P(2, 2) = 0.5;
    CHECK_THROWS_AS(validate_gossip(P), Reducible);
}

TEST_CASE("uniform matrix has uniform stationary distribution", "[gossip]") {
    const auto g = validate_gossip(complete_gossip(6));
    for (int i = 0; i < 6; ++i) CHECK(g.pi(i) == Catch::Approx(1.0 / 6).margin(1e-12));
}

TEST_CASE("lazy 3-cycle is doubly stochastic hence uniform", "[gossip]") {
    Matrix P(3, 3);
    P << 0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 0.5, 0.0, 0.5;
    const auto g = validate_gossip(P);
    for (int i = 0; i < 3; ++i) CHECK(g.pi(i) == Catch::Approx(1.0 / 3).margin(1e-10));
}

TEST_CASE("decomposition identities hold for random primitive matrices", "[gossip]") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int m = 2 + static_cast<int>(seed % 9);
        const auto g = validate_gossip(random_primitive_gossip(m, seed));

        CHECK((g.pi.transpose() * g.P - g.pi.transpose()).lpNorm<Eigen::Infinity>() <= 1e-10);
        CHECK((g.Q * Vector::Ones(m)).lpNorm<Eigen::Infinity>() <= 1e-10);
        CHECK((g.Pi * g.Pi - g.Pi).lpNorm<Eigen::Infinity>() <= 1e-10);
        CHECK((g.Pi * g.Q).lpNorm<Eigen::Infinity>() <= 1e-10);
        CHECK((g.Q * g.Pi).lpNorm<Eigen::Infinity>() <= 1e-10);
        CHECK(g.spectral_radius < 1.0);
        CHECK(g.pi.minCoeff() > 0.0);
    }
}
