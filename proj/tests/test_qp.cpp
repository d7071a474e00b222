#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "dlmpc/qp.hpp"
#include "dlmpc/rng.hpp"
#include "oracles.hpp"

using namespace dlmpc;

namespace {

Eigen::MatrixXd none_rows(int n) { return Eigen::MatrixXd::Zero(0, n); }
Eigen::VectorXd none_vec() { return Eigen::VectorXd::Zero(0); }

}  // namespace

TEST_CASE("unconstrained minimum") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd q(2);
    q << -1.0, 2.0;
    QpResult r = solve_qp(P, q, none_rows(2), none_vec(), none_rows(2), none_vec());
    REQUIRE(r.status == QpStatus::Optimal);
    CHECK((r.x + q).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("single equality projects the minimum") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd a_eq(1, 2);
    a_eq << 1.0, 1.0;
    Eigen::VectorXd b_eq(1);
    b_eq << 1.0;
    QpResult r = solve_qp(P, q, a_eq, b_eq, none_rows(2), none_vec());
    REQUIRE(r.status == QpStatus::Optimal);
    CHECK(r.x(0) == doctest::Approx(0.5));
    CHECK(r.x(1) == doctest::Approx(0.5));
    CHECK(kkt_residual(P, q, a_eq, b_eq, none_rows(2), none_vec(), r) < 1e-10);
}

TEST_CASE("inequality activation") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd q(1);
    q << -2.0;  // min 1/2 x^2 - 2x => unconstrained x = 2
    Eigen::MatrixXd a_ub(1, 1);
    a_ub << 1.0;
    Eigen::VectorXd b_ub(1);
    SUBCASE("active bound") {
        b_ub << 1.0;
        QpResult r = solve_qp(P, q, none_rows(1), none_vec(), a_ub, b_ub);
        REQUIRE(r.status == QpStatus::Optimal);
        CHECK(r.x(0) == doctest::Approx(1.0));
        CHECK(r.lambda_ub(0) == doctest::Approx(1.0));  // gradient balance
    }
    SUBCASE("inactive bound") {
        b_ub << 3.0;
        QpResult r = solve_qp(P, q, none_rows(1), none_vec(), a_ub, b_ub);
        REQUIRE(r.status == QpStatus::Optimal);
        CHECK(r.x(0) == doctest::Approx(2.0));
        CHECK(r.lambda_ub(0) == doctest::Approx(0.0));
    }
}

TEST_CASE("infeasibility is certified") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(1);
    Eigen::MatrixXd a_ub(2, 1);
    a_ub << 1.0, -1.0;
    Eigen::VectorXd b_ub(2);
    b_ub << 0.0, -1.0;  // x <= 0, x >= 1
    QpResult r = solve_qp(P, q, none_rows(1), none_vec(), a_ub, b_ub);
    CHECK(r.status == QpStatus::Infeasible);
}

TEST_CASE("dependent equalities") {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd a_eq(2, 2);
    a_eq << 1.0, 1.0, 2.0, 2.0;
    Eigen::VectorXd b_eq(2);
    SUBCASE("consistent duplicates are fine") {
        b_eq << 1.0, 2.0;
        QpResult r = solve_qp(P, q, a_eq, b_eq, none_rows(2), none_vec());
        REQUIRE(r.status == QpStatus::Optimal);
        CHECK(r.x(0) == doctest::Approx(0.5));
    }
    SUBCASE("inconsistent duplicates are infeasible") {
        b_eq << 1.0, 3.0;
        QpResult r = solve_qp(P, q, a_eq, b_eq, none_rows(2), none_vec());
        CHECK(r.status == QpStatus::Infeasible);
    }
}

TEST_CASE("random QPs match active-set enumeration") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.below(3));
        int m = 2 + static_cast<int>(rng.below(5));
        Eigen::MatrixXd M(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
        }
        Eigen::MatrixXd P = M.transpose() * M + 0.3 * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd q(n);
        for (int i = 0; i < n; ++i) q(i) = rng.uniform(-1.0, 1.0);
        Eigen::MatrixXd a_ub(m, n);
        Eigen::VectorXd b_ub(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) a_ub(i, j) = rng.uniform(-1.0, 1.0);
            b_ub(i) = rng.uniform(-0.2, 1.0);
        }
        QpResult r = solve_qp(P, q, none_rows(n), none_vec(), a_ub, b_ub);
        auto ref = oracle::qp_by_enumeration(P, q, none_rows(n), none_vec(), a_ub, b_ub);
        if (r.status == QpStatus::Optimal) {
            REQUIRE(ref.has_value());
            CHECK((r.x - *ref).lpNorm<Eigen::Infinity>() < 1e-7);
            CHECK(kkt_residual(P, q, none_rows(n), none_vec(), a_ub, b_ub, r) < 1e-8);
        } else {
            CHECK(!ref.has_value());
        }
    }
}

TEST_CASE("factor reuse matches fresh solves") {
    Eigen::MatrixXd P(3, 3);
    P << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    GoldfarbIdnani solver(P);
    Rng rng(8);
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXd q(3);
        q << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
        Eigen::MatrixXd a_ub(2, 3);
        a_ub << 1, 0, 0, 0, 1, 1;
        Eigen::VectorXd b_ub(2);
        b_ub << 0.1, 0.2;
        QpResult a = solver.solve(q, none_rows(3), none_vec(), a_ub, b_ub);
        QpResult b = solve_qp(P, q, none_rows(3), none_vec(), a_ub, b_ub);
        REQUIRE(a.status == QpStatus::Optimal);
        CHECK(a.x == b.x);  // identical code path, bitwise equal
    }
}

TEST_CASE("equality-constrained helper") {
    SUBCASE("matches the dual method") {
        Eigen::MatrixXd P(2, 2);
        P << 2, 0.5, 0.5, 1;
        Eigen::VectorXd q(2);
        q << 1.0, -1.0;
        Eigen::MatrixXd C(1, 2);
        C << 1.0, -1.0;
        Eigen::VectorXd b(1);
        b << 0.25;
        EqQpResult a = solve_eq_qp(P, q, C, b);
        QpResult r = solve_qp(P, q, C, b, none_rows(2), none_vec());
        REQUIRE(a.feasible);
        REQUIRE(r.status == QpStatus::Optimal);
        CHECK((a.x - r.x).lpNorm<Eigen::Infinity>() < 1e-10);
    }
    SUBCASE("inconsistent system reported") {
        Eigen::MatrixXd C(2, 2);
        C << 1, 1, 1, 1;
        Eigen::VectorXd b(2);
        b << 1.0, 2.0;
        EqQpResult a = solve_eq_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), C, b);
        CHECK_FALSE(a.feasible);
    }
    SUBCASE("affine projection") {
        Eigen::MatrixXd C(1, 2);
        C << 1.0, 1.0;
        Eigen::VectorXd b(1);
        b << 1.0;
        AffineSubspace aff = affine_subspace(C, b);
        REQUIRE(aff.feasible);
        Eigen::VectorXd proj = aff.project(Eigen::VectorXd::Zero(2));
        CHECK(proj(0) == doctest::Approx(0.5));
        CHECK(proj(1) == doctest::Approx(0.5));
        // projecting a feasible point returns it
        Eigen::VectorXd y(2);
        y << 0.25, 0.75;
        CHECK((aff.project(y) - y).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}
