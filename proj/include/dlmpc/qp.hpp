#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dlmpc {

enum class QpStatus { Optimal, Infeasible, Failed };

const char* to_string(QpStatus s);

struct QpResult {
    QpStatus status = QpStatus::Failed;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
    // multipliers for a_ub rows (>= 0, complementary); equality multipliers
    Eigen::VectorXd lambda_ub;
    Eigen::VectorXd nu_eq;
};

// Goldfarb-Idnani dual active-set method for strictly convex QPs
//     min 1/2 z'Pz + q'z  s.t.  a_eq z = b_eq,  a_ub z <= b_ub.
// The Cholesky factor of P is computed once at construction so that many
// solves against the same quadratic can reuse it. Constraint selection is
// most-violated with lowest-index tie-break, which makes runs deterministic.
class GoldfarbIdnani {
public:
    explicit GoldfarbIdnani(const Eigen::MatrixXd& P);

    QpResult solve(const Eigen::VectorXd& q, const Eigen::MatrixXd& a_eq,
                   const Eigen::VectorXd& b_eq, const Eigen::MatrixXd& a_ub,
                   const Eigen::VectorXd& b_ub) const;

    int dim() const { return n_; }

private:
    int n_ = 0;
    Eigen::MatrixXd p_;
    Eigen::MatrixXd j0_;  // inverse transpose Cholesky factor of P
    double trace_p_ = 0.0;
};

QpResult solve_qp(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                  const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                  const Eigen::MatrixXd& a_ub, const Eigen::VectorXd& b_ub);

// max-norm KKT residual (stationarity, primal feasibility, complementarity)
double kkt_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                    const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                    const Eigen::MatrixXd& a_ub, const Eigen::VectorXd& b_ub,
                    const QpResult& r);

// Affine set {z : C z = b}: a particular solution plus an orthonormal kernel
// basis, so that Euclidean projections become a pair of mat-vecs.
struct AffineSubspace {
    bool feasible = false;
    Eigen::VectorXd z0;
    Eigen::MatrixXd basis;  // orthonormal columns spanning ker(C)

    Eigen::VectorXd project(const Eigen::VectorXd& target) const {
        if (basis.cols() == 0) return z0;
        return z0 + basis * (basis.transpose() * (target - z0));
    }
};

AffineSubspace affine_subspace(const Eigen::MatrixXd& C, const Eigen::VectorXd& b,
                               double tol = 1e-8);

// min 1/2 z'Pz + q'z s.t. C z = b, with P positive definite on ker(C).
struct EqQpResult {
    bool feasible = false;
    Eigen::VectorXd x;
};

EqQpResult solve_eq_qp(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                       const Eigen::MatrixXd& C, const Eigen::VectorXd& b);

}  // namespace dlmpc
