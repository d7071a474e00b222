#include "dlmpc/qp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dlmpc {

namespace {
constexpr double kQpInf = std::numeric_limits<double>::infinity();
}

const char* to_string(QpStatus s) {
    switch (s) {
        case QpStatus::Optimal: return "optimal";
        case QpStatus::Infeasible: return "infeasible";
        case QpStatus::Failed: return "failed";
    }
    return "?";
}

GoldfarbIdnani::GoldfarbIdnani(const Eigen::MatrixXd& P) : n_(static_cast<int>(P.rows())) {
    if (P.rows() != P.cols()) throw std::invalid_argument("GoldfarbIdnani: P must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("GoldfarbIdnani: P must be positive definite");
    }
    trace_p_ = P.trace();
    p_ = P;
    j0_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(n_, n_)).transpose();
}

QpResult solve_qp(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                  const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                  const Eigen::MatrixXd& a_ub, const Eigen::VectorXd& b_ub) {
    return GoldfarbIdnani(P).solve(q, a_eq, b_eq, a_ub, b_ub);
}

// Goldfarb & Idnani (1983) dual active-set iteration, following the layout of
// the classical uQuadProg implementation. Equality rows enter the active set
// first and are never dropped. Constraint selection is most-violated with
// lowest index on ties, so runs are deterministic.
QpResult GoldfarbIdnani::solve(const Eigen::VectorXd& q, const Eigen::MatrixXd& a_eq,
                               const Eigen::VectorXd& b_eq, const Eigen::MatrixXd& a_ub,
                               const Eigen::VectorXd& b_ub) const {
    const int n = n_;
    const int meq = static_cast<int>(a_eq.rows());
    const int mie = static_cast<int>(a_ub.rows());
    if (q.size() != n || (meq > 0 && a_eq.cols() != n) || (mie > 0 && a_ub.cols() != n) ||
        b_eq.size() != meq || b_ub.size() != mie) {
        throw std::invalid_argument("GoldfarbIdnani::solve: dimension mismatch");
    }

    QpResult res;
    res.lambda_ub = Eigen::VectorXd::Zero(mie);
    res.nu_eq = Eigen::VectorXd::Zero(meq);

    Eigen::MatrixXd J = j0_;
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd x = -(j0_ * (j0_.transpose() * q));  // unconstrained minimum

    std::vector<int> active;  // ids: 0..meq-1 equalities, meq+i inequality i
    Eigen::VectorXd u = Eigen::VectorXd::Zero(meq + mie + 1);
    std::vector<bool> is_active(static_cast<size_t>(mie), false);

    Eigen::VectorXd d(n), z(n), r_vec(n), np(n);
    double R_norm = 1.0;
    const double eps = std::numeric_limits<double>::epsilon() * (1.0 + std::abs(trace_p_));
    const double b_scale = mie > 0 ? b_ub.lpNorm<Eigen::Infinity>() : 0.0;

    auto finish = [&](QpStatus st, int iters) {
        res.status = st;
        res.x = x;
        res.iterations = iters;
        if (st == QpStatus::Optimal) {
            res.objective = 0.5 * x.dot(p_ * x) + q.dot(x);
            for (size_t k = 0; k < active.size(); ++k) {
                int id = active[k];
                if (id < meq) {
                    res.nu_eq(id) = -u(static_cast<int>(k));
                } else {
                    res.lambda_ub(id - meq) = u(static_cast<int>(k));
                }
            }
        }
        return res;
    };

    auto compute_step_dirs = [&]() {
        int nact = static_cast<int>(active.size());
        d = J.transpose() * np;
        if (nact >= n) {
            z.setZero();
        } else {
            z = J.rightCols(n - nact) * d.tail(n - nact);
        }
        for (int i = nact - 1; i >= 0; --i) {
            double s = d(i);
            for (int k = i + 1; k < nact; ++k) s -= R(i, k) * r_vec(k);
            r_vec(i) = s / R(i, i);
        }
    };

    auto add_constraint = [&]() -> bool {
        int nact = static_cast<int>(active.size());
        for (int j = n - 1; j > nact; --j) {
            double cc = d(j - 1);
            double ss = d(j);
            double h = std::hypot(cc, ss);
            if (h == 0.0) continue;
            d(j) = 0.0;
            ss /= h;
            cc /= h;
            if (cc < 0.0) {
                cc = -cc;
                ss = -ss;
                d(j - 1) = -h;
            } else {
                d(j - 1) = h;
            }
            double xny = ss / (1.0 + cc);
            for (int k = 0; k < n; ++k) {
                double t1 = J(k, j - 1);
                double t2 = J(k, j);
                J(k, j - 1) = t1 * cc + t2 * ss;
                J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
            }
        }
        R.col(nact).head(nact + 1) = d.head(nact + 1);
        if (std::abs(d(nact)) <= std::numeric_limits<double>::epsilon() * R_norm) return false;
        R_norm = std::max(R_norm, std::abs(d(nact)));
        return true;
    };

    auto delete_constraint = [&](int pos) {
        int nact = static_cast<int>(active.size());
        for (int i = pos; i < nact - 1; ++i) {
            active[static_cast<size_t>(i)] = active[static_cast<size_t>(i + 1)];
            u(i) = u(i + 1);
            R.col(i).head(nact) = R.col(i + 1).head(nact);
        }
        u(nact - 1) = 0.0;
        active.pop_back();
        --nact;
        if (nact == 0) {
            R_norm = 1.0;
            return;
        }
        for (int j = pos; j < nact; ++j) {
            double cc = R(j, j);
            double ss = R(j + 1, j);
            double h = std::hypot(cc, ss);
            if (h == 0.0) continue;
            cc /= h;
            ss /= h;
            R(j + 1, j) = 0.0;
            if (cc < 0.0) {
                R(j, j) = -h;
                cc = -cc;
                ss = -ss;
            } else {
                R(j, j) = h;
            }
            double xny = ss / (1.0 + cc);
            for (int k = j + 1; k < nact; ++k) {
                double t1 = R(j, k);
                double t2 = R(j + 1, k);
                R(j, k) = t1 * cc + t2 * ss;
                R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
            }
            for (int k = 0; k < n; ++k) {
                double t1 = J(k, j);
                double t2 = J(k, j + 1);
                J(k, j) = t1 * cc + t2 * ss;
                J(k, j + 1) = xny * (J(k, j) + t1) - t2;
            }
        }
        R_norm = 1.0;
        for (int i = 0; i < nact; ++i) R_norm = std::max(R_norm, std::abs(R(i, i)));
    };

    // ---- equality constraints ----
    for (int i = 0; i < meq; ++i) {
        np = a_eq.row(i).transpose();
        compute_step_dirs();
        double resid = np.dot(x) - b_eq(i);
        double z2 = z.squaredNorm();
        if (z2 <= eps) {
            // linearly dependent on current active set
            if (std::abs(resid) > 1e-8 * (1.0 + std::abs(b_eq(i)))) {
                return finish(QpStatus::Infeasible, 0);
            }
            continue;
        }
        double t2 = -resid / z.dot(np);
        x += t2 * z;
        int nact = static_cast<int>(active.size());
        for (int k = 0; k < nact; ++k) u(k) -= t2 * r_vec(k);
        u(nact) = t2;
        if (!add_constraint()) return finish(QpStatus::Failed, 0);
        active.push_back(i);
    }

    const int max_iter = 50 * (n + meq + mie) + 200;
    int iter = 0;
    Eigen::VectorXd s = Eigen::VectorXd::Zero(mie);

    while (iter++ < max_iter) {
        std::vector<bool> excluded(static_cast<size_t>(mie), false);
        // step 1: most violated inactive inequality
        const double tol_viol = 1e-10 * (1.0 + x.lpNorm<Eigen::Infinity>() + b_scale);
        int p = -1;
        double worst = -tol_viol;
        for (int i = 0; i < mie; ++i) {
            if (is_active[static_cast<size_t>(i)]) continue;
            s(i) = b_ub(i) - a_ub.row(i).dot(x);
            if (s(i) < worst) {
                worst = s(i);
                p = i;
            }
        }
        if (p < 0) return finish(QpStatus::Optimal, iter);

        np = -a_ub.row(p).transpose();
        double u_plus = 0.0;
        double s_p = s(p);

        while (iter++ < max_iter) {
            compute_step_dirs();
            int nact = static_cast<int>(active.size());

            double t1 = kQpInf;
            int l_drop = -1;
            for (int k = 0; k < nact; ++k) {
                if (active[static_cast<size_t>(k)] < meq) continue;
                if (r_vec(k) > eps) {
                    double ratio = u(k) / r_vec(k);
                    if (ratio < t1) {
                        t1 = ratio;
                        l_drop = k;
                    }
                }
            }
            double z2 = z.squaredNorm();
            double t2 = (z2 > eps) ? (-s_p) / z.dot(np) : kQpInf;
            double t = std::min(t1, t2);

            if (!std::isfinite(t)) return finish(QpStatus::Infeasible, iter);

            if (!std::isfinite(t2)) {
                // dual step only: drop the blocking constraint, stay on p
                for (int k = 0; k < nact; ++k) u(k) -= t * r_vec(k);
                u_plus += t;
                is_active[static_cast<size_t>(active[static_cast<size_t>(l_drop)] - meq)] = false;
                delete_constraint(l_drop);
                continue;
            }

            x += t * z;
            for (int k = 0; k < nact; ++k) u(k) -= t * r_vec(k);
            u_plus += t;

            if (t == t2) {
                u(nact) = u_plus;
                if (add_constraint()) {
                    active.push_back(meq + p);
                    is_active[static_cast<size_t>(p)] = true;
                } else {
                    // numerically dependent; x already satisfies p after the
                    // full step, so simply resume scanning
                    u(nact) = 0.0;
                }
                break;
            }
            is_active[static_cast<size_t>(active[static_cast<size_t>(l_drop)] - meq)] = false;
            delete_constraint(l_drop);
            s_p = b_ub(p) - a_ub.row(p).dot(x);
        }
    }

    return finish(QpStatus::Failed, iter);
}

double kkt_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                    const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                    const Eigen::MatrixXd& a_ub, const Eigen::VectorXd& b_ub,
                    const QpResult& r) {
    Eigen::VectorXd grad = P * r.x + q;
    if (a_eq.rows() > 0) grad += a_eq.transpose() * r.nu_eq;
    if (a_ub.rows() > 0) grad += a_ub.transpose() * r.lambda_ub;
    double resid = grad.lpNorm<Eigen::Infinity>();
    if (a_eq.rows() > 0) resid = std::max(resid, (a_eq * r.x - b_eq).lpNorm<Eigen::Infinity>());
    for (int i = 0; i < a_ub.rows(); ++i) {
        double slack = b_ub(i) - a_ub.row(i).dot(r.x);
        resid = std::max(resid, std::max(0.0, -slack));
        resid = std::max(resid, std::abs(r.lambda_ub(i) * slack));
        resid = std::max(resid, std::max(0.0, -r.lambda_ub(i)));
    }
    return resid;
}

AffineSubspace affine_subspace(const Eigen::MatrixXd& C, const Eigen::VectorXd& b, double tol) {
    AffineSubspace out;
    const int n = static_cast<int>(C.cols());
    if (C.rows() == 0) {
        out.feasible = true;
        out.z0 = Eigen::VectorXd::Zero(n);
        out.basis = Eigen::MatrixXd::Identity(n, n);
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(C);
    out.z0 = cod.solve(b);
    double resid = (C * out.z0 - b).lpNorm<Eigen::Infinity>();
    if (resid > tol * (1.0 + b.lpNorm<Eigen::Infinity>())) {
        out.feasible = false;
        return out;
    }
    out.feasible = true;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    Eigen::MatrixXd K = lu.kernel();
    if (K.cols() == 1 && K.isZero(0.0)) {
        out.basis.resize(n, 0);
        return out;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
    out.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, static_cast<int>(K.cols()));
    return out;
}

EqQpResult solve_eq_qp(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                       const Eigen::MatrixXd& C, const Eigen::VectorXd& b) {
    EqQpResult out;
    AffineSubspace aff = affine_subspace(C, b);
    if (!aff.feasible) return out;
    out.feasible = true;
    if (aff.basis.cols() == 0) {
        out.x = aff.z0;
        return out;
    }
    Eigen::MatrixXd Pr = aff.basis.transpose() * P * aff.basis;
    Eigen::VectorXd qr = aff.basis.transpose() * (q + P * aff.z0);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Pr);
    out.x = aff.z0 + aff.basis * ldlt.solve(-qr);
    return out;
}

}  // namespace dlmpc
