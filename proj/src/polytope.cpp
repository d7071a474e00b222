#include "dlmpc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlmpc/rng.hpp"

namespace dlmpc {

HPolytope::HPolytope(Eigen::MatrixXd H_, Eigen::VectorXd h_) : H(std::move(H_)), h(std::move(h_)) {
    if (H.rows() != h.size()) throw std::invalid_argument("HPolytope: H and h row counts differ");
}

bool HPolytope::contains(const Eigen::VectorXd& x, double eps) const {
    if (is_empty_flag) return false;
    if (x.size() != dim()) throw std::invalid_argument("HPolytope::contains: dimension mismatch");
    if (rows() == 0) return true;
    return ((H * x - h).array() <= eps).all();
}

HPolytope HPolytope::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const int n = static_cast<int>(lo.size());
    if (hi.size() != n) throw std::invalid_argument("HPolytope::box: bound sizes differ");
    Eigen::MatrixXd H(2 * n, n);
    Eigen::VectorXd h(2 * n);
    H.topRows(n) = Eigen::MatrixXd::Identity(n, n);
    H.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
    h.head(n) = hi;
    h.tail(n) = -lo;
    return HPolytope(H, h);
}

HPolytope HPolytope::cube(int n, double radius) {
    return box(Eigen::VectorXd::Constant(n, -radius), Eigen::VectorXd::Constant(n, radius));
}

HPolytope HPolytope::unconstrained(int n) {
    return HPolytope(Eigen::MatrixXd::Zero(0, n), Eigen::VectorXd::Zero(0));
}

HPolytope HPolytope::empty_set(int n) {
    HPolytope p = unconstrained(n);
    p.is_empty_flag = true;
    return p;
}

HPolytope intersect(const HPolytope& p, const HPolytope& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("intersect: dimension mismatch");
    if (p.is_empty_flag || q.is_empty_flag) return HPolytope::empty_set(p.dim());
    HPolytope r = HPolytope::unconstrained(p.dim());
    r.H.resize(p.rows() + q.rows(), p.dim());
    r.h.resize(p.rows() + q.rows());
    r.H << p.H, q.H;
    r.h << p.h, q.h;
    return r;
}

bool certified_empty(const HPolytope& p) {
    if (p.is_empty_flag) return true;
    if (p.rows() == 0) return false;
    LpProblem lp = LpProblem::make(p.dim());
    lp.a_ub = p.H;
    lp.b_ub = p.h;
    LpResult r = solve_lp(lp);
    if (r.status == LpStatus::Failed) throw std::runtime_error("certified_empty: LP solver failure");
    return r.status == LpStatus::Infeasible;
}

namespace {

// max dir'x subject to selected rows; value capped at `cap` to keep the LP
// bounded during redundancy tests.
SupportResult capped_support(const Eigen::MatrixXd& H, const Eigen::VectorXd& h,
                             const std::vector<int>& active, const Eigen::VectorXd& dir,
                             double cap) {
    LpProblem lp = LpProblem::make(static_cast<int>(dir.size()));
    const int m = static_cast<int>(active.size());
    const bool capped = std::isfinite(cap);
    lp.a_ub.resize(m + (capped ? 1 : 0), dir.size());
    lp.b_ub.resize(m + (capped ? 1 : 0));
    for (int i = 0; i < m; ++i) {
        lp.a_ub.row(i) = H.row(active[static_cast<size_t>(i)]);
        lp.b_ub(i) = h(active[static_cast<size_t>(i)]);
    }
    if (capped) {
        lp.a_ub.row(m) = dir.transpose();
        lp.b_ub(m) = cap;
    }
    lp.c = -dir;
    LpResult r = solve_lp(lp);
    SupportResult s;
    s.status = r.status;
    if (r.status == LpStatus::Optimal) {
        s.value = -r.objective;
        s.point = r.x;
    }
    return s;
}

}  // namespace

HPolytope reduce(const HPolytope& p, double eps_red) {
    if (p.is_empty_flag) return HPolytope::empty_set(p.dim());
    if (p.rows() == 0) return p;
    if (certified_empty(p)) return HPolytope::empty_set(p.dim());

    // normalize rows, drop vacuous ones
    Eigen::MatrixXd H = p.H;
    Eigen::VectorXd h = p.h;
    std::vector<int> keep;
    for (int j = 0; j < H.rows(); ++j) {
        double nrm = H.row(j).norm();
        if (nrm < 1e-13) {
            if (h(j) < -1e-12) return HPolytope::empty_set(p.dim());
            continue;  // 0'x <= nonneg: vacuous
        }
        H.row(j) /= nrm;
        h(j) /= nrm;
        keep.push_back(j);
    }

    std::vector<int> active = keep;
    for (int idx = static_cast<int>(active.size()) - 1; idx >= 0; --idx) {
        int j = active[static_cast<size_t>(idx)];
        std::vector<int> others;
        others.reserve(active.size() - 1);
        for (int r : active) {
            if (r != j) others.push_back(r);
        }
        if (others.empty()) break;  // a single row is never redundant
        Eigen::VectorXd dir = H.row(j).transpose();
        SupportResult s = capped_support(H, h, others, dir, h(j) + 1.0);
        if (s.status == LpStatus::Failed) throw std::runtime_error("reduce: LP solver failure");
        if (s.status == LpStatus::Optimal && s.value <= h(j) + eps_red) {
            active.erase(active.begin() + idx);
        }
    }

    HPolytope out = HPolytope::unconstrained(p.dim());
    out.H.resize(static_cast<int>(active.size()), p.dim());
    out.h.resize(static_cast<int>(active.size()));
    for (size_t i = 0; i < active.size(); ++i) {
        out.H.row(static_cast<int>(i)) = H.row(active[i]);
        out.h(static_cast<int>(i)) = h(active[i]);
    }
    return out;
}

SupportResult support(const HPolytope& p, const Eigen::VectorXd& dir) {
    if (p.is_empty_flag) return SupportResult{LpStatus::Infeasible, 0.0, {}};
    std::vector<int> all(static_cast<size_t>(p.rows()));
    for (int i = 0; i < p.rows(); ++i) all[static_cast<size_t>(i)] = i;
    return capped_support(p.H, p.h, all, dir, kInf);
}

bool is_subset(const HPolytope& p, const HPolytope& q, double eps) {
    if (p.dim() != q.dim()) throw std::invalid_argument("is_subset: dimension mismatch");
    if (p.is_empty_flag) return true;
    for (int j = 0; j < q.rows(); ++j) {
        Eigen::VectorXd dir = q.H.row(j).transpose();
        double nrm = dir.norm();
        if (nrm < 1e-13) {
            if (q.h(j) < -eps) return false;
            continue;
        }
        SupportResult s = support(p, dir);
        if (s.status == LpStatus::Unbounded) return false;
        if (s.status == LpStatus::Infeasible) return true;  // p empty after all
        if (s.status == LpStatus::Failed) throw std::runtime_error("is_subset: LP solver failure");
        if (s.value > q.h(j) + eps * std::max(1.0, nrm)) return false;
    }
    return true;
}

bool set_equal(const HPolytope& p, const HPolytope& q, double eps) {
    return is_subset(p, q, eps) && is_subset(q, p, eps);
}

double gauge(const HPolytope& p, const Eigen::VectorXd& x) {
    if (p.is_empty_flag) throw std::domain_error("gauge: empty set");
    if (x.size() != p.dim()) throw std::invalid_argument("gauge: dimension mismatch");
    double g = 0.0;
    for (int j = 0; j < p.rows(); ++j) {
        double num = p.H.row(j).dot(x);
        if (p.H.row(j).norm() < 1e-13) continue;
        if (p.h(j) <= 0.0) {
            throw std::domain_error("gauge: origin not strictly interior (row " + std::to_string(j) + ")");
        }
        g = std::max(g, num / p.h(j));
    }
    return std::max(g, 0.0);
}

double dual_norm(const Eigen::VectorXd& v, double p) {
    if (p < 1.0) throw std::invalid_argument("dual_norm: p must be >= 1");
    if (p == 1.0) return v.lpNorm<Eigen::Infinity>();
    if (p == 2.0) return v.norm();
    if (std::isinf(p)) return v.lpNorm<1>();
    double q = p / (p - 1.0);
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), q);
    return std::pow(s, 1.0 / q);
}

HPolytope tighten_local_norm(const HPolytope& p, const Eigen::MatrixXd& col_blocks,
                             double sigma, double norm_p,
                             const std::vector<std::pair<int, int>>& blocks) {
    if (norm_p < 1.0) throw std::invalid_argument("tighten_local_norm: p must be >= 1");
    if (sigma < 0.0) throw std::invalid_argument("tighten_local_norm: sigma must be >= 0");
    if (col_blocks.rows() != p.rows()) {
        throw std::invalid_argument("tighten_local_norm: coefficient row count mismatch");
    }
    HPolytope out = p;
    if (sigma == 0.0) return out;
    for (int j = 0; j < p.rows(); ++j) {
        double backoff = 0.0;
        for (const auto& [start, len] : blocks) {
            backoff += dual_norm(col_blocks.row(j).segment(start, len).transpose(), norm_p);
        }
        out.h(j) -= sigma * backoff;
    }
    return out;
}

HPolytope tighten_polytopic(const HPolytope& p, const Eigen::MatrixXd& dist_coeffs,
                            const Eigen::MatrixXd& G, const Eigen::VectorXd& g) {
    if (dist_coeffs.rows() != p.rows()) {
        throw std::invalid_argument("tighten_polytopic: coefficient row count mismatch");
    }
    if (G.rows() != g.size() || G.cols() != dist_coeffs.cols()) {
        throw std::invalid_argument("tighten_polytopic: disturbance polytope dimension mismatch");
    }
    HPolytope out = p;
    const int mg = static_cast<int>(G.rows());
    for (int j = 0; j < p.rows(); ++j) {
        if (dist_coeffs.row(j).norm() < 1e-14) continue;
        LpProblem lp = LpProblem::make(mg);
        lp.c = g;
        lp.a_eq = G.transpose();
        lp.b_eq = dist_coeffs.row(j).transpose();
        lp.bounds.assign(static_cast<size_t>(mg), {0.0, kInf});
        LpResult r = solve_lp(lp);
        if (r.status != LpStatus::Optimal) {
            throw std::runtime_error("tighten_polytopic: worst case unbounded for row " + std::to_string(j) +
                                     " (inner LP " + std::string(to_string(r.status)) + ")");
        }
        out.h(j) -= r.objective;
    }
    return out;
}

SupportPoints support_points(const HPolytope& p, int k, std::uint64_t seed) {
    SupportPoints out;
    if (k <= 0) return out;
    Rng rng(seed);
    const int n = p.dim();
    while (static_cast<int>(out.points.size()) + out.skipped_unbounded < k) {
        Eigen::VectorXd dir(n);
        for (int i = 0; i < n; ++i) dir(i) = rng.normal();
        double nrm = dir.norm();
        if (nrm < 1e-12) continue;
        dir /= nrm;
        SupportResult s = support(p, dir);
        if (s.status == LpStatus::Unbounded) {
            ++out.skipped_unbounded;
            continue;
        }
        if (s.status != LpStatus::Optimal) {
            throw std::runtime_error("support_points: LP failure");
        }
        out.points.push_back(s.point);
    }
    return out;
}

std::vector<Eigen::VectorXd> enumerate_vertices(const HPolytope& p) {
    const int n = p.dim();
    if (n > 3) throw std::invalid_argument("enumerate_vertices: dim > 3 unsupported");
    std::vector<Eigen::VectorXd> verts;
    const int m = p.rows();
    std::vector<int> idx(static_cast<size_t>(n));
    // iterate over all n-subsets of rows
    std::vector<int> comb(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) comb[static_cast<size_t>(i)] = i;
    if (m < n) return verts;
    while (true) {
        Eigen::MatrixXd A(n, n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
            A.row(i) = p.H.row(comb[static_cast<size_t>(i)]);
            b(i) = p.h(comb[static_cast<size_t>(i)]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.isInvertible()) {
            Eigen::VectorXd v = lu.solve(b);
            if (p.contains(v, 1e-8)) {
                bool dup = false;
                for (const auto& w : verts) {
                    if ((w - v).lpNorm<Eigen::Infinity>() < 1e-9) { dup = true; break; }
                }
                if (!dup) verts.push_back(v);
            }
        }
        // next combination
        int i = n - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == m - n + i) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return verts;
}

}  // namespace dlmpc
