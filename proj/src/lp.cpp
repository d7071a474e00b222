#include "dlmpc/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace dlmpc {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Failed: return "failed";
    }
    return "?";
}

LpProblem LpProblem::make(int nvars) {
    LpProblem p;
    p.c = Eigen::VectorXd::Zero(nvars);
    p.a_ub.resize(0, nvars);
    p.b_ub.resize(0);
    p.a_eq.resize(0, nvars);
    p.b_eq.resize(0);
    return p;
}

namespace {

struct Tableau {
    Eigen::MatrixXd d;        // (m+1) x (ncols+1); last row cost, last col rhs
    std::vector<int> basis;   // per row, basic column index
    int m = 0;
    int ncols = 0;

    double& rhs(int r) { return d(r, ncols); }
    double& cost(int j) { return d(m, j); }

    void pivot(int r, int s) {
        d.row(r) /= d(r, s);
        for (int i = 0; i <= m; ++i) {
            if (i == r) continue;
            double f = d(i, s);
            if (f != 0.0) d.row(i) -= f * d.row(r);
        }
        basis[static_cast<size_t>(r)] = s;
    }
};

constexpr double kPivTol = 1e-9;

// Bland's rule iteration over columns `allowed[j]`. Returns LpStatus::Optimal
// when no improving column remains, Unbounded when a column has no blocking
// row, Failed on iteration blow-up.
LpStatus run_simplex(Tableau& t, const std::vector<bool>& allowed, int max_iter, int* iters) {
    for (int it = 0; it < max_iter; ++it) {
        int s = -1;
        for (int j = 0; j < t.ncols; ++j) {
            if (!allowed[static_cast<size_t>(j)]) continue;
            if (t.cost(j) < -kPivTol) { s = j; break; }  // lowest eligible index
        }
        if (s < 0) { *iters += it; return LpStatus::Optimal; }
        int r = -1;
        double best = kInf;
        for (int i = 0; i < t.m; ++i) {
            double a = t.d(i, s);
            if (a <= kPivTol) continue;
            double ratio = t.rhs(i) / a;
            if (ratio < best - 1e-12 ||
                (ratio < best + 1e-12 && (r < 0 || t.basis[static_cast<size_t>(i)] <
                                                       t.basis[static_cast<size_t>(r)]))) {
                best = ratio;
                r = i;
            }
        }
        if (r < 0) { *iters += it; return LpStatus::Unbounded; }
        t.pivot(r, s);
    }
    *iters += max_iter;
    return LpStatus::Failed;
}

}  // namespace

LpResult solve_lp(const LpProblem& prob) {
    const int n = static_cast<int>(prob.c.size());
    if (prob.a_ub.rows() != prob.b_ub.size() || prob.a_eq.rows() != prob.b_eq.size() ||
        (prob.a_ub.rows() > 0 && prob.a_ub.cols() != n) ||
        (prob.a_eq.rows() > 0 && prob.a_eq.cols() != n) ||
        (!prob.bounds.empty() && static_cast<int>(prob.bounds.size()) != n)) {
        throw std::invalid_argument("solve_lp: dimension mismatch");
    }

    // Map every original variable onto nonnegative standard-form variables.
    // col_pos / col_neg: indices of the + and - parts, offset: x = y+ - y- + shift.
    struct VarMap {
        int pos = -1, neg = -1;
        double shift = 0.0;
        double sign = 1.0;
    };
    std::vector<VarMap> vmap(static_cast<size_t>(n));
    std::vector<std::pair<int, double>> extra_ub;  // (std col, ub) rows y_pos <= u
    int nstd = 0;
    for (int j = 0; j < n; ++j) {
        double lo = -kInf, hi = kInf;
        if (!prob.bounds.empty()) { lo = prob.bounds[static_cast<size_t>(j)].first; hi = prob.bounds[static_cast<size_t>(j)].second; }
        if (lo > hi) return LpResult{LpStatus::Infeasible, Eigen::VectorXd::Zero(n), 0.0, 0};
        VarMap m;
        if (std::isfinite(lo)) {
            m.pos = nstd++;
            m.shift = lo;
            if (std::isfinite(hi)) extra_ub.emplace_back(m.pos, hi - lo);
        } else if (std::isfinite(hi)) {
            m.pos = nstd++;
            m.shift = hi;
            m.sign = -1.0;  // x = hi - y
        } else {
            m.pos = nstd++;
            m.neg = nstd++;
        }
        vmap[static_cast<size_t>(j)] = m;
    }

    const int m_ub = static_cast<int>(prob.a_ub.rows());
    const int m_eq = static_cast<int>(prob.a_eq.rows());
    const int m_bd = static_cast<int>(extra_ub.size());
    const int m = m_ub + m_bd + m_eq;

    // structural std columns + one slack per inequality row
    const int n_slack = m_ub + m_bd;
    Tableau t;
    t.m = m;
    t.ncols = nstd + n_slack + m;  // worst case: artificial per row
    t.d = Eigen::MatrixXd::Zero(m + 1, t.ncols + 1);
    t.basis.assign(static_cast<size_t>(m), -1);

    auto emit_row = [&](int r, const Eigen::VectorXd& a, double b) {
        for (int j = 0; j < n; ++j) {
            const VarMap& vm = vmap[static_cast<size_t>(j)];
            double aj = a(j);
            if (aj == 0.0) continue;
            t.d(r, vm.pos) += aj * vm.sign;
            if (vm.neg >= 0) t.d(r, vm.neg) -= aj;
            b -= aj * vm.shift;
        }
        t.rhs(r) = b;
    };

    for (int i = 0; i < m_ub; ++i) emit_row(i, prob.a_ub.row(i), prob.b_ub(i));
    for (int i = 0; i < m_bd; ++i) {
        int r = m_ub + i;
        t.d(r, extra_ub[static_cast<size_t>(i)].first) = 1.0;
        t.rhs(r) = extra_ub[static_cast<size_t>(i)].second;
    }
    for (int i = 0; i < m_eq; ++i) emit_row(m_ub + m_bd + i, prob.a_eq.row(i), prob.b_eq(i));

    // slacks for inequality rows
    for (int i = 0; i < n_slack; ++i) t.d(i, nstd + i) = 1.0;

    // normalize rhs >= 0, then pick starting basis: slack where usable, else artificial
    int n_art = 0;
    std::vector<bool> is_artificial(static_cast<size_t>(t.ncols), false);
    for (int i = 0; i < m; ++i) {
        if (t.rhs(i) < 0.0) t.d.row(i) *= -1.0;
        bool slack_ok = i < n_slack && t.d(i, nstd + i) > 0.5;
        if (slack_ok) {
            t.basis[static_cast<size_t>(i)] = nstd + i;
        } else {
            int aj = nstd + n_slack + n_art++;
            t.d(i, aj) = 1.0;
            t.basis[static_cast<size_t>(i)] = aj;
            is_artificial[static_cast<size_t>(aj)] = true;
        }
    }

    LpResult res;
    res.x = Eigen::VectorXd::Zero(n);
    const int max_iter = 2000 + 200 * (m + t.ncols);

    // phase 1: minimize sum of artificials
    if (n_art > 0) {
        for (int j = 0; j <= t.ncols; ++j) t.d(m, j) = 0.0;
        for (int j = 0; j < t.ncols; ++j) {
            if (is_artificial[static_cast<size_t>(j)]) t.d(m, j) = 1.0;
        }
        for (int i = 0; i < m; ++i) {
            if (is_artificial[static_cast<size_t>(t.basis[static_cast<size_t>(i)])]) t.d.row(m) -= t.d.row(i);
        }
        std::vector<bool> allowed(static_cast<size_t>(t.ncols), true);
        LpStatus st = run_simplex(t, allowed, max_iter, &res.iterations);
        if (st == LpStatus::Failed) { res.status = st; return res; }
        if (-t.rhs(m) > 1e-7) { res.status = LpStatus::Infeasible; return res; }
        // drive remaining artificials out of the basis
        for (int i = 0; i < m; ++i) {
            if (!is_artificial[static_cast<size_t>(t.basis[static_cast<size_t>(i)])]) continue;
            int s = -1;
            for (int j = 0; j < nstd + n_slack; ++j) {
                if (std::abs(t.d(i, j)) > 1e-8) { s = j; break; }
            }
            if (s >= 0) t.pivot(i, s);
            // else: redundant row; the artificial stays basic at value zero
        }
    }

    // phase 2 cost row
    for (int j = 0; j <= t.ncols; ++j) t.d(m, j) = 0.0;
    double const_term = 0.0;
    for (int j = 0; j < n; ++j) {
        const VarMap& vm = vmap[static_cast<size_t>(j)];
        double cj = prob.c(j);
        if (cj == 0.0) continue;
        t.cost(vm.pos) += cj * vm.sign;
        if (vm.neg >= 0) t.cost(vm.neg) -= cj;
        const_term += cj * vm.shift;
    }
    for (int i = 0; i < m; ++i) {
        double cb = t.cost(t.basis[static_cast<size_t>(i)]);
        if (cb != 0.0) t.d.row(m) -= cb * t.d.row(i);
    }
    std::vector<bool> allowed(static_cast<size_t>(t.ncols), true);
    for (int j = 0; j < t.ncols; ++j) {
        if (is_artificial[static_cast<size_t>(j)]) allowed[static_cast<size_t>(j)] = false;
    }
    LpStatus st = run_simplex(t, allowed, max_iter, &res.iterations);
    if (st != LpStatus::Optimal) { res.status = st; return res; }

    Eigen::VectorXd y = Eigen::VectorXd::Zero(nstd);
    for (int i = 0; i < m; ++i) {
        int b = t.basis[static_cast<size_t>(i)];
        if (b < nstd) y(b) = t.rhs(i);
    }
    for (int j = 0; j < n; ++j) {
        const VarMap& vm = vmap[static_cast<size_t>(j)];
        double v = vm.shift + vm.sign * y(vm.pos);
        if (vm.neg >= 0) v -= y(vm.neg);
        res.x(j) = v;
    }
    res.objective = prob.c.dot(res.x);
    (void)const_term;
    res.status = LpStatus::Optimal;
    return res;
}

}  // namespace dlmpc
