#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

namespace dlmpc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEpsFeas = 1e-9;

enum class LpStatus { Optimal, Infeasible, Unbounded, Failed };

const char* to_string(LpStatus s);

// min c'x  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,  lo <= x <= hi.
// Empty `bounds` means all variables free.
struct LpProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd a_ub;
    Eigen::VectorXd b_ub;
    Eigen::MatrixXd a_eq;
    Eigen::VectorXd b_eq;
    std::vector<std::pair<double, double>> bounds;

    static LpProblem make(int nvars);
};

struct LpResult {
    LpStatus status = LpStatus::Failed;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
};

// Dense two-phase tableau simplex with Bland's rule: deterministic and
// cycle-free. Sized for the small d-local subproblems this project produces.
LpResult solve_lp(const LpProblem& prob);

}  // namespace dlmpc
