#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "dlmpc/lp.hpp"

namespace dlmpc {

inline constexpr double kEpsRed = 1e-9;
inline constexpr double kEpsSet = 1e-7;

// Halfspace representation {x : H x <= h}. An explicitly flagged empty set is
// used instead of exceptions so that set iterations can carry emptiness
// through a pipeline.
struct HPolytope {
    Eigen::MatrixXd H;
    Eigen::VectorXd h;
    bool is_empty_flag = false;

    HPolytope() = default;
    HPolytope(Eigen::MatrixXd H_, Eigen::VectorXd h_);

    int dim() const { return static_cast<int>(H.cols()); }
    int rows() const { return static_cast<int>(H.rows()); }

    bool contains(const Eigen::VectorXd& x, double eps = kEpsFeas) const;

    static HPolytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
    static HPolytope cube(int n, double radius);          // |x_i| <= radius
    static HPolytope unconstrained(int n);                // zero rows
    static HPolytope empty_set(int n);
};

// Row-stacked H-rep of the intersection (not reduced).
HPolytope intersect(const HPolytope& p, const HPolytope& q);

// Certified emptiness via a phase-1 LP on the rows.
bool certified_empty(const HPolytope& p);

// Remove redundant rows: each retained row's support value over the other
// rows exceeds its offset by more than eps_red. Rows are 2-norm normalized.
HPolytope reduce(const HPolytope& p, double eps_red = kEpsRed);

struct SupportResult {
    LpStatus status = LpStatus::Failed;
    double value = 0.0;
    Eigen::VectorXd point;
};

// max dir'x over p
SupportResult support(const HPolytope& p, const Eigen::VectorXd& dir);

bool is_subset(const HPolytope& p, const HPolytope& q, double eps = kEpsSet);
bool set_equal(const HPolytope& p, const HPolytope& q, double eps = kEpsSet);

// Minkowski gauge inf{eta >= 0 : x in eta*P}. Requires the origin strictly
// inside (every nontrivial row needs h_j > 0); throws std::domain_error
// otherwise.
double gauge(const HPolytope& p, const Eigen::VectorXd& x);

// Dual norm of the l_p norm: p=1 <-> inf, 2 <-> 2, inf <-> 1, else q=p/(p-1).
double dual_norm(const Eigen::VectorXd& v, double p);

// Offset tightening against per-block norm-bounded disturbances. col_blocks
// holds, row for row with p, the coefficients multiplying the disturbance;
// `blocks` lists (start, length) column ranges of independently bounded
// sub-blocks. New offsets: h_j - sigma * sum_b ||row_j restricted to b||_*.
HPolytope tighten_local_norm(const HPolytope& p, const Eigen::MatrixXd& col_blocks,
                             double sigma, double norm_p,
                             const std::vector<std::pair<int, int>>& blocks);

// Offset tightening against {d : G d <= g}: per row j solve
// min xi'g s.t. xi >= 0, xi'G = dist_coeffs(j,:); new offset h_j - obj_j.
HPolytope tighten_polytopic(const HPolytope& p, const Eigen::MatrixXd& dist_coeffs,
                            const Eigen::MatrixXd& G, const Eigen::VectorXd& g);

struct SupportPoints {
    std::vector<Eigen::VectorXd> points;
    int skipped_unbounded = 0;
};

// k boundary points from maximizing seeded random directions.
SupportPoints support_points(const HPolytope& p, int k, std::uint64_t seed);

// Exact vertex enumeration for dim <= 3 (used for disturbance extreme points;
// general-dimension V-representation is out of scope).
std::vector<Eigen::VectorXd> enumerate_vertices(const HPolytope& p);

}  // namespace dlmpc
