#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace dlmpc {

struct Subsystem {
    std::vector<int> states;
    std::vector<int> inputs;
};

// Networked LTI system x+ = A x + B u + w, partitioned into subsystems with
// a directed interconnection graph derived from the nonzero blocks: edge
// j -> i whenever block [A]_ij or [B]_ij is nonzero.
struct SystemModel {
    int n = 0;
    int p = 0;
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    std::vector<Subsystem> subsystems;
    std::vector<std::vector<int>> succ;  // succ[j] = {i : edge j -> i}, sorted
    std::vector<int> state_owner;        // state index -> subsystem
    std::vector<int> input_owner;

    int num_subsystems() const { return static_cast<int>(subsystems.size()); }

    static SystemModel from_matrices(Eigen::MatrixXd A, Eigen::MatrixXd B,
                                     std::vector<Subsystem> subsystems);

    // Rebuild the edge set from the current matrices (consistency check).
    std::vector<std::vector<int>> edges_from_matrices() const;
};

struct NeighborTable {
    int d = 0;
    std::vector<std::vector<int>> in_sets;   // in_i(d), sorted, always contains i
    std::vector<std::vector<int>> out_sets;  // out_i(d)
    Eigen::MatrixXi dist;                    // directed hop distance, -1 unreachable

    bool in_contains(int i, int j) const;
    int hop_distance(int from, int to) const { return dist(from, to); }
};

// Directed BFS neighborhoods at hop radius d >= 0.
NeighborTable neighbor_table(const SystemModel& model, int d);

// Block-level sparsity support for the system responses: block (i, j) of any
// Phi_x / Phi_u block is allowed iff j is in in_i(d). The same mask applies
// at every time index.
struct SupportMask {
    int d = 0;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> allow;  // N x N

    bool allowed(int row_subsys, int col_subsys) const { return allow(row_subsys, col_subsys); }
    bool all_true() const { return allow.all(); }
};

SupportMask locality_mask(const SystemModel& model, const NeighborTable& table, int horizon);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Randomized swing-dynamics benchmark on a rows x cols mesh. Each node has
// two states (phase angle, frequency) and one input; grid adjacencies are
// kept with probability connect_prob and the sampled graph is re-drawn until
// weakly connected. Deterministic for a fixed seed.
SystemModel build_grid_benchmark(int rows, int cols, double connect_prob, double dt,
                                 Interval inertia_inv_range, Interval damping_range,
                                 Interval coupling_range, std::uint64_t seed);

}  // namespace dlmpc
