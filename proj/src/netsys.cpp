#include "dlmpc/netsys.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "dlmpc/rng.hpp"

namespace dlmpc {

namespace {

bool block_nonzero(const Eigen::MatrixXd& M, const std::vector<int>& rows, const std::vector<int>& cols) {
    for (int r : rows) {
        for (int c : cols) {
            if (M(r, c) != 0.0) return true;
        }
    }
    return false;
}

}  // namespace

std::vector<std::vector<int>> SystemModel::edges_from_matrices() const {
    const int N = num_subsystems();
    std::vector<std::vector<int>> succ_out(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            if (block_nonzero(A, subsystems[static_cast<size_t>(i)].states, subsystems[static_cast<size_t>(j)].states) ||
                block_nonzero(B, subsystems[static_cast<size_t>(i)].states, subsystems[static_cast<size_t>(j)].inputs)) {
                succ_out[static_cast<size_t>(j)].push_back(i);
            }
        }
    }
    for (auto& v : succ_out) std::sort(v.begin(), v.end());
    return succ_out;
}

SystemModel SystemModel::from_matrices(Eigen::MatrixXd A, Eigen::MatrixXd B,
                                       std::vector<Subsystem> subsystems) {
    SystemModel m;
    m.n = static_cast<int>(A.rows());
    m.p = static_cast<int>(B.cols());
    if (A.cols() != m.n || B.rows() != m.n) {
        throw std::invalid_argument("SystemModel: A must be n x n and B n x p");
    }
    m.A = std::move(A);
    m.B = std::move(B);
    m.subsystems = std::move(subsystems);

    m.state_owner.assign(static_cast<size_t>(m.n), -1);
    m.input_owner.assign(static_cast<size_t>(m.p), -1);
    for (int i = 0; i < m.num_subsystems(); ++i) {
        for (int s : m.subsystems[static_cast<size_t>(i)].states) {
            if (s < 0 || s >= m.n || m.state_owner[static_cast<size_t>(s)] != -1) {
                throw std::invalid_argument("SystemModel: state index sets must partition 0..n-1");
            }
            m.state_owner[static_cast<size_t>(s)] = i;
        }
        for (int a : m.subsystems[static_cast<size_t>(i)].inputs) {
            if (a < 0 || a >= m.p || m.input_owner[static_cast<size_t>(a)] != -1) {
                throw std::invalid_argument("SystemModel: input index sets must partition 0..p-1");
            }
            m.input_owner[static_cast<size_t>(a)] = i;
        }
    }
    for (int s = 0; s < m.n; ++s) {
        if (m.state_owner[static_cast<size_t>(s)] == -1) {
            throw std::invalid_argument("SystemModel: state " + std::to_string(s) + " unassigned");
        }
    }
    for (int a = 0; a < m.p; ++a) {
        if (m.input_owner[static_cast<size_t>(a)] == -1) {
            throw std::invalid_argument("SystemModel: input " + std::to_string(a) + " unassigned");
        }
    }
    m.succ = m.edges_from_matrices();
    return m;
}

bool NeighborTable::in_contains(int i, int j) const {
    const auto& v = in_sets[static_cast<size_t>(i)];
    return std::binary_search(v.begin(), v.end(), j);
}

NeighborTable neighbor_table(const SystemModel& model, int d) {
    if (d < 0) throw std::invalid_argument("neighbor_table: d must be >= 0");
    const int N = model.num_subsystems();
    NeighborTable t;
    t.d = d;
    t.dist = Eigen::MatrixXi::Constant(N, N, -1);
    for (int src = 0; src < N; ++src) {
        std::deque<int> queue{src};
        t.dist(src, src) = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : model.succ[static_cast<size_t>(v)]) {
                if (t.dist(src, w) == -1) {
                    t.dist(src, w) = t.dist(src, v) + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    t.in_sets.resize(static_cast<size_t>(N));
    t.out_sets.resize(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (t.dist(j, i) >= 0 && t.dist(j, i) <= d) t.in_sets[static_cast<size_t>(i)].push_back(j);
            if (t.dist(i, j) >= 0 && t.dist(i, j) <= d) t.out_sets[static_cast<size_t>(i)].push_back(j);
        }
    }
    return t;
}

SupportMask locality_mask(const SystemModel& model, const NeighborTable& table, int horizon) {
    if (horizon < 1) throw std::invalid_argument("locality_mask: T must be >= 1");
    const int N = model.num_subsystems();
    SupportMask m;
    m.d = table.d;
    m.allow.setConstant(N, N, false);
    for (int i = 0; i < N; ++i) {
        for (int j : table.in_sets[static_cast<size_t>(i)]) m.allow(i, j) = true;
    }
    return m;
}

namespace {

bool weakly_connected(int nodes, const std::vector<std::pair<int, int>>& edges) {
    if (nodes <= 1) return true;
    std::vector<std::vector<int>> adj(static_cast<size_t>(nodes));
    for (auto [a, b] : edges) {
        adj[static_cast<size_t>(a)].push_back(b);
        adj[static_cast<size_t>(b)].push_back(a);
    }
    std::vector<bool> seen(static_cast<size_t>(nodes), false);
    std::deque<int> queue{0};
    seen[0] = true;
    int count = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                ++count;
                queue.push_back(w);
            }
        }
    }
    return count == nodes;
}

}  // namespace

SystemModel build_grid_benchmark(int rows, int cols, double connect_prob, double dt,
                                 Interval inertia_inv_range, Interval damping_range,
                                 Interval coupling_range, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("build_grid_benchmark: rows, cols must be >= 1");
    if (connect_prob < 0.0 || connect_prob > 1.0) {
        throw std::invalid_argument("build_grid_benchmark: connect_prob must be in [0, 1]");
    }
    if (dt <= 0.0) throw std::invalid_argument("build_grid_benchmark: dt must be > 0");
    for (const Interval& iv : {inertia_inv_range, damping_range, coupling_range}) {
        if (iv.hi < iv.lo) throw std::invalid_argument("build_grid_benchmark: empty parameter range");
    }

    const int N = rows * cols;
    const int max_attempts = 1024;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));

        std::vector<double> m_inv(static_cast<size_t>(N)), damping(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            m_inv[static_cast<size_t>(i)] = rng.uniform(inertia_inv_range.lo, inertia_inv_range.hi);
            damping[static_cast<size_t>(i)] = rng.uniform(damping_range.lo, damping_range.hi);
        }

        // candidate mesh adjacencies in row-major order: right edge, then down edge
        std::vector<std::pair<int, int>> edges;
        std::vector<double> coupling;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                int node = r * cols + c;
                if (c + 1 < cols && rng.bernoulli(connect_prob)) {
                    edges.emplace_back(node, node + 1);
                    coupling.push_back(rng.uniform(coupling_range.lo, coupling_range.hi));
                }
                if (r + 1 < rows && rng.bernoulli(connect_prob)) {
                    edges.emplace_back(node, node + cols);
                    coupling.push_back(rng.uniform(coupling_range.lo, coupling_range.hi));
                }
            }
        }
        if (!weakly_connected(N, edges)) continue;

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * N, N);
        std::vector<double> k_total(static_cast<size_t>(N), 0.0);
        for (size_t e = 0; e < edges.size(); ++e) {
            k_total[static_cast<size_t>(edges[e].first)] += coupling[e];
            k_total[static_cast<size_t>(edges[e].second)] += coupling[e];
        }
        for (int i = 0; i < N; ++i) {
            A(2 * i, 2 * i) = 1.0;
            A(2 * i, 2 * i + 1) = dt;
            A(2 * i + 1, 2 * i) = -k_total[static_cast<size_t>(i)] * m_inv[static_cast<size_t>(i)] * dt;
            A(2 * i + 1, 2 * i + 1) = 1.0 - damping[static_cast<size_t>(i)] * m_inv[static_cast<size_t>(i)] * dt;
            B(2 * i + 1, i) = 1.0;
        }
        for (size_t e = 0; e < edges.size(); ++e) {
            auto [a, b] = edges[e];
            double k = coupling[e];
            A(2 * a + 1, 2 * b) = k * m_inv[static_cast<size_t>(a)] * dt;
            A(2 * b + 1, 2 * a) = k * m_inv[static_cast<size_t>(b)] * dt;
        }

        std::vector<Subsystem> subsystems(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            subsystems[static_cast<size_t>(i)].states = {2 * i, 2 * i + 1};
            subsystems[static_cast<size_t>(i)].inputs = {i};
        }
        return SystemModel::from_matrices(std::move(A), std::move(B), std::move(subsystems));
    }
    throw std::runtime_error("build_grid_benchmark: no weakly connected sample within retry budget");
}

}  // namespace dlmpc
