#pragma once

// Small graph fixtures and brute-force helpers shared by the test suites.
// Nothing here calls into the engine's estimation or enumeration code.

#include "accesswalk/network.hpp"

#include <cstdlib>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace accesswalk::testing {

inline StreetNetwork path_graph(std::size_t n)
{
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return make_network(n, edges);
}

inline StreetNetwork cycle_graph(std::size_t n)
{
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    return make_network(n, edges);
}

/// K_{1,leaves}: center is node 0, leaves are 1..leaves.
inline StreetNetwork star_graph(std::size_t leaves)
{
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return make_network(leaves + 1, edges);
}

/// Simple random graph with roughly `edge_count` edges.
inline StreetNetwork random_graph(std::size_t n, std::size_t edge_count, std::mt19937& rng)
{
    std::set<std::pair<NodeId, NodeId>> chosen;
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (std::size_t tries = 0; chosen.size() < edge_count && tries < 20 * edge_count; ++tries) {
        NodeId u = pick(rng), v = pick(rng);
        if (u == v) continue;
        chosen.emplace(std::min(u, v), std::max(u, v));
    }
    std::vector<std::pair<NodeId, NodeId>> edges(chosen.begin(), chosen.end());
    return make_network(n, edges);
}

inline int manhattan(std::size_t cols, NodeId a, NodeId b)
{
    int ra = static_cast<int>(a / cols), ca = static_cast<int>(a % cols);
    int rb = static_cast<int>(b / cols), cb = static_cast<int>(b % cols);
    return std::abs(ra - rb) + std::abs(ca - cb);
}

/// Grid nodes within Manhattan distance `radius` of any center.
inline std::vector<NodeId> manhattan_ball(std::size_t rows, std::size_t cols,
                                          const std::vector<NodeId>& centers, int radius)
{
    std::vector<NodeId> out;
    for (NodeId v = 0; v < rows * cols; ++v)
        for (NodeId c : centers)
            if (manhattan(cols, c, v) <= radius) {
                out.push_back(v);
                break;
            }
    return out;
}

inline bool on_grid_border(std::size_t rows, std::size_t cols, NodeId v)
{
    std::size_t r = v / cols, c = v % cols;
    return r == 0 || c == 0 || r + 1 == rows || c + 1 == cols;
}

}  // namespace accesswalk::testing
