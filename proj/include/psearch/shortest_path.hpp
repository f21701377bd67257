#pragma once

#include <optional>
#include <queue>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/instance.hpp"

namespace psearch {

struct PathResult {
    double distance = 0.0;
    std::vector<int> verts; // source..target inclusive
};

// Single-pair Dijkstra where every vertex on the path except the target must
// belong to `allowed` (the target itself is exempt). Pass nullptr for an
// unrestricted search. Returns nullopt when no admissible path exists.
inline std::optional<PathResult> restricted_shortest_path(const Instance& inst, int source,
                                                          int target,
                                                          const std::vector<bool>* allowed) {
    int n = inst.vertex_count();
    if (source < 0 || source >= n || target < 0 || target >= n) {
        throw std::out_of_range("vertex id out of range");
    }
    if (source == target) return PathResult{0.0, {source}};

    std::vector<double> dist(n, kInfinity);
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == target) break;
        // Only vertices inside the restriction may be stepped through.
        if (allowed && !(*allowed)[u]) continue;
        for (const Adj& a : inst.adj[u]) {
            double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                prev[a.to] = u;
                heap.push({nd, a.to});
            }
        }
    }
    if (dist[target] == kInfinity) return std::nullopt;

    PathResult out;
    out.distance = dist[target];
    for (int v = target; v != -1; v = prev[v]) out.verts.push_back(v);
    std::reverse(out.verts.begin(), out.verts.end());
    return out;
}

inline std::optional<PathResult> restricted_shortest_path(const Instance& inst, int source,
                                                          int target,
                                                          const std::vector<bool>& allowed) {
    return restricted_shortest_path(inst, source, target, &allowed);
}

inline std::optional<PathResult> shortest_path(const Instance& inst, int source, int target) {
    return restricted_shortest_path(inst, source, target, nullptr);
}

// Distances from `source` to every vertex (unrestricted).
inline std::vector<double> shortest_distances(const Instance& inst, int source) {
    int n = inst.vertex_count();
    std::vector<double> dist(n, kInfinity);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const Adj& a : inst.adj[u]) {
            double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                heap.push({nd, a.to});
            }
        }
    }
    return dist;
}

inline std::vector<std::vector<double>> all_pairs_shortest_distances(const Instance& inst) {
    std::vector<std::vector<double>> out;
    out.reserve(inst.vertex_count());
    for (int v = 0; v < inst.vertex_count(); ++v) out.push_back(shortest_distances(inst, v));
    return out;
}

inline std::vector<bool> reachable_from(const Instance& inst, int source) {
    std::vector<bool> seen(inst.vertex_count(), false);
    std::vector<int> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const Adj& a : inst.adj[u]) {
            if (!seen[a.to]) {
                seen[a.to] = true;
                stack.push_back(a.to);
            }
        }
    }
    return seen;
}

inline bool is_connected(const Instance& inst) {
    auto seen = reachable_from(inst, 0);
    for (bool b : seen) {
        if (!b) return false;
    }
    return true;
}

} // namespace psearch
