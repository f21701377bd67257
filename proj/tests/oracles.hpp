// Test-only oracles: deliberately naive, independent routes to the values
// the library computes cleverly. Nothing here may call the solver under
// test.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "psearch/instance.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/random.hpp"
#include "psearch/transforms.hpp"

namespace oracles {

using namespace psearch;

// Textbook Bellman-Ford single-source distances.
inline std::vector<double> bellman_ford(const Instance& inst, int source) {
    int n = inst.vertex_count();
    std::vector<double> dist(n, kInfinity);
    dist[source] = 0.0;
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (const Edge& e : inst.edges) {
            if (dist[e.u] + e.weight < dist[e.v]) {
                dist[e.v] = dist[e.u] + e.weight;
                changed = true;
            }
            if (dist[e.v] + e.weight < dist[e.u]) {
                dist[e.u] = dist[e.v] + e.weight;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dist;
}

// Kruskal minimum spanning tree weight of the component containing `root`.
inline double kruskal_mst_weight(const Instance& inst, int root) {
    std::vector<int> parent(inst.vertex_count());
    for (int v = 0; v < inst.vertex_count(); ++v) parent[v] = v;
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    std::vector<Edge> edges = inst.edges;
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.weight < b.weight; });
    std::vector<Edge> chosen;
    for (const Edge& e : edges) {
        if (find(e.u) != find(e.v)) {
            parent[find(e.u)] = find(e.v);
            chosen.push_back(e);
        }
    }
    double weight = 0.0;
    for (const Edge& e : chosen) {
        // Only edges inside root's component count.
        if (find(e.u) == find(root)) weight += e.weight;
    }
    return weight;
}

// Every walk from the start with at most `max_edges` edges, the bare start
// included.
inline std::vector<std::vector<int>> enumerate_walks(const Instance& inst, int max_edges) {
    std::vector<std::vector<int>> walks;
    std::vector<int> current{inst.start};
    std::function<void(int, int)> grow = [&](int v, int depth) {
        walks.push_back(current);
        if (depth == max_edges) return;
        for (const Adj& a : inst.adj[v]) {
            current.push_back(a.to);
            grow(a.to, depth + 1);
            current.pop_back();
        }
    };
    grow(inst.start, 0);
    return walks;
}

// Brute-force Max-Probability over enumerated walks.
inline double brute_force_max_prob(const Instance& inst, double budget, int max_edges) {
    double best = 0.0;
    for (const auto& verts : enumerate_walks(inst, max_edges)) {
        Walk w = make_walk(inst, verts);
        best = std::max(best, success_probability(inst, w, budget));
    }
    return best;
}

// Brute-force Min-Budget over enumerated walks and their jump-set budgets.
inline std::optional<double> brute_force_min_budget(const Instance& inst, double p_succ,
                                                    int max_edges) {
    std::optional<double> best;
    for (const auto& verts : enumerate_walks(inst, max_edges)) {
        Walk w = make_walk(inst, verts);
        auto b = minimal_budget_for_walk(inst, w, p_succ);
        if (b && (!best || *b < *best)) best = b;
    }
    return best;
}

// Fine-grid scan for the minimal feasible budget of one fixed walk.
inline std::optional<double> grid_min_budget(const Instance& inst, const Walk& walk, double p_succ,
                                             double step = 1e-3) {
    double hi = walk.total_cost();
    for (int j = 0; j < walk.length(); ++j) {
        const auto& tiers = inst.sites[walk.verts[j]].tiers;
        if (!tiers.empty()) hi = std::max(hi, walk.prefix_cost[j] + tiers.back().cost);
    }
    for (double b = 0.0; b <= hi + step; b += step) {
        if (approx_geq(success_probability(inst, walk, b), p_succ)) return b;
    }
    return std::nullopt;
}

// Brute-force Deadline-TSP: depth-first over all walks, cut only once the
// arrival time passes every deadline still outstanding.
inline double brute_force_dtsp_prize(const DtspInstance& dtsp, int max_edges) {
    double best = 0.0;
    std::vector<bool> collected(dtsp.vertex_count(), false);
    std::function<void(int, double, double, int)> grow = [&](int v, double length, double prize,
                                                             int depth) {
        best = std::max(best, prize);
        if (depth == max_edges) return;
        for (const Adj& a : dtsp.adj[v]) {
            int u = a.to;
            double nl = length + a.weight;
            bool fresh = !collected[u] && dtsp.prize[u] > 0.0 && approx_leq(nl, dtsp.deadline[u]);
            if (fresh) collected[u] = true;
            grow(u, nl, prize + (fresh ? dtsp.prize[u] : 0.0), depth + 1);
            if (fresh) collected[u] = false;
        }
    };
    bool root_fresh = dtsp.prize[dtsp.root] > 0.0 && approx_leq(0.0, dtsp.deadline[dtsp.root]);
    if (root_fresh) collected[dtsp.root] = true;
    grow(dtsp.root, 0.0, root_fresh ? dtsp.prize[dtsp.root] : 0.0, 0);
    return best;
}

// Random connected instance for seeded small-scale comparisons: a spanning
// tree plus extra edges, uniform weights, up to `max_tiers` tiers per
// non-start vertex.
inline Instance random_instance(std::uint64_t seed, int max_vertices, int max_tiers,
                                double cost_lo = 1.0, double cost_hi = 8.0,
                                double weight_lo = 1.0, double weight_hi = 6.0) {
    Rng rng(seed);
    int n = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_vertices - 1)));
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        int parent = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
        edges.push_back({parent, v, rng.uniform(weight_lo, weight_hi)});
    }
    int extra = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    for (int i = 0; i < extra; ++i) {
        int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (u == v) continue;
        edges.push_back({u, v, rng.uniform(weight_lo, weight_hi)});
    }
    std::vector<std::vector<Tier>> tiers(n);
    for (int v = 1; v < n; ++v) {
        int count = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_tiers + 1)));
        double remaining = 0.95;
        for (int i = 0; i < count; ++i) {
            double p = rng.uniform(0.05, 0.6) * remaining;
            remaining -= p;
            tiers[v].push_back({rng.uniform(cost_lo, cost_hi), p});
        }
    }
    return make_instance(n, 0, edges, std::move(tiers));
}

} // namespace oracles
