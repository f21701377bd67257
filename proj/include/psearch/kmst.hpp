#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/instance.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/shortest_path.hpp"

namespace psearch {

// Smallest k with 1 - (1-p)^k >= p_succ. The closed form is
// ceil(log(1-p_succ) / log(1-p)); float edges are settled by a local scan so
// the returned k is exactly minimal.
inline int required_k(double p_succ, double p) {
    if (p <= 0.0 || p >= 1.0) throw std::domain_error("per-site probability must be in (0, 1)");
    if (p_succ <= 0.0 || p_succ >= 1.0) throw std::domain_error("target probability must be in (0, 1)");
    double raw = std::log1p(-p_succ) / std::log1p(-p);
    if (!(raw < 1e9)) throw std::domain_error("required k does not fit an int");
    int k = std::max(1, static_cast<int>(std::ceil(raw)));
    while (1.0 - std::pow(1.0 - p, k) < p_succ) ++k;
    while (k > 1 && 1.0 - std::pow(1.0 - p, k - 1) >= p_succ) --k;
    return k;
}

enum class KmstMode { exact, heuristic };

struct KmstSolution {
    SolveStatus status = SolveStatus::ok;
    std::vector<Edge> tree_edges;
    double weight = 0.0;
    std::vector<int> vertices; // sorted, root included
    bool optimal = true;
    std::uint64_t subsets_checked = 0;
};

namespace detail {

// Minimum spanning tree of the vertices selected in `mask` (indices into
// `verts`), or nullopt if they do not induce a connected subgraph.
inline std::optional<std::pair<double, std::vector<Edge>>> induced_mst(
    const Instance& inst, const std::vector<int>& verts, std::uint64_t mask) {
    std::vector<int> chosen;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (mask & (1ULL << i)) chosen.push_back(verts[i]);
    }
    std::vector<int> pos(inst.vertex_count(), -1);
    for (std::size_t i = 0; i < chosen.size(); ++i) pos[chosen[i]] = static_cast<int>(i);

    // Prim from the first chosen vertex.
    std::size_t m = chosen.size();
    std::vector<bool> in_tree(m, false);
    std::vector<double> key(m, kInfinity);
    std::vector<int> parent(m, -1);
    key[0] = 0.0;
    double weight = 0.0;
    std::vector<Edge> edges;
    for (std::size_t step = 0; step < m; ++step) {
        int u = -1;
        for (std::size_t i = 0; i < m; ++i) {
            if (!in_tree[i] && (u < 0 || key[i] < key[u])) u = static_cast<int>(i);
        }
        if (key[u] == kInfinity) return std::nullopt; // disconnected
        in_tree[u] = true;
        weight += key[u];
        if (parent[u] >= 0) {
            edges.push_back({chosen[parent[u]], chosen[u],
                             inst.edge_weight(chosen[parent[u]], chosen[u])});
        }
        for (const Adj& a : inst.adj[chosen[u]]) {
            int i = pos[a.to];
            if (i >= 0 && !in_tree[i] && a.weight < key[i]) {
                key[i] = a.weight;
                parent[i] = u;
            }
        }
    }
    return std::make_pair(weight, edges);
}

} // namespace detail

// Minimum-weight tree containing `root` that spans at least k other
// countable vertices. With countable == nullptr every vertex counts, which is
// the plain rooted k-MST. Exact mode enumerates vertex subsets of the root's
// component (each optimum is the MST of some induced connected subgraph);
// heuristic mode grows the tree by cheapest attachment and carries no ratio
// guarantee.
inline KmstSolution kmst_solve(const Instance& inst, int root, int k, KmstMode mode,
                               const SearchLimits& limits = {},
                               const std::vector<bool>* countable = nullptr) {
    if (root < 0 || root >= inst.vertex_count()) throw std::out_of_range("root out of range");
    if (k < 1) throw std::invalid_argument("k must be positive");
    auto reach = reachable_from(inst, root);
    std::vector<int> comp;
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (reach[v]) comp.push_back(v);
    }
    auto counts = [&](int v) { return v != root && (!countable || (*countable)[v]); };
    int available = 0;
    for (int v : comp) {
        if (counts(v)) ++available;
    }
    KmstSolution out;
    if (available < k) {
        out.status = SolveStatus::insufficient_vertices;
        return out;
    }

    if (mode == KmstMode::heuristic) {
        // Cheapest-attachment growth from the root.
        std::vector<bool> in_tree(inst.vertex_count(), false);
        in_tree[root] = true;
        out.vertices = {root};
        int counted = 0;
        while (counted < k) {
            int bu = -1, bv = -1;
            double bw = kInfinity;
            for (int u : out.vertices) {
                for (const Adj& a : inst.adj[u]) {
                    if (in_tree[a.to]) continue;
                    if (a.weight < bw - kTolerance ||
                        (approx_eq(a.weight, bw) && (a.to < bv || (a.to == bv && u < bu)))) {
                        bw = a.weight;
                        bu = u;
                        bv = a.to;
                    }
                }
            }
            if (bv < 0) {
                out.status = SolveStatus::insufficient_vertices;
                return out;
            }
            in_tree[bv] = true;
            out.vertices.push_back(bv);
            out.tree_edges.push_back({bu, bv, bw});
            out.weight += bw;
            if (counts(bv)) ++counted;
        }
        std::sort(out.vertices.begin(), out.vertices.end());
        return out;
    }

    // Exact: every candidate tree is the MST of the connected subgraph it
    // induces, so minimize over subsets of the component that contain the
    // root and enough countable vertices.
    std::vector<int> others;
    for (int v : comp) {
        if (v != root) others.push_back(v);
    }
    if (others.size() > 62) {
        throw std::invalid_argument("exact k-MST enumeration supports at most 62 component vertices");
    }
    std::vector<int> verts{root};
    verts.insert(verts.end(), others.begin(), others.end());

    bool truncated = false;
    double best_weight = kInfinity;
    std::vector<Edge> best_edges;
    std::uint64_t best_mask = 0;
    std::uint64_t total = 1ULL << others.size();
    for (std::uint64_t sub = 0; sub < total; ++sub) {
        if (++out.subsets_checked > limits.max_expansions) {
            truncated = true;
            break;
        }
        int counted = 0;
        for (std::size_t i = 0; i < others.size(); ++i) {
            if ((sub & (1ULL << i)) && counts(others[i])) ++counted;
        }
        if (counted < k) continue;
        std::uint64_t mask = (sub << 1) | 1ULL; // root at index 0
        auto mst = detail::induced_mst(inst, verts, mask);
        if (!mst) continue;
        if (mst->first < best_weight - kTolerance) {
            best_weight = mst->first;
            best_edges = mst->second;
            best_mask = mask;
        }
    }
    if (best_weight == kInfinity) {
        out.status = truncated ? SolveStatus::limit_exceeded : SolveStatus::insufficient_vertices;
        out.optimal = false;
        return out;
    }
    out.weight = best_weight;
    out.tree_edges = best_edges;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (best_mask & (1ULL << i)) out.vertices.push_back(verts[i]);
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    out.optimal = !truncated;
    if (truncated) out.status = SolveStatus::limit_exceeded;
    return out;
}

struct KmstMinBudgetResult {
    SolveStatus status = SolveStatus::ok;
    Walk walk;
    double budget = 0.0;
    double probability = 0.0;
    int k = 0;
    double item_cost = 0.0;
    double item_prob = 0.0;
    KmstSolution tree;
};

// Min-Budget for the uniform special case (every tier-bearing site sells at
// the same single cost c with the same probability p): visit k sites with
// 1-(1-p)^k >= p_succ by walking a rooted k-MST depth-first, budgeted at
// twice the tree weight plus c so the item stays affordable everywhere.
inline KmstMinBudgetResult kmst_min_budget(const Instance& inst, double p_succ,
                                           KmstMode mode = KmstMode::exact,
                                           const SearchLimits& limits = {}) {
    if (p_succ <= 0.0 || p_succ >= 1.0) {
        throw std::invalid_argument("target probability must be in (0, 1)");
    }
    KmstMinBudgetResult out;

    bool have = false;
    std::vector<bool> bearing(inst.vertex_count(), false);
    for (int v = 0; v < inst.vertex_count(); ++v) {
        const auto& tiers = inst.sites[v].tiers;
        if (tiers.empty()) continue;
        if (tiers.size() > 1) {
            out.status = SolveStatus::not_uniform;
            return out;
        }
        if (!have) {
            out.item_cost = tiers[0].cost;
            out.item_prob = tiers[0].prob;
            have = true;
        } else if (!approx_eq(tiers[0].cost, out.item_cost) ||
                   !approx_eq(tiers[0].prob, out.item_prob)) {
            out.status = SolveStatus::not_uniform;
            return out;
        }
        bearing[v] = true;
    }
    if (!have) {
        out.status = SolveStatus::infeasible;
        return out;
    }

    out.k = out.item_prob >= 1.0 - kTolerance ? 1 : required_k(p_succ, out.item_prob);
    out.tree = kmst_solve(inst, inst.start, out.k, mode, limits, &bearing);
    if (out.tree.status != SolveStatus::ok) {
        out.status = out.tree.status == SolveStatus::insufficient_vertices
                         ? SolveStatus::infeasible
                         : out.tree.status;
        return out;
    }

    // Depth-first traversal of the tree (children ascending), truncated right
    // after the k-th tier-bearing site is first reached.
    std::vector<std::vector<int>> kids(inst.vertex_count());
    for (const Edge& e : out.tree.tree_edges) {
        kids[e.u].push_back(e.v);
        kids[e.v].push_back(e.u);
    }
    for (auto& list : kids) std::sort(list.begin(), list.end());

    std::vector<int> verts;
    std::vector<bool> seen(inst.vertex_count(), false);
    int counted = 0;
    std::function<void(int, int)> dfs = [&](int v, int parent) {
        verts.push_back(v);
        seen[v] = true;
        if (bearing[v]) {
            if (++counted >= out.k) return;
        }
        for (int c : kids[v]) {
            if (c == parent || seen[c]) continue;
            dfs(c, v);
            if (counted >= out.k) return;
            verts.push_back(v);
        }
    };
    dfs(inst.start, -1);

    out.walk = make_walk(inst, verts);
    out.budget = 2.0 * out.tree.weight + out.item_cost;
    out.probability = success_probability(inst, out.walk, out.budget);
    out.status = SolveStatus::ok;
    return out;
}

} // namespace psearch
