#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/transforms.hpp"

namespace psearch {

struct DtspSolution {
    std::vector<int> walk;      // from root; empty only if never evaluated
    double total_prize = 0.0;
    std::vector<int> collected; // sorted; vertices first reached by their deadline
    bool optimal = true;        // false when an expansion/time cap cut the search
    std::uint64_t expansions = 0;
};

using DtspSolver = std::function<DtspSolution(const DtspInstance&, const SearchLimits&)>;

namespace detail {

inline std::vector<double> dtsp_distances(const DtspInstance& dtsp, int source) {
    std::vector<double> dist(dtsp.vertex_count(), kInfinity);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const Adj& a : dtsp.adj[u]) {
            if (d + a.weight < dist[a.to]) {
                dist[a.to] = d + a.weight;
                heap.push({d + a.weight, a.to});
            }
        }
    }
    return dist;
}

} // namespace detail

// Scores a given walk: a vertex's prize is collected iff its first arrival
// length is within the deadline, and it is collected at most once.
inline DtspSolution dtsp_prize(const DtspInstance& dtsp, const std::vector<int>& walk) {
    if (walk.empty() || walk.front() != dtsp.root) {
        throw std::invalid_argument("walk must start at the root");
    }
    DtspSolution out;
    out.walk = walk;
    std::vector<bool> seen(dtsp.vertex_count(), false);
    double length = 0.0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        if (i) {
            bool found = false;
            for (const Adj& a : dtsp.adj[walk[i - 1]]) {
                if (a.to == walk[i]) {
                    length += a.weight;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::invalid_argument("walk steps over a missing edge");
        }
        int v = walk[i];
        if (!seen[v]) {
            seen[v] = true;
            if (dtsp.prize[v] > 0.0 && approx_leq(length, dtsp.deadline[v])) {
                out.collected.push_back(v);
                out.total_prize += dtsp.prize[v];
            }
        }
    }
    std::sort(out.collected.begin(), out.collected.end());
    return out;
}

// Exact prize-optimal walk by depth-first branch and bound on the actual
// edge set (zero-weight connector edges included, so pass-through collection
// is native). States are dominated on (vertex, collected-set, arrival
// length), which keeps zero-weight cycles finite; the optimistic bound adds
// every uncollected prize still reachable by its deadline.
inline DtspSolution dtsp_solve_exact(const DtspInstance& dtsp, const SearchLimits& limits = {}) {
    int n = dtsp.vertex_count();
    if (n > limits.max_vertices) {
        throw std::invalid_argument("instance exceeds max_vertices for the exact solver");
    }

    std::vector<std::vector<double>> dist;
    dist.reserve(n);
    for (int v = 0; v < n; ++v) dist.push_back(detail::dtsp_distances(dtsp, v));

    // Prize vertices that can be reached by their deadline at all.
    std::vector<int> mask_index(n, -1);
    std::vector<int> prize_verts;
    for (int v = 0; v < n; ++v) {
        if (dtsp.prize[v] > 0.0 && approx_leq(dist[dtsp.root][v], dtsp.deadline[v])) {
            mask_index[v] = static_cast<int>(prize_verts.size());
            prize_verts.push_back(v);
        }
    }
    if (prize_verts.size() > 62) {
        throw std::invalid_argument("exact solver supports at most 62 collectable prize vertices");
    }

    DtspSolution best;
    best.walk = {dtsp.root};
    best.total_prize = 0.0;

    std::vector<int> walk{dtsp.root};
    std::unordered_map<std::uint64_t, double> seen; // (mask, vertex) -> min length
    bool truncated = false;

    auto key_of = [n](std::uint64_t mask, int v) { return mask * static_cast<std::uint64_t>(n) + v; };

    std::function<void(int, double, std::uint64_t, double)> expand =
        [&](int u, double length, std::uint64_t mask, double prize) {
            if (++best.expansions > limits.max_expansions) {
                truncated = true;
                return;
            }
            double optimistic = prize;
            for (int pv : prize_verts) {
                if (mask & (1ULL << mask_index[pv])) continue;
                if (approx_leq(length + dist[u][pv], dtsp.deadline[pv])) optimistic += dtsp.prize[pv];
            }
            if (optimistic <= best.total_prize + 1e-12) return;

            for (const Adj& a : dtsp.adj[u]) {
                if (truncated) return;
                int v = a.to;
                double nl = length + a.weight;
                std::uint64_t nm = mask;
                double np = prize;
                if (mask_index[v] >= 0 && !(mask & (1ULL << mask_index[v])) &&
                    approx_leq(nl, dtsp.deadline[v])) {
                    nm |= 1ULL << mask_index[v];
                    np += dtsp.prize[v];
                }
                auto [it, inserted] = seen.emplace(key_of(nm, v), nl);
                if (!inserted) {
                    if (it->second <= nl) continue;
                    it->second = nl;
                }
                walk.push_back(v);
                if (np > best.total_prize + 1e-12) {
                    best.total_prize = np;
                    best.walk = walk;
                }
                expand(v, nl, nm, np);
                walk.pop_back();
            }
        };

    std::uint64_t mask0 = 0;
    double prize0 = 0.0;
    if (mask_index[dtsp.root] >= 0 && approx_leq(0.0, dtsp.deadline[dtsp.root])) {
        mask0 |= 1ULL << mask_index[dtsp.root];
        prize0 = dtsp.prize[dtsp.root];
        best.total_prize = prize0;
    }
    seen.emplace(key_of(mask0, dtsp.root), 0.0);
    expand(dtsp.root, 0.0, mask0, prize0);

    best.optimal = !truncated;
    DtspSolution scored = dtsp_prize(dtsp, best.walk);
    scored.optimal = best.optimal;
    scored.expansions = best.expansions;
    return scored;
}

// Cheap plug-in alternative: repeatedly walks the shortest path to the
// still-collectable vertex with the best prize-per-distance, collecting
// whatever it passes. No optimality guarantee.
inline DtspSolution dtsp_solve_greedy(const DtspInstance& dtsp, const SearchLimits& = {}) {
    int n = dtsp.vertex_count();
    std::vector<bool> seen(n, false);
    std::vector<int> walk{dtsp.root};
    double length = 0.0;
    seen[dtsp.root] = true;

    // Dijkstra with parents, rerun from each stop.
    auto paths_from = [&](int source) {
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
            for (const Adj& a : dtsp.adj[u]) {
                if (d + a.weight < dist[a.to]) {
                    dist[a.to] = d + a.weight;
                    prev[a.to] = u;
                    heap.push({d + a.weight, a.to});
                }
            }
        }
        return std::make_pair(dist, prev);
    };

    while (true) {
        auto [dist, prev] = paths_from(walk.back());
        int pick = -1;
        double pick_score = -1.0;
        for (int v = 0; v < n; ++v) {
            if (seen[v] || dtsp.prize[v] <= 0.0) continue;
            if (!approx_leq(length + dist[v], dtsp.deadline[v])) continue;
            double score = dtsp.prize[v] / (dist[v] > kTolerance ? dist[v] : kTolerance);
            if (score > pick_score + kTolerance) {
                pick = v;
                pick_score = score;
            }
        }
        if (pick < 0) break;
        std::vector<int> seg;
        for (int v = pick; v != walk.back(); v = prev[v]) seg.push_back(v);
        for (auto it = seg.rbegin(); it != seg.rend(); ++it) {
            walk.push_back(*it);
            seen[*it] = true;
        }
        length += dist[pick];
    }
    return dtsp_prize(dtsp, walk);
}

// End-to-end approximate Max-Probability: split multi-cost sites, convert the
// budget into deadlines and the probabilities into prizes, optionally round
// the prizes to integers, hand the instance to the plugged solver, and map
// its walk back onto the original graph.
struct MaxProbPipelineOptions {
    bool round = true;
    SearchLimits limits;
};

struct PrizeLedgerEntry {
    int vertex = 0; // original instance vertex
    int tier = 0;
    double prize = 0.0;
    double deadline = 0.0;
};

struct MaxProbPipelineResult {
    SolveStatus status = SolveStatus::ok;
    Walk walk;                        // on the original instance
    double probability = 0.0;         // success_probability of `walk` under the budget
    bool solver_optimal = true;
    double min_conditional_prob = 0.0; // smallest positive conditional tier probability
    double rounding_constant = 0.0;    // c with positive prizes >= 1/c (0 if unrounded/no prizes)
    DtspSolution dtsp;                 // solver output on the converted instance
    std::vector<PrizeLedgerEntry> ledger; // collected prizes mapped to original sites
};

inline MaxProbPipelineResult approx_max_probability(const Instance& inst, double budget,
                                                    const DtspSolver& solver,
                                                    const MaxProbPipelineOptions& options = {}) {
    SingleCostInstance sc = to_single_cost(inst);

    MaxProbPipelineResult out;
    out.min_conditional_prob = 1.0;
    for (const Site& s : sc.split.sites) {
        if (!s.tiers.empty() && s.tiers[0].prob > 0.0) {
            out.min_conditional_prob = std::min(out.min_conditional_prob, s.tiers[0].prob);
        }
    }

    DtspInstance dtsp = to_deadline_tsp(sc, budget);
    if (options.round) dtsp = round_prizes(dtsp, &out.rounding_constant);

    out.dtsp = solver(dtsp, options.limits);
    out.solver_optimal = out.dtsp.optimal;
    if (!out.dtsp.optimal) out.status = SolveStatus::limit_exceeded;

    Walk split_walk = make_walk(sc.split, out.dtsp.walk);
    out.walk = map_walk_back(sc, split_walk);
    out.probability = success_probability(inst, out.walk, budget);
    for (int v : out.dtsp.collected) {
        out.ledger.push_back(
            {sc.back_map[v].first, sc.back_map[v].second, dtsp.prize[v], dtsp.deadline[v]});
    }
    return out;
}

} // namespace psearch
