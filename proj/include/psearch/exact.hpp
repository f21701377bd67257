#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/instance.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/shortest_path.hpp"

namespace psearch {

struct TraceEvent {
    std::uint64_t expansion = 0;
    double value = 0.0; // probability (Max-Probability) or budget (Min-Budget)
    std::vector<int> walk;
};

struct SearchTrace {
    std::uint64_t expansions = 0;
    std::vector<TraceEvent> incumbents;
};

struct MaxProbSolution {
    SolveStatus status = SolveStatus::ok;
    Walk walk;
    double probability = 0.0;
    bool optimal = true;
    std::uint64_t expansions = 0;
};

struct MinBudgetSolution {
    SolveStatus status = SolveStatus::ok;
    Walk walk;
    double budget = 0.0;
    double probability = 0.0;
    bool optimal = true;
    std::uint64_t expansions = 0;
};

// Restrictions layered on top of the exact Min-Budget search. The exact
// solver uses the defaults; the bounded-length and no-backtrack heuristics
// switch the extra flags on.
struct MinBudgetSearchOptions {
    bool enable_pruning = true;            // optimistic-completion and incumbent bounds
    bool bound_length_by_incumbent = false; // prune walks heavier than the best solution's walk
    bool require_purchase_on_first_visit = false; // every first visit must count a tier
    bool simple_walks_only = false;         // no vertex revisits at all
};

namespace detail {

class ExpansionBudget {
public:
    ExpansionBudget(const SearchLimits& limits, SearchTrace* trace)
        : limits_(limits), trace_(trace), start_(std::chrono::steady_clock::now()) {}

    // True while the search may continue.
    bool tick() {
        ++count_;
        if (trace_) trace_->expansions = count_;
        if (count_ > limits_.max_expansions) return false;
        if (limits_.time_limit_ms > 0.0 && (count_ & 15) == 0) {
            auto elapsed = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start_);
            if (elapsed.count() > limits_.time_limit_ms) return false;
        }
        return true;
    }

    std::uint64_t count() const { return count_; }

private:
    SearchLimits limits_;
    SearchTrace* trace_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t count_ = 0;
};

// Multi-target Dijkstra expanding only vertices inside `allowed`; distances
// to vertices outside it are admissible because the final hop is exempt.
struct RestrictedPaths {
    std::vector<double> dist;
    std::vector<int> prev;
};

inline RestrictedPaths restricted_paths(const Instance& inst, int source,
                                        const std::vector<bool>& allowed) {
    RestrictedPaths out;
    out.dist.assign(inst.vertex_count(), kInfinity);
    out.prev.assign(inst.vertex_count(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    out.dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > out.dist[u]) continue;
        if (!allowed[u]) continue;
        for (const Adj& a : inst.adj[u]) {
            if (d + a.weight < out.dist[a.to]) {
                out.dist[a.to] = d + a.weight;
                out.prev[a.to] = u;
                heap.push({d + a.weight, a.to});
            }
        }
    }
    return out;
}

// Appends the source->target path (target included, source excluded).
inline void append_path(const RestrictedPaths& paths, int source, int target,
                        std::vector<int>& walk) {
    std::vector<int> seg;
    for (int v = target; v != source; v = paths.prev[v]) seg.push_back(v);
    walk.insert(walk.end(), seg.rbegin(), seg.rend());
}

// Travel-distance lower bounds for the optimistic pruning: exact Dijkstra
// rows, computed on first use, below the size cap; zero above it (still a
// valid lower bound, so pruning stays sound at any scale).
class DistanceOracle {
public:
    explicit DistanceOracle(const Instance& inst) : inst_(inst), rows_(inst.vertex_count()) {}

    double lower_bound(int from, int to) {
        if (inst_.vertex_count() > kExactCap) return 0.0;
        auto& row = rows_[from];
        if (row.empty()) row = shortest_distances(inst_, from);
        return row[to];
    }

private:
    static constexpr int kExactCap = 4096;
    const Instance& inst_;
    std::vector<std::vector<double>> rows_;
};

} // namespace detail

// Exact Max-Probability by branch and bound over first-visit sequences.
//
// Any walk is weakly dominated by the walk that makes the same first visits
// in the same order but routes each leg as a shortest path through the
// already-visited set: every arrival happens no later, so every site counts
// at least the same tiers. Branching on "which unvisited vertex next" with
// that canonical routing therefore searches a finite space (depth < n) and
// still attains the optimum over all revisit-allowed walks on the actual
// edge set. The optimistic bound completes the failure product with every
// still-affordable uncounted tier, reached by its unrestricted shortest-path
// distance, and never underestimates.
inline MaxProbSolution solve_max_prob_exact(const Instance& inst, double budget,
                                            const SearchLimits& limits = {},
                                            SearchTrace* trace = nullptr,
                                            bool enable_pruning = true) {
    if (budget < 0.0) throw std::invalid_argument("budget must be nonnegative");
    int n = inst.vertex_count();
    detail::DistanceOracle oracle(inst);

    MaxProbSolution best;
    best.walk = make_walk(inst, {inst.start});
    best.probability = 0.0;

    detail::ExpansionBudget ticker(limits, trace);
    bool truncated = false;

    std::vector<bool> visited(n, false);
    visited[inst.start] = true;
    std::vector<int> walk{inst.start};

    auto note_incumbent = [&](double prob) {
        best.probability = prob;
        best.walk = make_walk(inst, walk);
        if (trace) trace->incumbents.push_back({ticker.count(), prob, walk});
    };

    std::function<void(int, double, double)> expand = [&](int cur, double spent, double failure) {
        if (truncated) return;
        if (!ticker.tick()) {
            truncated = true;
            return;
        }
        auto paths = detail::restricted_paths(inst, cur, visited);
        for (int v = 0; v < n; ++v) {
            if (truncated) return;
            if (visited[v] || paths.dist[v] == kInfinity) continue;
            double arrival = spent + paths.dist[v];
            if (!approx_leq(arrival, budget)) continue; // beyond budget nothing ever counts
            double child_failure = failure * (1.0 - inst.sites[v].affordable_mass(budget - arrival));
            if (enable_pruning) {
                double optimistic = child_failure;
                for (int u = 0; u < n; ++u) {
                    if (visited[u] || u == v) continue;
                    double reach = budget - arrival - oracle.lower_bound(v, u);
                    if (reach > -kTolerance) {
                        optimistic *= 1.0 - inst.sites[u].affordable_mass(reach);
                    }
                }
                if (1.0 - optimistic <= best.probability + 1e-12) continue;
            }
            std::size_t mark = walk.size();
            detail::append_path(paths, cur, v, walk);
            visited[v] = true;
            if (1.0 - child_failure > best.probability + 1e-12) note_incumbent(1.0 - child_failure);
            expand(v, arrival, child_failure);
            visited[v] = false;
            walk.resize(mark);
        }
    };
    expand(inst.start, 0.0, 1.0);

    best.expansions = ticker.count();
    best.optimal = !truncated;
    best.status = truncated ? SolveStatus::limit_exceeded : SolveStatus::ok;
    return best;
}

// Shared Min-Budget search: exact with default options, bounded-length and
// no-backtrack variants with the corresponding restrictions enabled. Each
// node's walk is scored by the candidate-budget scan of plan_eval (restricted
// to budgets that let every first visit purchase, when the flag demands it).
inline MinBudgetSolution min_budget_search(const Instance& inst, double p_succ,
                                           const SearchLimits& limits,
                                           const MinBudgetSearchOptions& options,
                                           SearchTrace* trace = nullptr) {
    if (p_succ <= 0.0 || p_succ > 1.0) {
        throw std::invalid_argument("target probability must be in (0, 1]");
    }
    int n = inst.vertex_count();
    auto reachable = reachable_from(inst, inst.start);
    if (!approx_geq(available_probability(inst, reachable), p_succ)) {
        MinBudgetSolution out;
        out.status = SolveStatus::infeasible;
        return out;
    }

    detail::DistanceOracle oracle(inst);
    double min_tier_cost = kInfinity;
    for (int v = 0; v < n; ++v) {
        if (reachable[v] && !inst.sites[v].tiers.empty()) {
            min_tier_cost = std::min(min_tier_cost, inst.sites[v].tiers[0].cost);
        }
    }

    MinBudgetSolution best;
    best.budget = kInfinity;
    bool found = false;

    detail::ExpansionBudget ticker(limits, trace);
    bool truncated = false;

    std::vector<bool> visited(n, false);
    visited[inst.start] = true;
    std::vector<int> walk{inst.start};

    // Minimal candidate budget for the current walk, honoring the
    // purchase-on-first-visit floor when present.
    auto evaluate = [&](const Walk& w, double purchase_floor) -> std::optional<double> {
        for (double b : budget_jump_set(inst, w)) {
            if (!approx_geq(b, purchase_floor)) continue;
            if (approx_geq(success_probability(inst, w, b), p_succ)) return b;
        }
        return std::nullopt;
    };

    auto consider = [&](double purchase_floor) {
        Walk w = make_walk(inst, walk);
        auto b = evaluate(w, purchase_floor);
        if (b && *b < best.budget - 1e-12) {
            best.budget = *b;
            best.walk = w;
            found = true;
            if (trace) trace->incumbents.push_back({ticker.count(), *b, walk});
        }
    };

    // purchase_floor: smallest budget at which every first visit so far can
    // buy its cheapest tier (0 when the flag is off).
    std::function<void(int, double, double)> expand = [&](int cur, double spent,
                                                          double purchase_floor) {
        if (truncated) return;
        if (!ticker.tick()) {
            truncated = true;
            return;
        }

        // Visits a candidate next site; `append` commits the routing leg.
        auto try_child = [&](int v, double arrival, auto&& append) {
            if (options.require_purchase_on_first_visit && inst.sites[v].tiers.empty()) return;
            double child_floor = purchase_floor;
            if (options.require_purchase_on_first_visit) {
                child_floor = std::max(child_floor, arrival + inst.sites[v].tiers[0].cost);
            }
            if (options.enable_pruning && found) {
                if (options.bound_length_by_incumbent &&
                    arrival > best.walk.total_cost() + kTolerance) {
                    return;
                }
                if (options.require_purchase_on_first_visit &&
                    child_floor >= best.budget - kTolerance) {
                    return;
                }
                // An improving solution needs a counting event this node's
                // own evaluation did not already cover, and such an event
                // costs at least the arrival plus some tier price.
                bool events_at_v = !inst.sites[v].tiers.empty() &&
                                   arrival + inst.sites[v].tiers[0].cost < best.budget - kTolerance;
                bool events_beyond = arrival + min_tier_cost < best.budget - kTolerance;
                if (!events_at_v && !events_beyond) return;
                // Optimistic success just below the incumbent budget.
                double failure;
                {
                    Walk w = make_walk(inst, walk);
                    failure = 1.0 - success_probability(inst, w, best.budget);
                }
                failure *= 1.0 - inst.sites[v].affordable_mass(best.budget - arrival);
                for (int u = 0; u < n; ++u) {
                    if (visited[u] || u == v) continue;
                    double reach = best.budget - arrival - oracle.lower_bound(v, u);
                    if (reach > -kTolerance) {
                        failure *= 1.0 - inst.sites[u].affordable_mass(reach);
                    }
                }
                if (!approx_geq(1.0 - failure, p_succ)) return;
            }
            std::size_t mark = walk.size();
            append();
            visited[v] = true;
            consider(child_floor);
            expand(v, arrival, child_floor);
            visited[v] = false;
            walk.resize(mark);
        };

        if (options.simple_walks_only) {
            // No revisits: moves are single edges to fresh neighbors.
            for (const Adj& a : inst.adj[cur]) {
                if (truncated) return;
                if (!visited[a.to]) {
                    try_child(a.to, spent + a.weight, [&] { walk.push_back(a.to); });
                }
            }
        } else {
            auto paths = detail::restricted_paths(inst, cur, visited);
            for (int v = 0; v < n; ++v) {
                if (truncated) return;
                if (!visited[v] && paths.dist[v] != kInfinity) {
                    try_child(v, spent + paths.dist[v],
                              [&] { detail::append_path(paths, cur, v, walk); });
                }
            }
        }
    };

    expand(inst.start, 0.0, 0.0);

    best.expansions = ticker.count();
    best.optimal = !truncated;
    if (found) {
        best.probability = success_probability(inst, best.walk, best.budget);
        best.status = truncated ? SolveStatus::limit_exceeded : SolveStatus::ok;
    } else if (truncated) {
        best.status = SolveStatus::limit_exceeded;
    } else {
        // Unrestricted search proved reachability earlier, so an empty result
        // can only come from the heuristic restrictions.
        best.status = options.simple_walks_only ? SolveStatus::no_solution : SolveStatus::infeasible;
    }
    return best;
}

inline MinBudgetSolution solve_min_budget_exact(const Instance& inst, double p_succ,
                                                const SearchLimits& limits = {},
                                                SearchTrace* trace = nullptr,
                                                bool enable_pruning = true) {
    MinBudgetSearchOptions options;
    options.enable_pruning = enable_pruning;
    return min_budget_search(inst, p_succ, limits, options, trace);
}

} // namespace psearch
