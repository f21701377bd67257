#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/exact.hpp"
#include "psearch/instance.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/random.hpp"
#include "psearch/shortest_path.hpp"

namespace psearch {

// Denominator guard for scores: zero-weight connector edges would otherwise
// divide by zero.
inline constexpr double kScoreEpsilon = 1e-6;

// Score of extending the walk to frontier site v and aiming for its tier i:
// cumulative success probability up to that tier over (restricted travel
// distance x tier cost). The product penalizes distant sites harder than a
// sum would. Returns nullopt when v cannot be reached through walk vertices.
inline std::optional<double> greedy_score(const Instance& inst, const Walk& walk, int v,
                                          int tier_index) {
    const auto& tiers = inst.sites[v].tiers;
    if (tier_index < 0 || tier_index >= static_cast<int>(tiers.size())) {
        throw std::out_of_range("tier index out of range");
    }
    std::vector<bool> allowed(inst.vertex_count(), false);
    for (int u : walk.verts) allowed[u] = true;
    auto path = restricted_shortest_path(inst, walk.verts.back(), v, allowed);
    if (!path) return std::nullopt;
    double cumulative = 0.0;
    for (int j = 0; j <= tier_index; ++j) cumulative += tiers[j].prob;
    double w = std::max(path->distance, kScoreEpsilon);
    double c = std::max(tiers[tier_index].cost, kScoreEpsilon);
    return cumulative / (w * c);
}

namespace detail {

struct Candidate {
    int vertex = 0;
    int tier = 0;
    double score = 0.0;
    double distance = 0.0;
    std::vector<int> path; // current position .. vertex
};

// Frontier (site, tier) pairs worth selecting. With unvisited_only (the
// default) a pair is kept only while its tier is still uncounted at the
// current budget: re-selecting a counted tier cannot raise the success
// probability.
inline std::vector<Candidate> frontier_candidates(const Instance& inst, const Walk& walk,
                                                  double budget, bool unvisited_only) {
    std::vector<bool> allowed(inst.vertex_count(), false);
    for (int u : walk.verts) allowed[u] = true;

    std::vector<int> counted(inst.vertex_count(), 0);
    for (const CollectionEvent& e : collection_events(inst, walk, budget)) {
        counted[e.vertex] = e.tiers_counted;
    }

    std::vector<Candidate> out;
    auto paths = restricted_paths(inst, walk.verts.back(), allowed);
    for (int v : frontier(inst, walk)) {
        const auto& tiers = inst.sites[v].tiers;
        if (tiers.empty() || paths.dist[v] == kInfinity) continue;
        double w = std::max(paths.dist[v], kScoreEpsilon);
        for (int i = 0; i < static_cast<int>(tiers.size()); ++i) {
            if (unvisited_only && i < counted[v]) continue;
            double cumulative = 0.0;
            for (int j = 0; j <= i; ++j) cumulative += tiers[j].prob;
            Candidate c;
            c.vertex = v;
            c.tier = i;
            c.distance = paths.dist[v];
            c.score = cumulative / (w * std::max(tiers[i].cost, kScoreEpsilon));
            out.push_back(c);
        }
    }
    for (Candidate& c : out) {
        c.path.clear();
        detail::append_path(paths, walk.verts.back(), c.vertex, c.path);
    }
    return out;
}

inline void apply_candidate(const Instance& inst, Walk& walk, double& budget,
                            const Candidate& pick) {
    for (int u : pick.path) {
        double w = inst.edge_weight(walk.verts.back(), u);
        walk.prefix_cost.push_back(walk.total_cost() + w);
        walk.verts.push_back(u);
    }
    // Raise the budget so the agent can reach the chosen site and buy at the
    // chosen cost.
    budget = std::max(budget, walk.total_cost() + inst.sites[pick.vertex].tiers[pick.tier].cost);
}

} // namespace detail

struct GreedyOptions {
    bool unvisited_only = true;
};

// Repeatedly walks to the frontier (site, tier) with the best score, raising
// the budget just enough to afford the pick, until the analytic success
// probability meets the target.
inline MinBudgetSolution greedy_min_budget(const Instance& inst, double p_succ,
                                           const GreedyOptions& options = {}) {
    if (p_succ <= 0.0 || p_succ > 1.0) {
        throw std::invalid_argument("target probability must be in (0, 1]");
    }
    MinBudgetSolution out;
    if (!approx_geq(available_probability(inst, reachable_from(inst, inst.start)), p_succ)) {
        out.status = SolveStatus::stuck;
        return out;
    }

    int total_tiers = 0;
    for (const Site& s : inst.sites) total_tiers += static_cast<int>(s.tiers.size());

    Walk walk = make_walk(inst, {inst.start});
    double budget = 0.0;
    int stalled = 0;
    while (true) {
        double prob = success_probability(inst, walk, budget);
        if (approx_geq(prob, p_succ)) break;
        auto candidates = detail::frontier_candidates(inst, walk, budget, options.unvisited_only);
        const detail::Candidate* pick = nullptr;
        for (const auto& c : candidates) {
            if (!pick || c.score > pick->score + kTolerance ||
                (approx_eq(c.score, pick->score) &&
                 (c.vertex < pick->vertex ||
                  (c.vertex == pick->vertex &&
                   inst.sites[c.vertex].tiers[c.tier].cost < inst.sites[pick->vertex].tiers[pick->tier].cost)))) {
                pick = &c;
            }
        }
        if (!pick) {
            out.status = SolveStatus::stuck;
            return out;
        }
        double before = budget;
        detail::apply_candidate(inst, walk, budget, *pick);
        // With the uncounted-tier filter every pick counts a fresh tier and
        // the loop provably terminates; without it, a pick that moves neither
        // the budget nor the success probability can repeat, so bail out once
        // that persists longer than any counting progress could.
        if (budget > before || success_probability(inst, walk, budget) > prob) {
            stalled = 0;
        } else if (++stalled > inst.vertex_count() + total_tiers) {
            out.status = SolveStatus::stuck;
            return out;
        }
    }
    out.status = SolveStatus::ok;
    out.walk = walk;
    out.budget = budget;
    out.probability = success_probability(inst, walk, budget);
    return out;
}

struct AcoParams {
    int iterations = 50;
    double evaporation = 0.05;
    double initial_pheromone = 1.0;
    std::uint64_t seed = 0;
    bool unvisited_only = true;
    // The reinforcement formula rewards the number of purchase-capable
    // visits per unit walk weight; prize_sum swaps the count for the
    // collected prize.
    enum class Reward { visit_count, prize_sum } reward = Reward::visit_count;
};

// Per-edge pheromone levels; strictly positive, floored after every update.
class PheromoneMap {
public:
    PheromoneMap(std::size_t edges, double initial) : levels_(edges, floor_at(initial)) {}

    static constexpr double kFloor = 1e-12;

    double level(int edge_id) const { return levels_[edge_id]; }

    void evaporate(double rate) {
        for (double& l : levels_) l = floor_at(l * (1.0 - rate));
    }

    void set(int edge_id, double value) { levels_[edge_id] = floor_at(value); }

    double average_over(const std::vector<int>& edge_ids) const {
        if (edge_ids.empty()) return 1.0;
        double sum = 0.0;
        for (int id : edge_ids) sum += levels_[id];
        return sum / static_cast<double>(edge_ids.size());
    }

    double min_level() const {
        double m = kInfinity;
        for (double l : levels_) m = std::min(m, l);
        return levels_.empty() ? 1.0 : m;
    }

private:
    static double floor_at(double v) { return v < kFloor ? kFloor : v; }
    std::vector<double> levels_;
};

// Ant-colony construction: one ant per iteration samples frontier picks with
// probability proportional to score x average pheromone along the restricted
// shortest path, evaporation after every iteration, reinforcement on strict
// improvement. Falls back to the greedy result when every construction gets
// stuck.
inline MinBudgetSolution aco_min_budget(const Instance& inst, double p_succ,
                                        const AcoParams& params = {}) {
    if (p_succ <= 0.0 || p_succ > 1.0) {
        throw std::invalid_argument("target probability must be in (0, 1]");
    }
    if (params.iterations < 1 || params.evaporation < 0.0 || params.evaporation >= 1.0) {
        throw std::invalid_argument("invalid ACO parameters");
    }
    PheromoneMap pheromone(inst.edges.size(), params.initial_pheromone);
    Rng rng(params.seed);

    // Edge ids along a vertex path.
    auto edge_ids_of = [&](int from, const std::vector<int>& path) {
        std::vector<int> ids;
        int prev = from;
        for (int v : path) {
            for (const Adj& a : inst.adj[prev]) {
                if (a.to == v) {
                    ids.push_back(a.edge_id);
                    break;
                }
            }
            prev = v;
        }
        return ids;
    };

    MinBudgetSolution best;
    best.budget = kInfinity;
    bool found = false;

    int total_tiers = 0;
    for (const Site& s : inst.sites) total_tiers += static_cast<int>(s.tiers.size());
    // With the uncounted-tier filter a construction makes progress every
    // step; without it a sampled pick can spin, so constructions are capped.
    const int max_steps = inst.vertex_count() + total_tiers + 8;

    for (int iter = 0; iter < params.iterations; ++iter) {
        Walk walk = make_walk(inst, {inst.start});
        double budget = 0.0;
        bool stuck = false;
        int steps = 0;
        while (!approx_geq(success_probability(inst, walk, budget), p_succ)) {
            if (++steps > max_steps) {
                stuck = true;
                break;
            }
            auto candidates =
                detail::frontier_candidates(inst, walk, budget, params.unvisited_only);
            if (candidates.empty()) {
                stuck = true;
                break;
            }
            std::vector<double> weights(candidates.size());
            double total = 0.0;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                double h = pheromone.average_over(
                    edge_ids_of(walk.verts.back(), candidates[i].path));
                weights[i] = candidates[i].score * h;
                total += weights[i];
            }
            std::size_t pick = 0;
            if (total <= 0.0) {
                pick = static_cast<std::size_t>(rng.next_below(candidates.size()));
            } else {
                double r = rng.next_unit() * total;
                double acc = 0.0;
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    acc += weights[i];
                    if (r < acc || i + 1 == candidates.size()) {
                        pick = i;
                        break;
                    }
                }
            }
            detail::apply_candidate(inst, walk, budget, candidates[pick]);
        }
        if (!stuck && (!found || budget < best.budget - kTolerance)) {
            found = true;
            best.walk = walk;
            best.budget = budget;
            // Reinforce: each walk edge is set to w(u,v) * reward / walk weight.
            double reward;
            if (params.reward == AcoParams::Reward::visit_count) {
                int visits = 0;
                for (const auto& e : collection_events(inst, walk, budget)) {
                    if (e.tiers_counted > 0) ++visits;
                }
                reward = static_cast<double>(visits);
            } else {
                reward = collected_prize(inst, walk, budget);
            }
            double total_weight = std::max(walk.total_cost(), kScoreEpsilon);
            for (std::size_t i = 1; i < walk.verts.size(); ++i) {
                double w = inst.edge_weight(walk.verts[i - 1], walk.verts[i]);
                for (const Adj& a : inst.adj[walk.verts[i - 1]]) {
                    if (a.to == walk.verts[i]) {
                        pheromone.set(a.edge_id, w * reward / total_weight);
                        break;
                    }
                }
            }
        }
        pheromone.evaporate(params.evaporation);
    }

    if (!found) return greedy_min_budget(inst, p_succ, GreedyOptions{params.unvisited_only});
    best.status = SolveStatus::ok;
    best.probability = success_probability(inst, best.walk, best.budget);
    return best;
}

// Bounded-length restriction of the exact branch and bound: walks heavier
// than the best solution's walk are pruned and every first visit must be able
// to buy at least one tier at the walk's budget. Not guaranteed optimal.
inline MinBudgetSolution bl_min_budget(const Instance& inst, double p_succ,
                                       const SearchLimits& limits = {},
                                       SearchTrace* trace = nullptr) {
    MinBudgetSearchOptions options;
    options.bound_length_by_incumbent = true;
    options.require_purchase_on_first_visit = true;
    return min_budget_search(inst, p_succ, limits, options, trace);
}

// No-backtrack restriction: BL plus simple walks only. May fail to find any
// solution even when one exists.
inline MinBudgetSolution nb_min_budget(const Instance& inst, double p_succ,
                                       const SearchLimits& limits = {},
                                       SearchTrace* trace = nullptr) {
    MinBudgetSearchOptions options;
    options.bound_length_by_incumbent = true;
    options.require_purchase_on_first_visit = true;
    options.simple_walks_only = true;
    return min_budget_search(inst, p_succ, limits, options, trace);
}

} // namespace psearch
