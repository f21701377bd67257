#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/instance.hpp"

namespace psearch {

// Prizes are -log(1-p); a certain success would be infinite, so it is capped
// here. exp(-50) is far below every tolerance in use, and the cap never
// changes an argmax at our precision.
inline constexpr double kPrizeCap = 50.0;

inline double prize_from_probability(double p) {
    if (p >= 1.0) return kPrizeCap;
    double prize = -std::log1p(-p);
    return prize > kPrizeCap ? kPrizeCap : prize;
}

// First arrival of the walk at `vertex`: the leading tiers_counted tiers are
// exactly those affordable with budget - arrival_spent. Budgets only shrink
// along a walk, so later arrivals never count additional tiers.
struct CollectionEvent {
    int vertex = 0;
    int position = 0;
    double arrival_spent = 0.0;
    int tiers_counted = 0;
};

// One event per distinct visited vertex, in first-arrival order. Events with
// zero counted tiers are included (callers filter as needed).
inline std::vector<CollectionEvent> collection_events(const Instance& inst, const Walk& walk,
                                                      double budget) {
    std::vector<CollectionEvent> events;
    std::vector<bool> seen(inst.vertex_count(), false);
    for (int j = 0; j < walk.length(); ++j) {
        int v = walk.verts[j];
        if (seen[v]) continue;
        seen[v] = true;
        double spent = walk.prefix_cost[j];
        events.push_back({v, j, spent, inst.sites[v].affordable_tiers(budget - spent)});
    }
    return events;
}

// Probability that the walk acquires the item under `budget`: one minus the
// product over visited sites of the unaffordable-or-unavailable mass at first
// arrival. The walk may run past budget exhaustion; such visits contribute
// nothing.
inline double success_probability(const Instance& inst, const Walk& walk, double budget) {
    double failure = 1.0;
    std::vector<bool> seen(inst.vertex_count(), false);
    for (int j = 0; j < walk.length(); ++j) {
        int v = walk.verts[j];
        if (seen[v]) continue;
        seen[v] = true;
        failure *= 1.0 - inst.sites[v].affordable_mass(budget - walk.prefix_cost[j]);
    }
    return 1.0 - failure;
}

// The budgets at which success_probability(walk, .) can change: every
// arrival-spent plus tier cost, plus zero. Sorted ascending.
inline std::vector<double> budget_jump_set(const Instance& inst, const Walk& walk) {
    std::vector<double> set{0.0};
    for (int j = 0; j < walk.length(); ++j) {
        for (const Tier& t : inst.sites[walk.verts[j]].tiers) {
            set.push_back(walk.prefix_cost[j] + t.cost);
        }
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

// Minimal budget at which the fixed walk reaches p_succ, or nullopt when even
// the largest candidate fails. Success probability is a step function of the
// budget whose jumps all lie in budget_jump_set, so scanning candidates
// ascending yields the exact minimum (ties resolve to the smaller budget).
inline std::optional<double> minimal_budget_for_walk(const Instance& inst, const Walk& walk,
                                                     double p_succ) {
    for (double b : budget_jump_set(inst, walk)) {
        if (approx_geq(success_probability(inst, walk, b), p_succ)) return b;
    }
    return std::nullopt;
}

// Additive form of the objective: -log of the failure product. Equals the
// sum over counting events of -log(1 - conditional tier probability).
inline double collected_prize(const Instance& inst, const Walk& walk, double budget) {
    return prize_from_probability(success_probability(inst, walk, budget));
}

// 1 - prod over all tiers of (1 - p): the best any plan could achieve with
// unlimited budget. The reachable variant ignores vertices the start cannot
// reach and is what feasibility checks use.
inline double total_available_probability(const Instance& inst) {
    double failure = 1.0;
    for (const Site& s : inst.sites) failure *= 1.0 - s.total_mass();
    return 1.0 - failure;
}

inline double available_probability(const Instance& inst, const std::vector<bool>& vertex_mask) {
    double failure = 1.0;
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (vertex_mask[v]) failure *= 1.0 - inst.sites[v].total_mass();
    }
    return 1.0 - failure;
}

} // namespace psearch
