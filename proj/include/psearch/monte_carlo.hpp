#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/instance.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/random.hpp"

namespace psearch {

struct SimReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_rate = 0.0;
    double analytic_rate = 0.0;
    double standard_error = 0.0; // sqrt(analytic * (1 - analytic) / trials)
};

struct SimOptions {
    // A trial normally ends at the first successful purchase. Turning this
    // off walks the whole plan and records whether any purchase succeeded;
    // both modes produce the same per-trial indicator because realizations
    // are keyed by (trial, vertex), independent of visit order.
    bool stop_on_success = true;
};

// Empirical check of the analytic evaluator. Each trial draws one price
// realization per visited vertex from its mass function (residual mass means
// the item is unavailable), lazily at the first arrival; a purchase succeeds
// iff the realized price fits the remaining budget. Draw streams are keyed
// by (seed, trial, vertex), so the report is reproducible under any
// execution order.
inline SimReport simulate(const Instance& inst, const Walk& walk, double budget,
                          std::uint64_t trials, std::uint64_t seed,
                          const SimOptions& options = {}) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");

    // Cumulative mass per visited vertex, shared across trials.
    std::vector<int> first_pos(inst.vertex_count(), -1);
    for (int j = 0; j < walk.length(); ++j) {
        if (first_pos[walk.verts[j]] < 0) first_pos[walk.verts[j]] = j;
    }

    SimReport report;
    report.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool success = false;
        for (int j = 0; j < walk.length(); ++j) {
            int v = walk.verts[j];
            if (first_pos[v] != j) continue; // realized price already revealed
            const auto& tiers = inst.sites[v].tiers;
            if (tiers.empty()) continue;
            double u = hash_unit(seed, t, static_cast<std::uint64_t>(v));
            double acc = 0.0;
            double realized = -1.0;
            for (const Tier& tier : tiers) {
                acc += tier.prob;
                if (u < acc) {
                    realized = tier.cost;
                    break;
                }
            }
            if (realized < 0.0) continue; // item unavailable here this trial
            if (approx_leq(realized, budget - walk.prefix_cost[j])) {
                success = true;
                if (options.stop_on_success) break;
            }
        }
        if (success) ++report.successes;
    }
    report.empirical_rate = static_cast<double>(report.successes) / static_cast<double>(trials);
    report.analytic_rate = success_probability(inst, walk, budget);
    report.standard_error =
        std::sqrt(report.analytic_rate * (1.0 - report.analytic_rate) / static_cast<double>(trials));
    return report;
}

} // namespace psearch
