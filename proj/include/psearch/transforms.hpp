#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psearch/instance.hpp"
#include "psearch/io.hpp"
#include "psearch/plan_eval.hpp"

namespace psearch {

// Result of splitting multi-cost sites into chains of single-cost vertices.
// Chain heads keep the original vertex ids and adjacency; the extra chain
// vertices are appended after them, linked consecutively by zero-weight
// edges. back_map sends a split vertex to (original vertex, tier index),
// with tier index -1 for vertices that carry no tier.
struct SingleCostInstance {
    Instance split;
    Instance original;
    std::vector<std::pair<int, int>> back_map;
    std::vector<int> chain_head; // original vertex -> split head (identity by construction)
};

// Rewrites every k-tier site as a chain u_1..u_k of single-tier sites where
// u_i sells at cost c_i with the conditional probability
// p(c_i) / (1 - sum_{j<i} p(c_j)). Visiting the affordable chain prefix has
// exactly the original failure probability.
//
// Throws std::domain_error when a proper tier-prefix already carries the full
// probability mass (the next conditional would divide by zero); callers may
// drop the unreachable trailing tiers and retry.
inline SingleCostInstance to_single_cost(const Instance& inst) {
    int n = inst.vertex_count();
    SingleCostInstance out;
    out.original = inst;
    out.chain_head.resize(n);

    std::vector<std::vector<Tier>> tiers(n);
    out.back_map.reserve(n);
    for (int v = 0; v < n; ++v) {
        out.chain_head[v] = v;
        const auto& site = inst.sites[v].tiers;
        out.back_map.push_back({v, site.empty() ? -1 : 0});
        if (!site.empty()) tiers[v] = {Tier{site[0].cost, site[0].prob}};
    }

    std::vector<Edge> edges = inst.edges;
    for (int v = 0; v < n; ++v) {
        const auto& site = inst.sites[v].tiers;
        double prefix = site.empty() ? 0.0 : site[0].prob;
        int prev = v;
        for (std::size_t i = 1; i < site.size(); ++i) {
            double denom = 1.0 - prefix;
            if (denom <= kTolerance) {
                throw std::domain_error(
                    "degenerate tier chain at vertex " + std::to_string(v) +
                    ": probability mass exhausted before tier " + std::to_string(i + 1));
            }
            int id = static_cast<int>(tiers.size());
            tiers.push_back({Tier{site[i].cost, site[i].prob / denom}});
            out.back_map.push_back({v, static_cast<int>(i)});
            edges.push_back({prev, id, 0.0});
            prev = id;
            prefix += site[i].prob;
        }
    }

    InstanceOptions opt;
    opt.allow_zero_weight_edges = true;
    int split_count = static_cast<int>(tiers.size());
    out.split = make_instance(split_count, inst.start, edges, std::move(tiers), opt);
    return out;
}

// Canonical embedding of an original-instance walk into the split graph:
// each visit detours over the full chain and back (all at zero cost), so
// travel cost and success probability are preserved exactly.
inline Walk expand_walk(const SingleCostInstance& sc, const Walk& walk) {
    std::vector<int> verts;
    int n = sc.original.vertex_count();
    std::vector<std::vector<int>> chain(n);
    for (int u = n; u < sc.split.vertex_count(); ++u) chain[sc.back_map[u].first].push_back(u);

    for (int v : walk.verts) {
        verts.push_back(sc.chain_head[v]);
        const auto& tail = chain[v];
        for (int u : tail) verts.push_back(u);
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
            if (std::next(it) != tail.rend()) verts.push_back(*std::next(it));
        }
        if (!tail.empty()) verts.push_back(sc.chain_head[v]);
    }
    return make_walk(sc.split, verts);
}

// Inverse of the embedding: chain excursions collapse to a single visit of
// the original vertex.
inline Walk map_walk_back(const SingleCostInstance& sc, const Walk& walk) {
    std::vector<int> verts;
    for (int u : walk.verts) {
        int orig = sc.back_map[u].first;
        if (verts.empty() || verts.back() != orig) verts.push_back(orig);
    }
    return make_walk(sc.original, verts);
}

// Prize-and-deadline view of a budgeted single-cost instance. Prizes are
// nonnegative; deadlines may be negative (such vertices are simply
// uncollectable).
struct DtspInstance {
    int root = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<Adj>> adj;
    std::vector<double> prize;
    std::vector<double> deadline;
    std::vector<long long> external_ids;

    int vertex_count() const { return static_cast<int>(prize.size()); }
};

// Budgets decrease along a walk while path lengths increase, so a remaining
// budget of at least c_v is the same as having spent at most B - c_v on
// arrival: prize(v) = -log(1 - p_v), deadline(v) = B - c_v.
inline DtspInstance to_deadline_tsp(const SingleCostInstance& sc, double budget) {
    if (budget < 0.0) throw std::invalid_argument("budget must be nonnegative");
    const Instance& g = sc.split;
    DtspInstance out;
    out.root = g.start;
    out.edges = g.edges;
    out.adj = g.adj;
    out.external_ids = g.external_ids;
    out.prize.resize(g.vertex_count(), 0.0);
    out.deadline.resize(g.vertex_count(), budget);
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& tiers = g.sites[v].tiers;
        if (tiers.empty()) continue; // pure pass-through, prize stays 0
        out.prize[v] = prize_from_probability(tiers[0].prob);
        out.deadline[v] = budget - tiers[0].cost;
    }
    out.prize[out.root] = 0.0;
    return out;
}

// Floor-or-one rounding that makes prizes integral while losing at most a
// factor of two: floor(p) when p >= 1, else 1. Zero prizes stay zero -- the
// bound below presumes positive prizes and connector vertices must not gain
// weight. When reported_c is given it receives the smallest c such that all
// positive prizes are >= 1/c (0 when there are none).
inline DtspInstance round_prizes(const DtspInstance& dtsp, double* reported_c = nullptr) {
    DtspInstance out = dtsp;
    double min_positive = kInfinity;
    for (double& p : out.prize) {
        if (p <= 0.0) continue;
        min_positive = std::min(min_positive, p);
        p = p >= 1.0 ? std::floor(p) : 1.0;
    }
    if (reported_c) *reported_c = min_positive == kInfinity ? 0.0 : 1.0 / min_positive;
    return out;
}

// Text form of a DtspInstance: the usual edge list plus a vertex table with
// prize and deadline columns.
inline std::string write_dtsp_graph(const DtspInstance& dtsp) {
    std::string out = "# u v length\n";
    auto ext = [&](int v) {
        return dtsp.external_ids.empty() ? static_cast<long long>(v) : dtsp.external_ids[v];
    };
    for (const Edge& e : dtsp.edges) {
        out += std::to_string(ext(e.u)) + ' ' + std::to_string(ext(e.v)) + ' ' +
               detail::format_double(e.weight) + '\n';
    }
    return out;
}

inline std::string write_dtsp_table(const DtspInstance& dtsp) {
    auto ext = [&](int v) {
        return dtsp.external_ids.empty() ? static_cast<long long>(v) : dtsp.external_ids[v];
    };
    std::string out = "root: " + std::to_string(ext(dtsp.root)) + "\n# vertex: prize deadline\n";
    for (int v = 0; v < dtsp.vertex_count(); ++v) {
        out += std::to_string(ext(v)) + ": " + detail::format_double(dtsp.prize[v]) + ' ' +
               detail::format_double(dtsp.deadline[v]) + '\n';
    }
    return out;
}

} // namespace psearch
