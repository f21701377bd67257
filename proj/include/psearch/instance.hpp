#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psearch/common.hpp"

namespace psearch {

// One (cost, probability) entry of a site's price mass function.
struct Tier {
    double cost = 0.0;
    double prob = 0.0;
};

// A vertex together with the price distribution of the item there. An empty
// tier list means the item is never available at this site (pass-through).
// Tiers are kept sorted by strictly increasing cost; the residual mass
// 1 - sum(prob) is the chance the item is unavailable.
struct Site {
    int id = 0;
    std::vector<Tier> tiers;

    double total_mass() const {
        double m = 0.0;
        for (const Tier& t : tiers) m += t.prob;
        return m;
    }

    // Number of leading tiers affordable with `remaining` budget.
    int affordable_tiers(double remaining) const {
        int n = 0;
        for (const Tier& t : tiers) {
            if (!approx_leq(t.cost, remaining)) break;
            ++n;
        }
        return n;
    }

    // Cumulative probability of the affordable tier prefix.
    double affordable_mass(double remaining) const {
        double m = 0.0;
        for (const Tier& t : tiers) {
            if (!approx_leq(t.cost, remaining)) break;
            m += t.prob;
        }
        return m;
    }
};

struct Edge {
    int u = 0;
    int v = 0;
    double weight = 0.0;
};

// Adjacency entry; edge_id indexes Instance::edges and is what the ACO
// pheromone table and tree extraction key on.
struct Adj {
    int to = 0;
    double weight = 0.0;
    int edge_id = 0;
};

// An undirected search instance: travel graph, per-site price distributions,
// and the agent's start vertex. Immutable after construction; every solver
// treats it as a shared read-only input.
struct Instance {
    int start = 0;
    std::vector<Site> sites;               // index == dense vertex id
    std::vector<Edge> edges;               // parallel edges collapsed, no self-loops
    std::vector<std::vector<Adj>> adj;     // symmetric view of `edges`
    std::vector<long long> external_ids;   // dense id -> id used in input files

    int vertex_count() const { return static_cast<int>(sites.size()); }

    const std::vector<Adj>& neighbors(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::out_of_range("vertex id out of range");
        return adj[v];
    }

    long long external_id(int v) const {
        return external_ids.empty() ? v : external_ids[v];
    }

    int dense_id(long long external) const {
        if (external_ids.empty()) {
            if (external < 0 || external >= vertex_count()) {
                throw std::out_of_range("vertex id out of range");
            }
            return static_cast<int>(external);
        }
        auto it = std::lower_bound(external_ids.begin(), external_ids.end(), external);
        if (it == external_ids.end() || *it != external) {
            throw std::out_of_range("unknown external vertex id");
        }
        return static_cast<int>(it - external_ids.begin());
    }

    // Weight of edge (u, v), or negative if absent.
    double edge_weight(int u, int v) const {
        for (const Adj& a : adj[u]) {
            if (a.to == v) return a.weight;
        }
        return -1.0;
    }

    double min_tier_cost() const {
        double c = kInfinity;
        for (const Site& s : sites) {
            for (const Tier& t : s.tiers) c = std::min(c, t.cost);
        }
        return c;
    }
};

struct InstanceOptions {
    int max_tiers = 16;
    // Split-cost chains introduce zero-weight connector edges; file input
    // never does.
    bool allow_zero_weight_edges = false;
};

// Builds a validated Instance from dense-indexed parts: collapses parallel
// edges to their minimum weight, sorts tiers, merges duplicate-cost tiers by
// summing probabilities, and checks every type invariant.
inline Instance make_instance(int vertex_count, int start,
                              const std::vector<Edge>& raw_edges,
                              std::vector<std::vector<Tier>> tiers,
                              const InstanceOptions& options = {}) {
    if (vertex_count <= 0) throw std::invalid_argument("instance needs at least one vertex");
    if (start < 0 || start >= vertex_count) throw std::invalid_argument("missing start vertex");
    if (static_cast<int>(tiers.size()) > vertex_count) {
        throw std::invalid_argument("more site entries than vertices");
    }
    tiers.resize(vertex_count);

    Instance inst;
    inst.start = start;
    inst.sites.resize(vertex_count);

    std::map<std::pair<int, int>, double> collapsed;
    for (const Edge& e : raw_edges) {
        if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
        if (e.weight < 0.0 || (!options.allow_zero_weight_edges && e.weight <= 0.0)) {
            throw std::invalid_argument("nonpositive edge weight");
        }
        std::pair<int, int> key{std::min(e.u, e.v), std::max(e.u, e.v)};
        auto [it, inserted] = collapsed.emplace(key, e.weight);
        if (!inserted) it->second = std::min(it->second, e.weight);
    }

    inst.adj.resize(vertex_count);
    for (const auto& [key, w] : collapsed) {
        int id = static_cast<int>(inst.edges.size());
        inst.edges.push_back({key.first, key.second, w});
        inst.adj[key.first].push_back({key.second, w, id});
        inst.adj[key.second].push_back({key.first, w, id});
    }
    for (auto& list : inst.adj) {
        std::sort(list.begin(), list.end(), [](const Adj& a, const Adj& b) { return a.to < b.to; });
    }

    for (int v = 0; v < vertex_count; ++v) {
        Site& site = inst.sites[v];
        site.id = v;
        std::vector<Tier>& in = tiers[v];
        std::sort(in.begin(), in.end(), [](const Tier& a, const Tier& b) { return a.cost < b.cost; });
        for (const Tier& t : in) {
            if (t.cost < 0.0) throw std::invalid_argument("negative tier cost");
            if (t.prob < -kTolerance || t.prob > 1.0 + kTolerance) {
                throw std::invalid_argument("tier probability outside [0, 1]");
            }
            if (!site.tiers.empty() && approx_eq(site.tiers.back().cost, t.cost)) {
                site.tiers.back().prob += t.prob; // duplicate cost: merge
            } else {
                site.tiers.push_back(t);
            }
        }
        if (static_cast<int>(site.tiers.size()) > options.max_tiers) {
            throw std::invalid_argument("tier count exceeds configured maximum");
        }
        if (site.total_mass() > 1.0 + kTolerance) {
            throw std::invalid_argument("probability mass exceeds 1 at vertex " + std::to_string(v));
        }
    }
    if (!inst.sites[start].tiers.empty()) {
        throw std::invalid_argument("start vertex must have an empty cost table");
    }
    return inst;
}

// A walk through the instance: starts at Instance::start, consecutive
// vertices adjacent, repeats allowed. prefix_cost[j] is the travel spent on
// arrival at verts[j]; prefix_cost[0] == 0.
struct Walk {
    std::vector<int> verts;
    std::vector<double> prefix_cost;

    int length() const { return static_cast<int>(verts.size()); }
    double total_cost() const { return prefix_cost.empty() ? 0.0 : prefix_cost.back(); }
};

inline Walk make_walk(const Instance& inst, const std::vector<int>& verts) {
    if (verts.empty()) throw std::invalid_argument("walk must contain at least the start vertex");
    if (verts.front() != inst.start) throw std::invalid_argument("walk must begin at the start vertex");
    Walk w;
    w.verts = verts;
    w.prefix_cost.resize(verts.size(), 0.0);
    for (std::size_t i = 1; i < verts.size(); ++i) {
        double ew = inst.edge_weight(verts[i - 1], verts[i]);
        if (ew < 0.0) {
            throw std::invalid_argument("walk steps over a missing edge " +
                                        std::to_string(verts[i - 1]) + "-" + std::to_string(verts[i]));
        }
        w.prefix_cost[i] = w.prefix_cost[i - 1] + ew;
    }
    return w;
}

// The literal neighborhood of a walk: every vertex adjacent to some walk
// vertex, already-visited vertices included. Sorted ascending.
inline std::vector<int> frontier(const Instance& inst, const Walk& walk) {
    std::vector<bool> in(inst.vertex_count(), false);
    for (int u : walk.verts) {
        for (const Adj& a : inst.adj[u]) in[a.to] = true;
    }
    std::vector<int> out;
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (in[v]) out.push_back(v);
    }
    return out;
}

} // namespace psearch
