#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/instance.hpp"
#include "psearch/random.hpp"
#include "psearch/shortest_path.hpp"

namespace psearch {

struct SmallWorldParams {
    int n = 25000;
    int neighbors = 6; // ring-lattice degree, must be even
    double rewire_prob = 0.09;
    double edge_cost_min = 40.0;
    double edge_cost_max = 1040.0;
};

struct CostModel {
    double mean = 2700.0;
    double stddev = 900.0; // draws resampled until within two stddevs
};

struct ProbModel {
    double mean = 0.24;
    double stddev = 0.08; // draws clipped into (0.001, 0.999)
};

struct GeneratorConfig {
    SmallWorldParams topology;
    CostModel cost_model;
    ProbModel prob_model;
    int tier_count_min = 1;
    int tier_count_max = 5;
    std::uint64_t seed = 1;
};

// Ring lattice over n vertices where everyone is joined to its `neighbors`
// nearest vertices, then each edge is independently rewired with
// `rewire_prob` to a uniformly random endpoint that creates neither a
// self-loop nor a duplicate. Edge costs are uniform in the configured range.
// Sites come back empty; layer costs/probabilities on top separately.
inline Instance gen_small_world(const SmallWorldParams& params, std::uint64_t seed) {
    if (params.neighbors < 2 || params.neighbors % 2 != 0) {
        throw std::invalid_argument("neighbors must be even and at least 2");
    }
    if (params.n < params.neighbors + 1) {
        throw std::invalid_argument("need more vertices than neighbors");
    }
    if (params.rewire_prob < 0.0 || params.rewire_prob > 1.0) {
        throw std::invalid_argument("rewire probability outside [0, 1]");
    }
    if (params.edge_cost_min <= 0.0 || params.edge_cost_max < params.edge_cost_min) {
        throw std::invalid_argument("invalid edge cost range");
    }

    Rng rng(seed);
    std::set<std::pair<int, int>> edge_set;
    auto key = [](int a, int b) { return std::pair<int, int>(std::min(a, b), std::max(a, b)); };
    int half = params.neighbors / 2;
    for (int i = 0; i < params.n; ++i) {
        for (int j = 1; j <= half; ++j) edge_set.insert(key(i, (i + j) % params.n));
    }
    // Rewire pass in the same deterministic order the lattice was laid down.
    for (int i = 0; i < params.n; ++i) {
        for (int j = 1; j <= half; ++j) {
            auto old_edge = key(i, (i + j) % params.n);
            if (rng.next_unit() >= params.rewire_prob) continue;
            if (!edge_set.count(old_edge)) continue; // already rewired away
            for (int attempt = 0; attempt < 64; ++attempt) {
                int w = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(params.n)));
                if (w == i || edge_set.count(key(i, w))) continue;
                edge_set.erase(old_edge);
                edge_set.insert(key(i, w));
                break;
            }
        }
    }

    std::vector<Edge> edges;
    edges.reserve(edge_set.size());
    for (const auto& [u, v] : edge_set) {
        edges.push_back({u, v, rng.uniform(params.edge_cost_min, params.edge_cost_max)});
    }
    return make_instance(params.n, 0, edges, {});
}

// Draws tier tables for every vertex except the start: a uniform tier count,
// costs from the truncated normal (resampled until positive and within two
// stddevs of the mean, then sorted with duplicates merged), probabilities
// from the clipped normal, rescaled to total 0.999 if they exceed one.
inline Instance gen_costs_and_probs(const Instance& topology, const GeneratorConfig& config,
                                    std::uint64_t seed) {
    if (config.tier_count_min < 0 || config.tier_count_max < config.tier_count_min) {
        throw std::invalid_argument("invalid tier count range");
    }
    if (config.cost_model.mean <= 0.0 || config.cost_model.stddev < 0.0) {
        throw std::invalid_argument("invalid cost model");
    }
    Rng rng(seed);
    int n = topology.vertex_count();
    std::vector<std::vector<Tier>> tiers(n);
    for (int v = 0; v < n; ++v) {
        if (v == topology.start) continue; // the item is never sold at the start
        int count = config.tier_count_min +
                    static_cast<int>(rng.next_below(static_cast<std::uint64_t>(
                        config.tier_count_max - config.tier_count_min + 1)));
        std::vector<double> costs;
        for (int i = 0; i < count; ++i) {
            double c;
            do {
                c = rng.normal(config.cost_model.mean, config.cost_model.stddev);
            } while (std::abs(c - config.cost_model.mean) > 2.0 * config.cost_model.stddev ||
                     c <= 0.0);
            costs.push_back(c);
        }
        std::sort(costs.begin(), costs.end());
        costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
        std::vector<double> probs;
        double total = 0.0;
        for (std::size_t i = 0; i < costs.size(); ++i) {
            double p = rng.normal(config.prob_model.mean, config.prob_model.stddev);
            p = std::clamp(p, 0.001, 0.999);
            probs.push_back(p);
            total += p;
        }
        if (total > 1.0) {
            for (double& p : probs) p *= 0.999 / total;
        }
        for (std::size_t i = 0; i < costs.size(); ++i) tiers[v].push_back({costs[i], probs[i]});
    }
    std::vector<Edge> edges = topology.edges;
    return make_instance(n, topology.start, edges, std::move(tiers));
}

struct GeneratedInstance {
    Instance instance;
    std::uint64_t topology_seed = 0; // seed that produced the connected graph
    int regenerations = 0;
};

// Full pipeline with the connectivity guard: a disconnected topology is
// regenerated with the next seed (kept in the report, so runs stay
// reproducible).
inline GeneratedInstance generate_instance(const GeneratorConfig& config, std::uint64_t seed) {
    GeneratedInstance out;
    std::uint64_t s = seed;
    for (int attempt = 0;; ++attempt) {
        Instance topo = gen_small_world(config.topology, s);
        if (is_connected(topo)) {
            out.instance = gen_costs_and_probs(topo, config, hash_stream(s, 0x5e, 0xed));
            out.topology_seed = s;
            out.regenerations = attempt;
            return out;
        }
        if (attempt > 1000) throw std::runtime_error("could not generate a connected graph");
        ++s;
    }
}

} // namespace psearch
