#include <catch2/catch_amalgamated.hpp>

#include "psearch/deadline_tsp.hpp"
#include "psearch/exact.hpp"

#include "oracles.hpp"

using namespace psearch;

namespace {

DtspInstance random_dtsp(std::uint64_t seed) {
    Instance graph = oracles::random_instance(seed, 5, 0, 1.0, 8.0, 1.0, 3.0);
    DtspInstance dtsp;
    dtsp.root = graph.start;
    dtsp.edges = graph.edges;
    dtsp.adj = graph.adj;
    Rng rng(seed ^ 0xd75b);
    for (int v = 0; v < graph.vertex_count(); ++v) {
        bool has_prize = v != dtsp.root && rng.next_unit() < 0.6;
        dtsp.prize.push_back(has_prize ? rng.uniform(0.1, 2.0) : 0.0);
        dtsp.deadline.push_back(rng.uniform(0.0, 6.0));
    }
    return dtsp;
}

} // namespace

TEST_CASE("walk scoring follows first arrivals and deadlines") {
    DtspInstance dtsp;
    dtsp.root = 0;
    dtsp.edges = {{0, 1, 4.0}};
    dtsp.adj = {{{1, 4.0, 0}}, {{0, 4.0, 0}}};
    dtsp.prize = {0.0, 1.0};
    dtsp.deadline = {10.0, 7.0};

    CHECK(dtsp_prize(dtsp, {0}).total_prize == 0.0);
    CHECK(dtsp_prize(dtsp, {0, 1}).total_prize == 1.0);
    dtsp.deadline[1] = 3.0;
    CHECK(dtsp_prize(dtsp, {0, 1}).total_prize == 0.0);
    dtsp.deadline[1] = 4.0; // arriving exactly on the deadline still collects
    CHECK(dtsp_prize(dtsp, {0, 1}).total_prize == 1.0);
}

TEST_CASE("nothing collectable when every deadline beats the distances") {
    DtspInstance dtsp;
    dtsp.root = 0;
    dtsp.edges = {{0, 1, 5.0}, {1, 2, 5.0}};
    dtsp.adj = {{{1, 5.0, 0}}, {{0, 5.0, 0}, {2, 5.0, 1}}, {{1, 5.0, 1}}};
    dtsp.prize = {0.0, 1.0, 2.0};
    dtsp.deadline = {0.0, 4.0, 8.0};
    auto sol = dtsp_solve_exact(dtsp);
    CHECK(sol.total_prize == 0.0);
    CHECK(sol.walk == std::vector<int>{0});
    CHECK(sol.optimal);
}

TEST_CASE("three-vertex instance matches exhaustive enumeration") {
    DtspInstance dtsp;
    dtsp.root = 0;
    dtsp.edges = {{0, 1, 1.0}, {0, 2, 2.0}};
    dtsp.adj = {{{1, 1.0, 0}, {2, 2.0, 1}}, {{0, 1.0, 0}}, {{0, 2.0, 1}}};
    dtsp.prize = {0.0, 1.0, 1.0};
    dtsp.deadline = {9.0, 1.0, 4.0};
    auto sol = dtsp_solve_exact(dtsp);
    CHECK_THAT(sol.total_prize,
               Catch::Matchers::WithinAbs(oracles::brute_force_dtsp_prize(dtsp, 6), 1e-12));
    CHECK(sol.total_prize == 2.0); // 0 -> 1 -> 0 -> 2 makes both deadlines
    // Tightening vertex 2's deadline below the detour length drops it.
    dtsp.deadline[2] = 2.0;
    CHECK(dtsp_solve_exact(dtsp).total_prize == 1.0);
}

TEST_CASE("exact solver equals brute force on random instances") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        DtspInstance dtsp = random_dtsp(seed);
        auto sol = dtsp_solve_exact(dtsp);
        REQUIRE(sol.optimal);
        double brute = oracles::brute_force_dtsp_prize(dtsp, 7);
        CHECK_THAT(sol.total_prize, Catch::Matchers::WithinAbs(brute, 1e-9));
        // The reported walk really earns the reported prize.
        CHECK_THAT(dtsp_prize(dtsp, sol.walk).total_prize,
                   Catch::Matchers::WithinAbs(sol.total_prize, 1e-12));
    }
}

TEST_CASE("greedy plug-in stays within the exact optimum") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        DtspInstance dtsp = random_dtsp(seed);
        auto exact = dtsp_solve_exact(dtsp);
        auto greedy = dtsp_solve_greedy(dtsp);
        CHECK(greedy.total_prize <= exact.total_prize + 1e-9);
        CHECK_THAT(dtsp_prize(dtsp, greedy.walk).total_prize,
                   Catch::Matchers::WithinAbs(greedy.total_prize, 1e-12));
    }
}

TEST_CASE("pipeline visits the only worthwhile site") {
    Instance inst = make_instance(2, 0, {{0, 1, 2.0}}, {{}, {{3.0, 0.5}}});
    auto result = approx_max_probability(inst, 5.0, dtsp_solve_exact);
    CHECK(result.status == SolveStatus::ok);
    CHECK_THAT(result.probability, Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK(result.walk.verts == std::vector<int>{0, 1});
    REQUIRE(result.ledger.size() == 1);
    CHECK(result.ledger[0].vertex == 1);
}

TEST_CASE("pipeline returns the empty plan when nothing is affordable") {
    Instance inst = make_instance(2, 0, {{0, 1, 2.0}}, {{}, {{3.0, 0.5}}});
    auto result = approx_max_probability(inst, 4.0, dtsp_solve_exact);
    CHECK(result.probability == 0.0);
    CHECK(result.walk.verts == std::vector<int>{0});
}

TEST_CASE("pipeline with the exact plug-in and no rounding is exact") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Instance inst = oracles::random_instance(seed, 6, 3);
        Rng rng(seed ^ 0xfeed);
        double budget = rng.uniform(2.0, 20.0);
        MaxProbPipelineOptions options;
        options.round = false;
        MaxProbPipelineResult piped;
        try {
            piped = approx_max_probability(inst, budget, dtsp_solve_exact, options);
        } catch (const std::domain_error&) {
            continue; // degenerate tier chain
        }
        auto direct = solve_max_prob_exact(inst, budget);
        REQUIRE(direct.optimal);
        CHECK_THAT(piped.probability, Catch::Matchers::WithinAbs(direct.probability, 1e-9));
        ++checked;
    }
    REQUIRE(checked >= 90);
}

TEST_CASE("rounded pipeline keeps the prize-ratio share of the optimum") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        Instance inst = oracles::random_instance(seed, 6, 3);
        Rng rng(seed ^ 0xa0);
        double budget = rng.uniform(2.0, 20.0);
        SingleCostInstance sc;
        try {
            sc = to_single_cost(inst);
        } catch (const std::domain_error&) {
            continue;
        }
        DtspInstance plain = to_deadline_tsp(sc, budget);
        auto best_plain = dtsp_solve_exact(plain);
        if (best_plain.total_prize <= 0.0) continue;

        auto rounded_result = approx_max_probability(inst, budget, dtsp_solve_exact, {});
        // Achieved prize, measured with the original (unrounded) prizes.
        Walk expanded = expand_walk(sc, rounded_result.walk);
        double achieved = dtsp_prize(plain, expanded.verts).total_prize;
        double q = achieved / best_plain.total_prize;
        auto exact = solve_max_prob_exact(inst, budget);
        CHECK(rounded_result.probability >= q * exact.probability - 1e-9);
    }
}

TEST_CASE("generalized binomial inequality") {
    Rng rng(20240913);
    for (int i = 0; i < 100000; ++i) {
        double p = rng.uniform(1e-9, 1.0 - 1e-9);
        double r = rng.uniform(1e-9, 1.0);
        CHECK(1.0 - std::pow(1.0 - p, r) >= r * p - 1e-12);
    }
}
