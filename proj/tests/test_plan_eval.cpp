#include <catch2/catch_amalgamated.hpp>

#include "psearch/plan_eval.hpp"

#include "oracles.hpp"

using namespace psearch;

namespace {

// v1 --(2)-- v2, item at v2 for 3 with probability one half.
Instance two_site() {
    return make_instance(2, 0, {{0, 1, 2.0}}, {{}, {{3.0, 0.5}}});
}

} // namespace

TEST_CASE("success probability counts the affordable first arrival") {
    Instance inst = two_site();
    Walk w = make_walk(inst, {0, 1});
    CHECK_THAT(success_probability(inst, w, 5.0), Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK(success_probability(inst, w, 4.0) == 0.0); // remaining 2 < 3
    CHECK(success_probability(inst, make_walk(inst, {0}), 100.0) == 0.0);
}

TEST_CASE("minimal budget for a fixed walk") {
    Instance inst = two_site();
    Walk w = make_walk(inst, {0, 1});
    auto b = minimal_budget_for_walk(inst, w, 0.5);
    REQUIRE(b);
    CHECK_THAT(*b, Catch::Matchers::WithinAbs(5.0, 1e-12));
    auto zero = minimal_budget_for_walk(inst, w, 0.0);
    REQUIRE(zero);
    CHECK(*zero == 0.0);
    CHECK_FALSE(minimal_budget_for_walk(inst, w, 0.6));
}

TEST_CASE("collected prize is the negative log of the failure product") {
    Instance inst = two_site();
    Walk w = make_walk(inst, {0, 1});
    CHECK_THAT(collected_prize(inst, w, 5.0),
               Catch::Matchers::WithinAbs(0.6931471805599453, 1e-9));
    CHECK(collected_prize(inst, w, 0.0) == 0.0);

    // Two half-probability sites compound additively in prize space.
    Instance pair = make_instance(3, 0, {{0, 1, 1.0}, {1, 2, 1.0}},
                                  {{}, {{1.0, 0.5}}, {{1.0, 0.5}}});
    Walk w2 = make_walk(pair, {0, 1, 2});
    CHECK_THAT(success_probability(pair, w2, 10.0), Catch::Matchers::WithinAbs(0.75, 1e-12));
    CHECK_THAT(collected_prize(pair, w2, 10.0),
               Catch::Matchers::WithinAbs(1.3862943611198906, 1e-9));
}

TEST_CASE("prize of a certain success hits the cap") {
    Instance inst = make_instance(2, 0, {{0, 1, 1.0}}, {{}, {{1.0, 1.0}}});
    Walk w = make_walk(inst, {0, 1});
    CHECK(success_probability(inst, w, 5.0) == 1.0);
    CHECK(collected_prize(inst, w, 5.0) == kPrizeCap);
    CHECK(prize_from_probability(1.0) == kPrizeCap);
}

TEST_CASE("success probability is monotone in budget and under extension") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Instance inst = oracles::random_instance(seed, 6, 3);
        Rng rng(seed);
        auto walks = oracles::enumerate_walks(inst, 4);
        const auto& verts = walks[rng.next_below(walks.size())];
        Walk w = make_walk(inst, verts);
        double prev = -1.0;
        for (double b = 0.0; b < 30.0; b += 1.7) {
            double p = success_probability(inst, w, b);
            CHECK(p >= prev - 1e-12);
            prev = p;
        }
        // Extension with a fixed budget never hurts.
        double budget = rng.uniform(0.0, 25.0);
        for (const Adj& a : inst.adj[w.verts.back()]) {
            std::vector<int> longer = w.verts;
            longer.push_back(a.to);
            CHECK(success_probability(inst, make_walk(inst, longer), budget) >=
                  success_probability(inst, w, budget) - 1e-12);
        }
    }
}

TEST_CASE("success probability is constant between adjacent jump budgets") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Instance inst = oracles::random_instance(seed, 5, 3);
        Rng rng(seed ^ 0xabc);
        auto walks = oracles::enumerate_walks(inst, 4);
        const auto& verts = walks[rng.next_below(walks.size())];
        Walk w = make_walk(inst, verts);
        auto jumps = budget_jump_set(inst, w);
        for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
            if (jumps[i + 1] - jumps[i] < 1e-6) continue;
            double lo = jumps[i] + 1e-4 * (jumps[i + 1] - jumps[i]);
            double hi = jumps[i + 1] - 1e-4 * (jumps[i + 1] - jumps[i]);
            CHECK(success_probability(inst, w, lo) ==
                  Catch::Approx(success_probability(inst, w, hi)).margin(1e-12));
        }
    }
}

TEST_CASE("prize additivity matches the per-event sum") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Instance inst = oracles::random_instance(seed, 6, 3);
        Rng rng(seed ^ 0x5eed);
        auto walks = oracles::enumerate_walks(inst, 4);
        const auto& verts = walks[rng.next_below(walks.size())];
        Walk w = make_walk(inst, verts);
        double budget = rng.uniform(0.0, 25.0);
        double from_events = 0.0;
        for (const CollectionEvent& e : collection_events(inst, w, budget)) {
            const auto& tiers = inst.sites[e.vertex].tiers;
            double prefix = 0.0;
            for (int i = 0; i < e.tiers_counted; ++i) {
                double conditional = tiers[i].prob / (1.0 - prefix);
                from_events += -std::log1p(-conditional);
                prefix += tiers[i].prob;
            }
        }
        double direct = collected_prize(inst, w, budget);
        if (direct < kPrizeCap) {
            CHECK_THAT(from_events, Catch::Matchers::WithinAbs(direct, 1e-9));
        }
    }
}

TEST_CASE("minimal budget agrees with a fine grid scan") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Instance inst = oracles::random_instance(seed, 6, 3);
        Rng rng(seed ^ 0x11);
        auto walks = oracles::enumerate_walks(inst, 4);
        const auto& verts = walks[rng.next_below(walks.size())];
        Walk w = make_walk(inst, verts);
        double p_succ = rng.uniform(0.05, 0.7);
        auto exact = minimal_budget_for_walk(inst, w, p_succ);
        auto grid = oracles::grid_min_budget(inst, w, p_succ);
        REQUIRE(exact.has_value() == grid.has_value());
        if (exact) {
            // The grid can only overshoot by its own step.
            CHECK(*grid >= *exact - kTolerance);
            CHECK(*grid <= *exact + 1e-3 + kTolerance);
        }
    }
}
