#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "redrec/chain.hpp"

using namespace redrec;

namespace {

// Simulate a chain plan as a column move and return the counts.
OpCounts simulate_plan(const ChainPlan& plan, int length,
                       const std::vector<int>& sources) {
    GridSpec spec(1, length, 1, 1);
    ArrayState state(spec);
    int id = 0;
    for (int row : sources) state.place_static(TrapIndex{0, row}, Atom{id++, 1.0});
    const ActuationSequence seq = plan_to_sequence(plan, ChainLocator{true, 0});
    return count_ops(state, seq);
}

} // namespace

TEST_CASE("two atoms fold inward") {
    const ChainPlan plan = solve_chain({5, {0, 4}, {1, 3}});
    REQUIRE(plan.assignment.size() == 2);
    CHECK(plan.assignment[0] == std::pair<int, int>{0, 1});
    CHECK(plan.assignment[1] == std::pair<int, int>{4, 3});
    CHECK(plan.cost == 2);
}

TEST_CASE("surplus atoms idle at minimal displacement") {
    const ChainPlan plan = solve_chain({5, {0, 2, 4}, {2, 3}});
    REQUIRE(plan.assignment.size() == 2);
    CHECK(plan.assignment[0] == std::pair<int, int>{2, 2});
    CHECK(plan.assignment[1] == std::pair<int, int>{4, 3});
    REQUIRE(plan.idle.size() == 1);
    CHECK(plan.idle[0] == 0);
    CHECK(plan.cost == 1);
}

TEST_CASE("identity problem has zero cost") {
    const ChainPlan plan = solve_chain({9, {1, 4, 7}, {1, 4, 7}});
    CHECK(plan.cost == 0);
    for (const auto& [src, dst] : plan.assignment) CHECK(src == dst);
}

TEST_CASE("deficit fills the cheapest targets and reports the rest") {
    const ChainPlan plan = solve_chain({8, {0}, {3, 5}});
    REQUIRE(plan.assignment.size() == 1);
    CHECK(plan.assignment[0] == std::pair<int, int>{0, 3});
    REQUIRE(plan.unfilled.size() == 1);
    CHECK(plan.unfilled[0] == 5);
}

TEST_CASE("empty problems produce empty plans") {
    CHECK(solve_chain({4, {}, {1}}).assignment.empty());
    CHECK(solve_chain({4, {1}, {}}).assignment.empty());
}

TEST_CASE("exhaustive optimality on all chains up to length 8") {
    for (int length = 1; length <= 8; ++length) {
        for (unsigned smask = 0; smask < (1u << length); ++smask) {
            std::vector<int> sources;
            for (int i = 0; i < length; ++i)
                if (smask & (1u << i)) sources.push_back(i);
            for (unsigned tmask = 0; tmask < (1u << length); ++tmask) {
                std::vector<int> targets;
                for (int i = 0; i < length; ++i)
                    if (tmask & (1u << i)) targets.push_back(i);
                const ChainPlan plan = solve_chain({length, sources, targets});
                const long long expected = oracle::brute_force_chain_cost(sources, targets);
                REQUIRE(plan.cost == expected);
                REQUIRE(plan.assignment.size() == std::min(sources.size(), targets.size()));
            }
        }
    }
}

TEST_CASE("equal counts give a tie-break-independent assignment") {
    for (int length = 2; length <= 8; ++length) {
        for (unsigned smask = 0; smask < (1u << length); ++smask) {
            std::vector<int> sources;
            for (int i = 0; i < length; ++i)
                if (smask & (1u << i)) sources.push_back(i);
            for (unsigned tmask = 0; tmask < (1u << length); ++tmask) {
                std::vector<int> targets;
                for (int i = 0; i < length; ++i)
                    if (tmask & (1u << i)) targets.push_back(i);
                if (targets.size() != sources.size()) continue;
                const ChainPlan low = solve_chain({length, sources, targets},
                                                  ChainTieBreak::prefer_low);
                const ChainPlan high = solve_chain({length, sources, targets},
                                                   ChainTieBreak::prefer_high);
                REQUIRE(low.assignment == high.assignment);
            }
        }
    }
}

TEST_CASE("non-crossing plans execute without annihilation") {
    // Directional split: {0->1, 4->3} costs four transfers, two displacements.
    const ChainPlan plan = solve_chain({5, {0, 4}, {1, 3}});
    const ActuationSequence seq = plan_to_sequence(plan, ChainLocator{true, 0});
    REQUIRE(seq.batches.size() == 4);
    CHECK(seq.batches[0].kind == BatchKind::transfer);
    CHECK(seq.batches[0].ops.size() == 2);
    CHECK(seq.batches[1].ops[0].sign == +1);
    CHECK(seq.batches[2].ops[0].sign == -1);

    const OpCounts counts = simulate_plan(plan, 5, {0, 4});
    CHECK(counts.transfers == 4);
    CHECK(counts.displacements == 2);
}

TEST_CASE("no-move plans expand to nothing") {
    const ChainPlan plan = solve_chain({6, {2, 3}, {2, 3}});
    CHECK(plan_to_sequence(plan, ChainLocator{true, 0}).batches.empty());
}

TEST_CASE("parallel same-direction moves batch together") {
    const ChainPlan plan = solve_chain({5, {0, 1}, {2, 3}});
    const ActuationSequence seq = plan_to_sequence(plan, ChainLocator{true, 0});
    // extract, two lockstep +1 batches, implant
    REQUIRE(seq.batches.size() == 4);
    CHECK(seq.batches[1].ops.size() == 2);
    CHECK(seq.batches[2].ops.size() == 2);

    const OpCounts counts = simulate_plan(plan, 5, {0, 1});
    CHECK(counts.displacements == 4);
    CHECK(counts.transfers == 4);
}

TEST_CASE("pre-extracted atoms are implanted exactly once") {
    GridSpec spec(1, 6, 1, 2);
    ArrayState state(spec);
    state.place_static(TrapIndex{0, 2}, Atom{0, 1.0});
    state.place_dynamic(TrapIndex{0, 5}, Atom{1, 1.0});

    const ChainPlan plan = solve_chain({6, {2, 5}, {2, 3}});
    const ActuationSequence seq = plan_to_sequence(plan, ChainLocator{true, 0}, {5});
    OpCounts counts;
    for (const auto& batch : seq.batches) apply_batch(state, batch, counts);

    CHECK(counts.transfers == 1); // single implantation, no extraction
    CHECK(counts.per_atom.at(1).transfers == 1);
    CHECK(state.has_static({0, 2}));
    CHECK(state.has_static({0, 3}));
    CHECK(state.dynamic_count() == 0);
}

TEST_CASE("random chains execute to their target configuration") {
    std::mt19937_64 gen(1234);
    for (int iter = 0; iter < 300; ++iter) {
        const int length = 2 + static_cast<int>(gen() % 30);
        std::vector<int> sources, targets;
        for (int i = 0; i < length; ++i) {
            if (gen() % 3 == 0) sources.push_back(i);
            if (gen() % 4 == 0) targets.push_back(i);
        }
        const ChainPlan plan = solve_chain({length, sources, targets});

        GridSpec spec(1, length, 1, 1);
        ArrayState state(spec);
        int id = 0;
        for (int row : sources) state.place_static(TrapIndex{0, row}, Atom{id++, 1.0});
        const int before = state.static_count();
        const ActuationSequence seq = plan_to_sequence(plan, ChainLocator{true, 0});
        OpCounts counts;
        for (const auto& batch : seq.batches) apply_batch(state, batch, counts);

        REQUIRE(state.static_count() == before); // no annihilation
        REQUIRE(state.dynamic_count() == 0);
        for (const auto& [src, dst] : plan.assignment)
            REQUIRE(state.has_static(TrapIndex{0, dst}));
        REQUIRE(counts.displacements == plan.cost);
    }
}
