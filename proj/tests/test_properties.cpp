#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "properties.hpp"

using namespace repcause;

namespace {

constexpr int kInstances = 500;

template <class Check>
void for_random_problems(std::uint32_t seed, const oracle::GenLimits& lim, int count, Check check) {
    std::mt19937 rng(seed);
    for (int i = 0; i < count; ++i) {
        auto p = oracle::random_problem(rng, lim);
        if (auto f = check(p)) FAIL() << "instance " << i << ": " << *f;
    }
}

oracle::GenLimits null_limits() {
    oracle::GenLimits lim;
    lim.max_positions = 12;
    return lim;
}

} // namespace

TEST(Properties, CausesMatchDefinition) {
    for_random_problems(11, {}, kInstances, props::check_causes);
}

TEST(Properties, CausesMatchDefinitionWithExogenousTuples) {
    oracle::GenLimits lim;
    lim.exogenous = true;
    for_random_problems(12, lim, kInstances, props::check_causes);
}

TEST(Properties, SRepairsMatchBruteForce) {
    for_random_problems(21, {}, kInstances, props::check_repairs);
}

TEST(Properties, SRepairsWithExogenousTuples) {
    oracle::GenLimits lim;
    lim.exogenous = true;
    for_random_problems(22, lim, kInstances, props::check_repairs);
}

TEST(Properties, NullRepairsMatchExhaustiveSearch) {
    for_random_problems(31, null_limits(), kInstances, props::check_null_repairs);
}

TEST(Properties, NullRepairsWithSeededNulls) {
    auto lim = null_limits();
    lim.nulls = true;
    for_random_problems(32, lim, kInstances, props::check_null_repairs);
}

TEST(Properties, AttributeCausesMatchDefinition) {
    for_random_problems(41, null_limits(), kInstances,
                        [](const auto& p) { return props::check_null_causes(p, false); });
}

TEST(Properties, ActualAttributeCauseSearchMatchesRepairs) {
    oracle::GenLimits lim;
    lim.max_positions = 8;
    for_random_problems(42, lim, 150, [](const auto& p) { return props::check_null_causes(p, true); });
}

TEST(Properties, EvaluationMatchesNestedLoops) {
    oracle::GenLimits lim;
    lim.nulls = true;
    for_random_problems(51, lim, kInstances, props::check_eval);
}

TEST(Properties, RenderParseRoundTrip) {
    for_random_problems(61, {}, kInstances, props::check_roundtrip);
}

TEST(Properties, DeltaApplyRoundTrip) {
    std::mt19937 rng(71);
    oracle::GenLimits lim;
    lim.nulls = true;
    for (int i = 0; i < kInstances; ++i) {
        auto p = oracle::random_problem(rng, lim);
        UpdateSet u;
        for (const auto& pos : non_null_positions(p.instance))
            if (rng() % 3 == 0) u.insert(pos);
        const auto before = p.instance;
        auto updated = apply_update(u, p.instance);
        ASSERT_EQ(p.instance, before);
        ASSERT_EQ(delta_null(p.instance, updated), u) << props::describe(p);
        ASSERT_EQ(updated.tids(), p.instance.tids());
    }
}

// Adding null-free tuples never falsifies a query.
TEST(Properties, MonotoneUnderInsertion) {
    std::mt19937 rng(81);
    for (int i = 0; i < kInstances; ++i) {
        auto p = oracle::random_problem(rng, {});
        const auto q = oracle::query_of(p.dcs);
        auto tids = p.instance.tids();
        TidSet drop;
        for (Tid t : tids)
            if (rng() % 2) drop.insert(t);
        auto smaller = oracle::without(p.instance, drop);
        if (eval_bcq(smaller, q)) ASSERT_TRUE(eval_bcq(p.instance, q)) << props::describe(p);
    }
}

// Nulling a position never creates a new answer.
TEST(Properties, NullsNeverCreateMatches) {
    std::mt19937 rng(91);
    oracle::GenLimits lim;
    lim.nulls = true;
    for (int i = 0; i < kInstances; ++i) {
        auto p = oracle::random_problem(rng, lim);
        const auto q = oracle::query_of(p.dcs);
        if (eval_bcq(p.instance, q)) continue;
        for (const auto& pos : non_null_positions(p.instance))
            ASSERT_FALSE(eval_bcq(apply_update({pos}, p.instance), q)) << props::describe(p) << pos.to_string();
    }
}

// A position read only by single-occurrence variables outside builtins never
// belongs to a null-repair delta.
TEST(Properties, NonCriticalPositionsAreNeverNulled) {
    std::mt19937 rng(101);
    auto lim = null_limits();
    for (int i = 0; i < kInstances; ++i) {
        auto p = oracle::random_problem(rng, lim);
        std::set<std::pair<std::string, std::size_t>> critical;
        for (const auto& dc : p.dcs)
            for (const auto& [atom, pos] : critical_term_positions(dc.body))
                critical.insert({dc.body.atoms[atom].relation, pos});
        for (const auto& d : null_repair_deltas(p.instance, p.dcs))
            for (const auto& pos : d)
                ASSERT_TRUE(critical.count({pos.relation, pos.position})) << props::describe(p) << pos.to_string();
    }
}
