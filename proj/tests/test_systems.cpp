/*
 * Copyright 2026 The altref Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "oracles.hpp"

#include <gtest/gtest.h>

namespace altref {
namespace {

using testing::fix1;
using testing::fix2;
using testing::fix3;
using testing::fixture_text;

bool has_violation(const std::vector<std::string>& v, const std::string& needle)
{
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

TEST(Parse, SmallestTransitionSystem)
{
    auto s = parse_system("ts\nobs p\nstates s0\ninit s0\nlabel s0 p\nedge s0 s0\n");
    ASSERT_TRUE(std::holds_alternative<Ts>(s));
    const auto& t = std::get<Ts>(s);
    EXPECT_EQ(t.num_states(), 1);
    EXPECT_EQ(t.succ, (std::vector<std::vector<int>>{{0}}));
}

TEST(Parse, FixtureAtsMatchesCodeFixture)
{
    auto s = parse_system(fixture_text("fix1.ats"));
    ASSERT_TRUE(std::holds_alternative<Ats>(s));
    EXPECT_EQ(std::get<Ats>(s), fix1());
    EXPECT_EQ(build_succ_index(std::get<Ats>(s)).count(), 3);
}

TEST(Parse, FairLineSelectsFairVariant)
{
    auto s = parse_system(fixture_text("fix4.ts"));
    ASSERT_TRUE(std::holds_alternative<FairTs>(s));
    EXPECT_EQ(std::get<FairTs>(s), testing::fix4());

    auto empty = parse_system(fixture_text("fix2_unfair.ts"));
    ASSERT_TRUE(std::holds_alternative<FairTs>(empty));
    EXPECT_TRUE(std::get<FairTs>(empty).fair.empty());
}

TEST(Parse, StateWithoutEdgeIsRejected)
{
    try {
        parse_system(fixture_text("malformed.ts"));
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("state 1 (s1) has no outgoing edge"), std::string::npos) << e.what();
    }
}

TEST(Parse, ErrorsCarryLineNumbers)
{
    const std::string head = "ats\nobs p\nstates s0\ninit s0\nlabel s0 p\n";
    struct Case {
        std::string text;
        int line;
    } cases[] = {
        {head + "act1 s0 a\nact2 s0 x\ntrans s0 a x s9\n", 8},
        {head + "label s0 p\n", 6},
        {head + "act1 s0 a\nact2 s0 x\ntrans s0 a x s0\ntrans s0 a x s0\n", 9},
        {head + "edge s0 s0\n", 6},
        {"ts\nobs p\nstates s0\ninit s0\nlabel s0 r\n", 5},
        {"bogus\n", 1},
    };
    for (const auto& c : cases) {
        try {
            parse_system(c.text);
            ADD_FAILURE() << "accepted:\n" << c.text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), c.line) << e.what();
        }
    }
}

TEST(Parse, MissingTransitionIsRejected)
{
    const std::string text = "ats\nobs p\nstates s0\ninit s0\nlabel s0 p\nact1 s0 a\nact2 s0 x y\ntrans s0 a x s0\n";
    EXPECT_THROW(parse_system(text), ParseError);
}

TEST(Parse, DeclaredAlphabetFixesActionIndices)
{
    const std::string body = "obs p\nstates s0\ninit s0\nlabel s0 p\nact1 s0 b\nact2 s0 x\ntrans s0 b x s0\n";
    const auto k = std::get<Ats>(parse_system("ats\nactions1 a b\nactions2 x\n" + body));
    EXPECT_EQ(k.actions1, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(k.enabled1[0], std::vector<int>{1});
    // without the declaration the first enabled action gets index 0
    EXPECT_EQ(std::get<Ats>(parse_system("ats\n" + body)).enabled1[0], std::vector<int>{0});
    EXPECT_THROW(parse_system("ats\nactions1 a\n" + body), ParseError);
    EXPECT_THROW(parse_system("ts\nactions1 a\nobs p\nstates s0\ninit s0\nlabel s0 p\nedge s0 s0\n"), ParseError);
}

TEST(Parse, CommentsAndBlankLinesIgnored)
{
    auto s = parse_system("# leading\n\nts   # header\nobs p\nstates s0\n\ninit s0\nlabel s0 p\nedge s0 s0 # loop\n");
    EXPECT_EQ(std::get<Ts>(s).num_states(), 1);
    EXPECT_EQ(std::get<Ts>(s).succ[0], std::vector<int>{0});
}

TEST(Validate, FixtureIsValid) { EXPECT_TRUE(validate(fix1()).empty()); }

TEST(Validate, EmptyAgentTwoSet)
{
    Ats k = fix1();
    k.enabled2[1].clear();
    k.delta[k.cell(1, 0, 0)] = kNoState;
    EXPECT_TRUE(has_violation(validate(k), "P2(1) empty"));
}

TEST(Validate, TransitionOnDisabledAction)
{
    Ats k = fix1();
    k.delta[k.cell(1, 1, 0)] = 0; // b is not enabled at state 1
    EXPECT_TRUE(has_violation(validate(k), "transition on disabled action"));
}

TEST(Validate, MissingAndDanglingEntries)
{
    Ats k = fix1();
    k.delta[k.cell(0, 0, 0)] = kNoState;
    k.delta[k.cell(0, 1, 1)] = 7;
    const auto v = validate(k);
    EXPECT_TRUE(has_violation(v, "missing transition"));
    EXPECT_TRUE(has_violation(v, "dangling"));

    Ts t = fix2();
    t.succ[1].clear();
    EXPECT_TRUE(has_violation(validate(t), "has no outgoing edge"));
}

TEST(Embedding, SingleSelfLoop)
{
    const Ats k = ts_to_ats(fix3());
    EXPECT_EQ(k.num_actions1(), 1);
    EXPECT_EQ(k.num_actions2(), 1);
    EXPECT_EQ(k.next(0, 0, 0), 0);
}

TEST(Embedding, OneActionPerSuccessor)
{
    const Ats k = ts_to_ats(fix2());
    EXPECT_EQ(k.enabled1[0], std::vector<int>{0});
    EXPECT_EQ(k.next(0, 0, 0), 1);
    EXPECT_EQ(k.next(1, 0, 0), 1);
    EXPECT_EQ(k.label, fix2().label);
    EXPECT_EQ(k.init, fix2().init);
}

TEST(Embedding, RandomSystemsStayValidWithSingletonSuccessorSets)
{
    RandomStream rng(11, 0);
    for (int i = 0; i < 200; ++i) {
        const Ts t = testing::random_ts_with_obs(rng, 6, 2);
        const Ats k = ts_to_ats(t);
        ASSERT_TRUE(validate(k).empty());
        const auto idx = build_succ_index(k);
        EXPECT_LE(idx.count(), t.num_states());
        for (int id = 0; id < idx.count(); ++id) EXPECT_EQ(idx.members(id).size(), 1u);
        // the embedding has the same edges as the original system
        for (int w = 0; w < t.num_states(); ++w) {
            std::vector<int> succ;
            for (int a : k.enabled1[w]) succ.push_back(k.next(w, a, 0));
            EXPECT_EQ(succ, t.succ[w]);
        }
    }
}

TEST(Serialize, RoundTripOfRandomSystems)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (bool ts : {false, true}) {
            RandomSpec spec{1 + static_cast<int>(seed % 5), 1 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2),
                            1 + static_cast<int>(seed % 3), seed % 3 == 0 ? 0.0 : 0.4, seed};
            const System s = random_system(spec, ts);
            const std::string text = serialize_system(s);
            const System back = parse_system(text);
            EXPECT_EQ(back, s);
            EXPECT_TRUE(validate(back).empty());
            EXPECT_EQ(serialize_system(back), text);
        }
    }
}

TEST(Serialize, FixtureRoundTrip)
{
    for (const char* name : {"fix1.ats", "fix2.ts", "fix3.ts", "fix4.ts", "fix2_unfair.ts"}) {
        const System s = parse_system(fixture_text(name));
        EXPECT_EQ(parse_system(serialize_system(s)), s) << name;
    }
}

TEST(Relation, EmptyRelationHeaderOnly) { EXPECT_EQ(serialize_relation(SimRelation(2, 1)), "# pairs=0\n"); }

TEST(Relation, SinglePair) { EXPECT_EQ(serialize_relation(SimRelation(1, 1, {{0, 0}})), "# pairs=1\n0\t0\n"); }

TEST(Relation, PairsAreOrdered)
{
    const SimRelation r(2, 1, {{1, 0}, {0, 0}});
    EXPECT_EQ(serialize_relation(r), "# pairs=2\n0\t0\n1\t0\n");
}

TEST(Relation, NamedRoundTrip)
{
    const std::vector<std::string> l{"a", "b", "c"}, r{"x", "y"};
    const SimRelation rel(3, 2, {{2, 1}, {0, 0}, {0, 1}});
    const std::string text = serialize_relation(rel, &l, &r);
    EXPECT_EQ(text, "# pairs=3\na\tx\na\ty\nc\ty\n");
    EXPECT_EQ(parse_relation(text, l, r), rel);
    EXPECT_EQ(parse_relation(serialize_relation(rel), 3, 2), rel);
}

TEST(Relation, OutOfRangePairRejected)
{
    EXPECT_THROW(SimRelation(1, 1, {{0, 1}}), std::out_of_range);
}

TEST(Alphabet, DifferentObservationSetsAreRejected)
{
    Ts a = fix3();
    Ts b = fix3();
    b.obs = {"p", "r"};
    EXPECT_THROW(observation_map(a.obs, b.obs), Mismatch);
    b.obs = {"q", "p"}; // same names, different order
    b.label = {1};
    EXPECT_EQ(label_match_table(a, b), std::vector<bool>{true});
}

} // namespace
} // namespace altref
