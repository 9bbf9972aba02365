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
using testing::fix4;

const SimRelation kIdentity1(1, 1, {{0, 0}});

TEST(AltSimBasic, Examples)
{
    EXPECT_EQ(sim(fix3(), fix3(), Algo::Basic), kIdentity1);
    EXPECT_TRUE(sim(fix2(), fix3(), Algo::Basic).empty());
    const auto r = altsim_basic(fix1(), fix1());
    EXPECT_TRUE(r.contains(0, 0));
    EXPECT_TRUE(r.contains(1, 1));
}

TEST(AltSimGame, Examples)
{
    EXPECT_EQ(sim(fix3(), fix3(), Algo::Game), kIdentity1);
    EXPECT_TRUE(sim(fix3(), fix2(), Algo::Game).empty());
    EXPECT_EQ(altsim_game(fix1(), fix1()), altsim_basic(fix1(), fix1()));
}

TEST(AltSimIterative, Examples)
{
    EXPECT_EQ(sim(fix3(), fix3(), Algo::Iterative), kIdentity1);
    EXPECT_EQ(altsim_iterative(fix1(), fix1(), {true}), altsim_basic(fix1(), fix1()));
}

TEST(RelationGraph, Fixture)
{
    const Ats k = fix1();
    const auto g = build_relation_graph(k, build_succ_index(k));
    EXPECT_EQ(g.num_vertices(), 5);
    auto post = [&](int v) { return std::vector<int>(g.post(v).begin(), g.post(v).end()); };
    EXPECT_EQ(post(0), (std::vector<int>{g.set_vertex(0), g.set_vertex(2)}));
    EXPECT_EQ(post(1), (std::vector<int>{g.set_vertex(1)}));
    EXPECT_EQ(post(g.set_vertex(2)), (std::vector<int>{0, 1}));
    EXPECT_EQ(post(g.set_vertex(0)), (std::vector<int>{1}));
    EXPECT_EQ(post(g.set_vertex(1)), (std::vector<int>{0}));
    EXPECT_EQ(g.num_edges(), 7u);

    const Ats t = ts_to_ats(fix3());
    const auto gt = build_relation_graph(t, build_succ_index(t));
    EXPECT_EQ(gt.num_vertices(), 2);
    EXPECT_EQ(gt.num_edges(), 2u);
}

TEST(Relations, ThreeRoutesAgreeOnRandomPairs)
{
    RandomStream rng(41, 0);
    for (int i = 0; i < 1000; ++i) {
        auto [k, kp] = testing::random_ats_pair(rng);
        const auto basic = altsim_basic(k, kp);
        ASSERT_EQ(altsim_game(k, kp), basic) << "pair " << i;
        ASSERT_EQ(altsim_iterative(k, kp), basic) << "pair " << i;
        ASSERT_EQ(altsim_game(k, kp, true), basic) << "pair " << i;
    }
}

TEST(Relations, IterativeInvariantsAndCeilings)
{
    RandomStream rng(42, 0);
    for (int i = 0; i < 300; ++i) {
        auto [k, kp] = testing::random_ats_pair(rng);
        IterativeStats st;
        ASSERT_NO_THROW(altsim_iterative(k, kp, {true}, &st)) << "pair " << i;
        EXPECT_TRUE(st.within_ceilings());
        EXPECT_GT(st.invariant_checks, 0u);
    }
}

TEST(Relations, LabelSoundnessAndIdentity)
{
    RandomStream rng(43, 0);
    for (int i = 0; i < 200; ++i) {
        auto [fk, fkp] = testing::random_fair_ats_pair(rng);
        const auto match = label_match_table(fk.ats, fkp.ats);
        for (const auto& rel : {altsim_game(fk.ats, fkp.ats), fairaltsim(fk, fkp)})
            for (auto [w, wp] : rel.pairs()) EXPECT_TRUE(match[static_cast<std::size_t>(w) * fkp.ats.num_states() + wp]);
        for (int w = 0; w < fk.ats.num_states(); ++w) {
            EXPECT_TRUE(altsim_basic(fk.ats, fk.ats).contains(w, w));
            EXPECT_TRUE(altsim_iterative(fk.ats, fk.ats).contains(w, w));
            EXPECT_TRUE(fairaltsim(fk, fk).contains(w, w));
        }
    }
}

TEST(Relations, AlternatingSimulationIsTransitive)
{
    RandomStream rng(44, 0);
    for (int i = 0; i < 200; ++i) {
        const int n_obs = testing::draw(rng, 1, 2);
        const testing::Dims d{4, 2, 2, n_obs};
        const Ats a = testing::random_ats_with_obs(rng, d, n_obs);
        const Ats b = testing::random_ats_with_obs(rng, d, n_obs);
        const Ats c = testing::random_ats_with_obs(rng, d, n_obs);
        const auto ab = altsim_game(a, b), bc = altsim_game(b, c), ac = altsim_game(a, c);
        for (auto [x, y] : ab.pairs())
            for (int z = 0; z < c.num_states(); ++z)
                if (bc.contains(y, z)) EXPECT_TRUE(ac.contains(x, z));
    }
}

TEST(FairAltSim, Examples)
{
    const FairAts k = testing::with_all_fair(fix1());
    EXPECT_EQ(fairaltsim(k, k), altsim_game(fix1(), fix1()));
    EXPECT_EQ(fairaltsim(testing::with_no_fair(fix1()), k), testing::matching_pairs(fix1(), fix1()));
    const FairAts f4 = ts_to_ats(fix4());
    const auto r = fairaltsim(f4, f4);
    EXPECT_TRUE(r.contains(0, 0));
    EXPECT_TRUE(r.contains(1, 1));
}

TEST(FairSim, Examples)
{
    const auto r = fairsim(fix4(), fix4());
    EXPECT_TRUE(r.contains(0, 0));
    EXPECT_TRUE(r.contains(1, 1));
    EXPECT_EQ(fairsim(FairTs{fix2(), {}}, FairTs{fix3(), {}}), SimRelation(2, 1, {{0, 0}}));
}

TEST(FairRelations, Degenerations)
{
    RandomStream rng(45, 0);
    for (int i = 0; i < 300; ++i) {
        auto [fk, fkp] = testing::random_fair_ats_pair(rng);
        const Ats& k = fk.ats;
        const Ats& kp = fkp.ats;
        EXPECT_EQ(fairaltsim(testing::with_all_fair(k), testing::with_all_fair(kp)), altsim_basic(k, kp));
        EXPECT_EQ(fairaltsim(testing::with_no_fair(k), fkp), testing::matching_pairs(k, kp));

        auto [ft, ftp] = testing::random_fair_ts_pair(rng);
        const FairTs all{ft.ts, all_states(ft.ts.num_states())};
        const FairTs allp{ftp.ts, all_states(ftp.ts.num_states())};
        EXPECT_EQ(fairsim(all, allp), sim(ft.ts, ftp.ts, Algo::Basic));
        EXPECT_EQ(fairsim(FairTs{ft.ts, {}}, ftp), testing::matching_pairs(ft.ts, ftp.ts));
    }
}

TEST(FairRelations, SpecialisedGameMatchesEmbedding)
{
    RandomStream rng(46, 0);
    for (int i = 0; i < 500; ++i) {
        auto [ft, ftp] = testing::random_fair_ts_pair(rng);
        EXPECT_EQ(fairsim(ft, ftp), fairaltsim(ts_to_ats(ft), ts_to_ats(ftp))) << "pair " << i;
        EXPECT_EQ(fairsim(ft, ftp, true), fairsim(ft, ftp));
    }
}

TEST(FairRelations, MatchDefinitionalOracle)
{
    RandomStream rng(47, 0);
    for (int i = 0; i < 500; ++i) {
        auto [fk, fkp] = testing::random_fair_ats_pair(rng, {4, 2, 2, 2});
        ASSERT_EQ(fairaltsim(fk, fkp), testing::fair_relation_oracle(fk, fkp)) << "pair " << i;
    }
    for (int i = 0; i < 300; ++i) {
        auto [ft, ftp] = testing::random_fair_ts_pair(rng, 5, 2);
        ASSERT_EQ(fairsim(ft, ftp), testing::fair_relation_oracle(ts_to_ats(ft), ts_to_ats(ftp))) << "pair " << i;
    }
}

// Left: s0 (p) loops and may step to s1 (q), which loops and is not fair.
// Right: a single fair p-state. The only fair left run stays in s0, so s0 is
// simulated even though the challenger can reach a label mismatch.
TEST(FairRelations, MismatchOutsideFairnessRegionIsExcused)
{
    const FairTs left{testing::make_ts(2, {0, 1}, {{0, 1}, {1}}), {0}};
    const FairTs right{testing::make_ts(1, {0}, {{0}}), {0}};
    EXPECT_TRUE(testing::fair_relation_oracle(ts_to_ats(left), ts_to_ats(right)).contains(0, 0));
    EXPECT_TRUE(fairsim(left, right).contains(0, 0));
    EXPECT_TRUE(fairaltsim(ts_to_ats(left), ts_to_ats(right)).contains(0, 0));
    EXPECT_FALSE(testing::literal_fairaltsim(ts_to_ats(left), ts_to_ats(right)).contains(0, 0));
}

TEST(Relations, AlphabetMismatchRejected)
{
    Ts other = fix3();
    other.obs = {"p", "r"};
    for (Algo a : {Algo::Basic, Algo::Game, Algo::Iterative}) EXPECT_THROW(sim(fix3(), other, a), Mismatch);
    EXPECT_THROW(fairsim(FairTs{fix3(), {0}}, FairTs{other, {0}}), Mismatch);
}

TEST(Relations, InvalidSystemRejected)
{
    Ats k = fix1();
    k.enabled2[1].clear();
    EXPECT_THROW(altsim_basic(k, fix1()), InvalidSystem);
    EXPECT_THROW(altsim_iterative(k, fix1()), InvalidSystem);
    EXPECT_THROW(altsim_game(k, fix1()), InvalidSystem);
}

} // namespace
} // namespace altref
