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

#pragma once

// Independent reference implementations and random instance helpers shared
// by the unit tests and the acceptance binary.

#include "altref/altref.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace altref::testing {

#ifdef ALTREF_FIXTURES
inline std::string fixture_text(const std::string& name)
{
    std::ifstream in(std::string(ALTREF_FIXTURES) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
inline std::string fixture_path(const std::string& name) { return std::string(ALTREF_FIXTURES) + "/" + name; }
#endif

// Fixtures built in code so the acceptance binary needs no files.
inline Ats fix1()
{
    Ats k = Ats::with_shape(2, 2, 2, 2);
    k.obs = {"p", "q"};
    k.actions1 = {"a", "b"};
    k.actions2 = {"x", "y"};
    k.label = {0, 1};
    k.enabled1 = {{0, 1}, {0}};
    k.enabled2 = {{0, 1}, {0}};
    k.delta[k.cell(0, 0, 0)] = 0;
    k.delta[k.cell(0, 0, 1)] = 1;
    k.delta[k.cell(0, 1, 0)] = 1;
    k.delta[k.cell(0, 1, 1)] = 1;
    k.delta[k.cell(1, 0, 0)] = 0;
    return k;
}

inline Ts make_ts(int n, std::vector<int> labels, std::vector<std::vector<int>> succ)
{
    Ts t;
    t.obs = {"p", "q"};
    for (int i = 0; i < n; ++i) t.states.push_back("s" + std::to_string(i));
    t.label = std::move(labels);
    t.succ = std::move(succ);
    return t;
}

inline Ts fix2() { return make_ts(2, {0, 1}, {{1}, {1}}); }
inline Ts fix3() { return make_ts(1, {0}, {{0}}); }
inline FairTs fix4() { return FairTs{fix2(), {1}}; }

// ---------------------------------------------------------------------------
// Random instances

struct Dims {
    int max_states = 5;
    int max_actions1 = 3;
    int max_actions2 = 3;
    int max_obs = 3;
};

inline int draw(RandomStream& rng, int lo, int hi) { return lo + rng.below(hi - lo + 1); }

inline Ats random_ats_with_obs(RandomStream& rng, const Dims& d, int n_obs)
{
    RandomSpec spec{draw(rng, 1, d.max_states), draw(rng, 1, d.max_actions1), draw(rng, 1, d.max_actions2), n_obs,
                    0.0, rng.bits()};
    return random_ats(spec);
}

inline std::pair<Ats, Ats> random_ats_pair(RandomStream& rng, const Dims& d = {})
{
    const int n_obs = draw(rng, 1, d.max_obs);
    Ats k = random_ats_with_obs(rng, d, n_obs);
    Ats kp = random_ats_with_obs(rng, d, n_obs);
    return {std::move(k), std::move(kp)};
}

inline Ts random_ts_with_obs(RandomStream& rng, int max_states, int n_obs)
{
    return random_ts({draw(rng, 1, max_states), 1, 1, n_obs, 0.0, rng.bits()});
}

inline std::vector<int> random_subset(RandomStream& rng, int n, double density)
{
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(density)) out.push_back(i);
    return out;
}

inline std::pair<FairAts, FairAts> random_fair_ats_pair(RandomStream& rng, const Dims& d = {})
{
    auto [k, kp] = random_ats_pair(rng, d);
    const double density = rng.bernoulli(0.5) ? 0.5 : 0.25;
    auto f = random_subset(rng, k.num_states(), density);
    auto fp = random_subset(rng, kp.num_states(), density);
    return {FairAts{std::move(k), std::move(f)}, FairAts{std::move(kp), std::move(fp)}};
}

inline std::pair<FairTs, FairTs> random_fair_ts_pair(RandomStream& rng, int max_states = 5, int max_obs = 2)
{
    const int n_obs = draw(rng, 1, max_obs);
    Ts t = random_ts_with_obs(rng, max_states, n_obs);
    Ts tp = random_ts_with_obs(rng, max_states, n_obs);
    const double density = rng.bernoulli(0.5) ? 0.5 : 0.25;
    auto f = random_subset(rng, t.num_states(), density);
    auto fp = random_subset(rng, tp.num_states(), density);
    return {FairTs{std::move(t), std::move(f)}, FairTs{std::move(tp), std::move(fp)}};
}

/// Random arena: every vertex gets 1..max_out successors, random owner and,
/// when n_prio > 0, a priority in 0..n_prio-1.
inline GameArena random_arena(RandomStream& rng, int n, int max_out, int n_prio)
{
    ArenaBuilder b;
    for (int v = 0; v < n; ++v) b.add_vertex(rng.bernoulli(0.5) ? Player::One : Player::Two);
    for (int v = 0; v < n; ++v) {
        const int deg = draw(rng, 1, max_out);
        for (int i = 0; i < deg; ++i) b.add_edge(v, rng.below(n));
    }
    GameArena g = std::move(b).build();
    if (n_prio > 0) {
        std::vector<std::uint8_t> p(n);
        for (auto& x : p) x = static_cast<std::uint8_t>(rng.below(n_prio));
        g = g.with_priorities(std::move(p));
    }
    return g;
}

// ---------------------------------------------------------------------------
// Oracles

/// Successor sets of every enabled (w,a) by direct enumeration, keyed by
/// their position in the lexicographic order of characteristic vectors.
inline std::vector<std::vector<int>> brute_force_succ_sets(const Ats& k)
{
    std::set<std::vector<char>> bits;
    for (int w = 0; w < k.num_states(); ++w)
        for (int a : k.enabled1[w]) {
            std::vector<char> v(k.num_states(), 0);
            for (int b : k.enabled2[w]) v[k.next(w, a, b)] = 1;
            bits.insert(v);
        }
    std::vector<std::vector<int>> sets;
    for (const auto& v : bits) {
        std::vector<int> m;
        for (int i = 0; i < static_cast<int>(v.size()); ++i)
            if (v[i]) m.push_back(i);
        sets.push_back(m);
    }
    return sets;
}

inline std::vector<int> succ_set(const Ats& k, int w, int a)
{
    std::set<int> s;
    for (int b : k.enabled2[w]) s.insert(k.next(w, a, b));
    return {s.begin(), s.end()};
}

/// Least fixpoint X = target ∪ cpre_player(X), by naive iteration.
inline Region naive_attractor(const GameArena& g, Player player, const Region& target)
{
    Region x = target;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (x[v]) continue;
            bool any = false, all = true;
            for (int w : g.out(v)) {
                any = any || x[w];
                all = all && x[w];
            }
            if (g.owner(v) == player ? any : all) {
                x[v] = true;
                changed = true;
            }
        }
    }
    return x;
}

/// Fair alternating simulation straight from the definition, as a parity game
/// without any fairness preprocessing. Rounds mirror the quantifier order
/// (challenger picks a, simulator a', challenger b', simulator b). After a
/// label mismatch the play moves into a copy of the left system where the
/// challenger now needs the left run to be fair (agent 1) against the
/// simulator resolving agent 2; an unfair left run excuses the mismatch.
/// Solved with the recursive solver; player 2 is the even player.
inline SimRelation fair_relation_oracle(const FairAts& fk, const FairAts& fkp)
{
    const Ats& k = fk.ats;
    const Ats& kp = fkp.ats;
    const int n = k.num_states();
    const int np = kp.num_states();
    const auto match = label_match_table(k, kp);
    const auto fair = fair_mask(fk.fair, n);
    const auto fairp = fair_mask(fkp.fair, np);

    ArenaBuilder b;
    std::vector<std::uint8_t> prio;
    auto add = [&](Player p, int pr) {
        prio.push_back(static_cast<std::uint8_t>(pr));
        return b.add_vertex(p);
    };
    // Continuation copy of the left system.
    std::vector<int> cont(n);
    for (int w = 0; w < n; ++w) cont[w] = add(Player::One, fair[w] ? 1 : 2);
    for (int w = 0; w < n; ++w)
        for (int a : k.enabled1[w]) {
            const int v = add(Player::Two, 2);
            b.add_edge(cont[w], v);
            for (int bb : k.enabled2[w]) b.add_edge(v, cont[k.next(w, a, bb)]);
        }
    std::map<std::pair<int, int>, int> pair_ids;
    for (int w = 0; w < n; ++w)
        for (int wp = 0; wp < np; ++wp)
            if (match[static_cast<std::size_t>(w) * np + wp])
                pair_ids[{w, wp}] = add(Player::One, fairp[wp] ? 0 : (fair[w] ? 1 : 2));
    for (const auto& [key, pv] : pair_ids) {
        const auto [w, wp] = key;
        for (int a : k.enabled1[w]) {
            const int va = add(Player::Two, 2);
            b.add_edge(pv, va);
            for (int ap : kp.enabled1[wp]) {
                const int vap = add(Player::One, 2);
                b.add_edge(va, vap);
                for (int bp : kp.enabled2[wp]) {
                    const int vbp = add(Player::Two, 2);
                    b.add_edge(vap, vbp);
                    const int rp = kp.next(wp, ap, bp);
                    for (int bb : k.enabled2[w]) {
                        const int r = k.next(w, a, bb);
                        auto it = pair_ids.find({r, rp});
                        b.add_edge(vbp, it != pair_ids.end() ? it->second : cont[r]);
                    }
                }
            }
        }
    }
    GameArena g = std::move(b).build().with_priorities(std::move(prio));
    auto res = solve_parity_zielonka(g, Player::Two);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [key, pv] : pair_ids)
        if (res.win_even[pv]) pairs.push_back(key);
    return SimRelation(n, np, std::move(pairs));
}

/// The fair game without the escape edges: a <T,r',$> vertex with no
/// label-matching member of T goes to the frown sink unconditionally.
inline SimRelation literal_fairaltsim(const FairAts& fk, const FairAts& fkp)
{
    FairGame g = build_fairaltsim_game(fk, fkp);
    const auto& d = g.decode;
    ArenaBuilder b;
    for (int v = 0; v < g.arena.num_vertices(); ++v) b.add_vertex(g.arena.owner(v));
    for (int v = 0; v < g.arena.num_vertices(); ++v) {
        if (d[v].kind != VertexKind::Dollar) {
            for (int w : g.arena.out(v)) b.add_edge(v, w);
            continue;
        }
        bool matched = false;
        for (int w : g.arena.out(v))
            if (w != d.winsink) {
                b.add_edge(v, w);
                matched = matched || w != d.frown;
            }
        if (!matched) b.add_edge(v, d.frown);
    }
    GameArena lit = std::move(b).build().with_priorities(g.arena.priorities());
    return relation_from_winning(d, solve_parity3(lit, Player::Two).win_even);
}

/// All label-matching pairs.
template <class L, class R>
SimRelation matching_pairs(const L& k, const R& kp)
{
    return SimRelation::from_matrix(k.num_states(), kp.num_states(), label_match_table(k, kp));
}

inline FairAts with_all_fair(const Ats& k) { return FairAts{k, all_states(k.num_states())}; }
inline FairAts with_no_fair(const Ats& k) { return FairAts{k, {}}; }

// ---------------------------------------------------------------------------
// Plays under fixed memoryless choices

/// The lasso traced from `start` when every vertex v moves to choice[v].
inline Lasso play_lasso(const std::vector<int>& choice, int start)
{
    std::vector<int> path;
    std::map<int, std::size_t> pos;
    int v = start;
    while (!pos.count(v)) {
        pos[v] = path.size();
        path.push_back(v);
        v = choice[v];
    }
    Lasso l;
    l.stem.assign(path.begin(), path.begin() + static_cast<long>(pos[v]));
    l.cycle.assign(path.begin() + static_cast<long>(pos[v]), path.end());
    return l;
}

/// Uniformly random successor at every vertex, overridden by `fixed` where it
/// has a choice.
inline std::vector<int> random_choices(RandomStream& rng, const GameArena& g, const MemorylessStrategy* fixed = nullptr)
{
    std::vector<int> c(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) {
        auto out = g.out(v);
        c[v] = out[rng.below(static_cast<int>(out.size()))];
        if (fixed && fixed->choice[v] >= 0) c[v] = fixed->choice[v];
    }
    return c;
}

/// Checks the correspondence between the parity condition and the decoded
/// runs on a lasso that avoids both sinks: labels agree pointwise, a play
/// meeting the parity condition with a fair left cycle has a fair right
/// cycle, and a play failing it has a fair left cycle and an unfair right one.
/// Returns an empty string when all hold.
inline std::string check_run_correspondence(const FairGame& g, const std::vector<bool>& fair_left,
                                            const std::vector<bool>& fair_right, const Lasso& lasso)
{
    const auto& d = g.decode;
    int min_prio = 3;
    bool left_fair = false, right_fair = false;
    for (int v : lasso.cycle) {
        const auto& vi = d[v];
        if (vi.kind == VertexKind::Frown || vi.kind == VertexKind::WinSink) return {};
        min_prio = std::min(min_prio, g.arena.priority(v));
        if (vi.kind != VertexKind::Pair) continue;
        left_fair = left_fair || fair_left[vi.first];
        right_fair = right_fair || fair_right[vi.second];
    }
    std::vector<int> play = lasso.stem;
    play.insert(play.end(), lasso.cycle.begin(), lasso.cycle.end());
    const auto runs = play_to_runs(g, play);
    for (std::size_t i = 0; i < runs.left.size(); ++i)
        if (!d.label_match[static_cast<std::size_t>(runs.left[i]) * d.right_size + runs.right[i]])
            return "decoded runs disagree on labels at step " + std::to_string(i);
    const bool parity_ok = min_prio % 2 == 0;
    if (parity_ok && left_fair && !right_fair) return "parity met but fair left cycle matched by unfair right cycle";
    if (!parity_ok && !(left_fair && !right_fair)) return "parity failed without a fair left / unfair right cycle";
    return {};
}

} // namespace altref::testing
