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

#include "altref/arena.hpp"
#include "altref/error.hpp"
#include "altref/succ_index.hpp"
#include "altref/systems.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace altref {

enum class VertexKind : std::uint8_t {
    Pair,    // <w, w'>
    Hash,    // <T, w', #>
    SetPair, // <T, T'>
    Dollar,  // <T, r', $>, or <w, w', $> in the transition-system game
    Frown,   // absorbing, lost by the simulator
    WinSink, // absorbing, won by the simulator
};

struct VertexInfo {
    VertexKind kind;
    int first = -1;  // left state or left set id
    int second = -1; // right state or right set id
};

/// Maps arena vertices back to the objects of the two systems.
struct VertexDecode {
    std::vector<VertexInfo> info;
    int left_size = 0;
    int right_size = 0;
    bool set_valued = true; // false for the transition-system fair game
    std::vector<int> pair_ids; // [w * |W'| + w'] -> vertex or -1
    int frown = -1;
    int winsink = -1;
    // Used by play_to_runs.
    std::vector<std::vector<int>> left_sets;
    std::vector<bool> label_match;
    Region left_fair_region;

    int pair_vertex(int w, int wp) const { return pair_ids[static_cast<std::size_t>(w) * right_size + wp]; }
    const VertexInfo& operator[](int v) const { return info[v]; }
};

enum class EdgeFamily : std::uint8_t {
    LeftMove,    // <w,w'> -> <Succ(w,a), w', #>
    RightMove,   // <T,w',#> -> <T, Succ'(w',a')>
    RightBranch, // <T,T'> -> <T, r', $>
    LeftBranch,  // <T,r',$> -> <r, r'>
    ToFrown,
    Escape,      // <T,r',$> -> winsink, some r in T outside the fairness region mismatches
    Unfair,      // <w,w'> -> winsink for w outside the fairness region
    SinkLoop,    // self-loops on the two sinks
    Count
};

using EdgeCounts = std::array<std::size_t, static_cast<std::size_t>(EdgeFamily::Count)>;

inline std::size_t& edge_count(EdgeCounts& c, EdgeFamily f) { return c[static_cast<std::size_t>(f)]; }
inline std::size_t edge_count(const EdgeCounts& c, EdgeFamily f) { return c[static_cast<std::size_t>(f)]; }

/// Alternating-simulation game: player 1 (the challenger) wins by reaching a
/// label-mismatched pair vertex.
struct AltSimGame {
    GameArena arena;
    VertexDecode decode;
    EdgeCounts edges{};
};

/// Fair game with priorities in {0,1,2}; player 2 (the simulator) is the even player.
struct FairGame {
    GameArena arena;
    VertexDecode decode;
    EdgeCounts edges{};
    Region z; // left states from which agent 1 can force fairness
};

// ---------------------------------------------------------------------------
// Fairness preprocessing

/// Agent-1 vertices w (ids 0..|W|-1) followed by agent-2 vertices (w,a) in
/// ascending (w,a) order; accepting = fair states.
struct FairnessArena {
    GameArena arena;
    Region accepting;
    int num_states = 0;
};

inline FairnessArena build_fairness_arena(const FairAts& fk)
{
    const Ats& k = fk.ats;
    const int n = k.num_states();
    ArenaBuilder b;
    for (int w = 0; w < n; ++w) b.add_vertex(Player::One);
    for (int w = 0; w < n; ++w) {
        for (int a : k.enabled1[w]) {
            const int v = b.add_vertex(Player::Two);
            b.add_edge(w, v);
            for (int bb : k.enabled2[w]) b.add_edge(v, k.next(w, a, bb));
        }
    }
    FairnessArena fa{std::move(b).build(), {}, n};
    fa.accepting.assign(fa.arena.num_vertices(), false);
    for (int w : fk.fair) fa.accepting[w] = true;
    return fa;
}

/// States from which agent 1 can force infinitely many visits to the fair set.
inline Region compute_fairness_region(const FairAts& fk)
{
    require_valid(fk);
    auto fa = build_fairness_arena(fk);
    auto win = solve_buchi(fa.arena, Player::One, fa.accepting).region;
    win.resize(fa.num_states);
    return win;
}

inline Region compute_fairness_region(const FairTs& ft) { return compute_fairness_region(ts_to_ats(ft)); }

// ---------------------------------------------------------------------------
// Game construction

namespace detail {

inline void check_index(const Ats& k, const SuccIndex& idx, const char* side)
{
    if (idx.num_states() != k.num_states() || idx.num_actions1() != k.num_actions1())
        throw Mismatch(std::string(side) + " successor index was not built from the " + side + " system");
    for (int w = 0; w < k.num_states(); ++w)
        for (int a : k.enabled1[w])
            if (idx.succ_of(w, a) < 0) throw Mismatch(std::string(side) + " successor index does not cover the system");
}

struct Successor {
    int vertex;
    EdgeFamily family;
};

// Shared construction of the set-valued games. Vertex ids are handed out on
// first reference and expanded in id order, so the arena holds exactly the
// vertices reachable from the pair vertices (plus the sinks). Strict mode
// allocates every vertex of the construction up front.
class SetGameConstruction {
public:
    SetGameConstruction(const Ats& k, const Ats& kp, const SuccIndex& idx, const SuccIndex& idxp,
                        const std::vector<bool>& match, const Region* z, bool strict)
        : k_(k), kp_(kp), idx_(idx), idxp_(idxp), match_(match), z_(z)
    {
        n_ = k.num_states();
        np_ = kp.num_states();
        s_ = idx.count();
        sp_ = idxp.count();
        decode_.left_size = n_;
        decode_.right_size = np_;
        decode_.pair_ids.assign(static_cast<std::size_t>(n_) * np_, -1);
        hash_.assign(static_cast<std::size_t>(s_) * np_, -1);
        setpair_.assign(static_cast<std::size_t>(s_) * sp_, -1);
        dollar_.assign(static_cast<std::size_t>(s_) * np_, -1);

        for (int w = 0; w < n_; ++w)
            for (int wp = 0; wp < np_; ++wp)
                if (!fair() || matches(w, wp)) decode_.pair_ids[pair_slot(w, wp)] = add(VertexKind::Pair, w, wp);
        if (fair()) {
            decode_.frown = add(VertexKind::Frown, -1, -1);
            decode_.winsink = add(VertexKind::WinSink, -1, -1);
        }
        if (strict) {
            for (int t = 0; t < s_; ++t)
                for (int wp = 0; wp < np_; ++wp) hash(t, wp);
            for (int t = 0; t < s_; ++t)
                for (int tp = 0; tp < sp_; ++tp) setpair(t, tp);
            for (int t = 0; t < s_; ++t)
                for (int rp = 0; rp < np_; ++rp) dollar(t, rp);
        }
    }

    void run(ArenaBuilder& b, EdgeCounts& counts)
    {
        std::vector<Successor> succ;
        for (int v = 0; v < static_cast<int>(decode_.info.size()); ++v) {
            succ.clear();
            expand(decode_.info[v], v, succ);
            std::sort(succ.begin(), succ.end(), [](const Successor& x, const Successor& y) { return x.vertex < y.vertex; });
            int last = -1;
            for (const auto& s : succ) {
                if (s.vertex == last) continue;
                last = s.vertex;
                ++edge_count(counts, s.family);
                pending_.emplace_back(v, s.vertex);
            }
        }
        for (auto o : owners_) b.add_vertex(o);
        for (auto [u, w] : pending_) b.add_edge(u, w);
    }

    VertexDecode take_decode() { return std::move(decode_); }

private:
    bool fair() const { return z_ != nullptr; }
    bool matches(int w, int wp) const { return match_[static_cast<std::size_t>(w) * np_ + wp]; }
    std::size_t pair_slot(int w, int wp) const { return static_cast<std::size_t>(w) * np_ + wp; }

    int add(VertexKind kind, int a, int b)
    {
        decode_.info.push_back({kind, a, b});
        owners_.push_back(kind == VertexKind::Hash || kind == VertexKind::Dollar ? Player::Two : Player::One);
        return static_cast<int>(decode_.info.size()) - 1;
    }
    int lookup(std::vector<int>& table, std::size_t slot, VertexKind kind, int a, int b)
    {
        if (table[slot] < 0) table[slot] = add(kind, a, b);
        return table[slot];
    }
    int hash(int t, int wp) { return lookup(hash_, static_cast<std::size_t>(t) * np_ + wp, VertexKind::Hash, t, wp); }
    int setpair(int t, int tp)
    {
        return lookup(setpair_, static_cast<std::size_t>(t) * sp_ + tp, VertexKind::SetPair, t, tp);
    }
    int dollar(int t, int rp) { return lookup(dollar_, static_cast<std::size_t>(t) * np_ + rp, VertexKind::Dollar, t, rp); }

    void expand(VertexInfo vi, int v, std::vector<Successor>& out)
    {
        switch (vi.kind) {
        case VertexKind::Pair:
            if (fair() && !(*z_)[vi.first]) {
                out.push_back({decode_.winsink, EdgeFamily::Unfair});
                return;
            }
            for (int a : k_.enabled1[vi.first]) out.push_back({hash(idx_.succ_of(vi.first, a), vi.second), EdgeFamily::LeftMove});
            return;
        case VertexKind::Hash:
            for (int ap : kp_.enabled1[vi.second])
                out.push_back({setpair(vi.first, idxp_.succ_of(vi.second, ap)), EdgeFamily::RightMove});
            return;
        case VertexKind::SetPair:
            for (int rp : idxp_.members(vi.second)) out.push_back({dollar(vi.first, rp), EdgeFamily::RightBranch});
            return;
        case VertexKind::Dollar: {
            const int rp = vi.second;
            if (!fair()) {
                for (int r : idx_.members(vi.first)) out.push_back({decode_.pair_vertex(r, rp), EdgeFamily::LeftBranch});
                return;
            }
            bool escape = false;
            for (int r : idx_.members(vi.first)) {
                if (matches(r, rp))
                    out.push_back({decode_.pair_vertex(r, rp), EdgeFamily::LeftBranch});
                else if (!(*z_)[r])
                    escape = true;
            }
            if (escape)
                out.push_back({decode_.winsink, EdgeFamily::Escape});
            else if (out.empty())
                out.push_back({decode_.frown, EdgeFamily::ToFrown});
            return;
        }
        case VertexKind::Frown:
        case VertexKind::WinSink:
            out.push_back({v, EdgeFamily::SinkLoop});
            return;
        }
    }

    const Ats& k_;
    const Ats& kp_;
    const SuccIndex& idx_;
    const SuccIndex& idxp_;
    const std::vector<bool>& match_;
    const Region* z_;
    int n_ = 0, np_ = 0, s_ = 0, sp_ = 0;
    VertexDecode decode_;
    std::vector<Player> owners_;
    std::vector<int> hash_, setpair_, dollar_;
    std::vector<std::pair<int, int>> pending_;
};

inline std::vector<std::vector<int>> copy_sets(const SuccIndex& idx)
{
    std::vector<std::vector<int>> sets(idx.count());
    for (int t = 0; t < idx.count(); ++t) {
        auto m = idx.members(t);
        sets[t].assign(m.begin(), m.end());
    }
    return sets;
}

inline std::vector<std::uint8_t> pair_priorities(const VertexDecode& d, const Region& fair_left, const Region& fair_right)
{
    std::vector<std::uint8_t> prio(d.info.size(), 2);
    for (std::size_t v = 0; v < d.info.size(); ++v) {
        const auto& vi = d.info[v];
        if (vi.kind == VertexKind::Pair) {
            if (fair_right[vi.second])
                prio[v] = 0;
            else if (fair_left[vi.first])
                prio[v] = 1;
        } else if (vi.kind == VertexKind::Frown) {
            prio[v] = 1;
        }
    }
    return prio;
}

} // namespace detail

/// Builds the alternating-simulation game. Player 1 reaches the target set
/// (label-mismatched pairs) iff the right system fails to simulate the left.
/// With `strict`, every <T,w',#>, <T,T'> and <T,r',$> vertex is created even
/// if no pair vertex reaches it.
inline AltSimGame build_altsim_game(const Ats& k, const Ats& kp, const SuccIndex& idx, const SuccIndex& idxp,
                                    bool strict = false)
{
    const auto match = label_match_table(k, kp);
    detail::check_index(k, idx, "left");
    detail::check_index(kp, idxp, "right");
    detail::SetGameConstruction c(k, kp, idx, idxp, match, nullptr, strict);
    ArenaBuilder b;
    AltSimGame g;
    c.run(b, g.edges);
    g.decode = c.take_decode();
    g.decode.left_sets = detail::copy_sets(idx);
    g.decode.label_match = match;
    Region target(g.decode.info.size(), false);
    for (std::size_t v = 0; v < target.size(); ++v) {
        const auto& vi = g.decode.info[v];
        target[v] = vi.kind == VertexKind::Pair && !match[static_cast<std::size_t>(vi.first) * kp.num_states() + vi.second];
    }
    g.arena = std::move(b).build().with_target(std::move(target));
    return g;
}

/// Builds the fair alternating-simulation game. Pair vertices exist only for
/// label-matching pairs. A pair whose left state lies outside `z` leads to the
/// winning sink, as does a <T,r',$> vertex where the simulator can pick a
/// mismatching r outside `z`. Otherwise a <T,r',$> vertex without a matching
/// r leads to the frown sink.
inline FairGame build_fairaltsim_game(const FairAts& fk, const FairAts& fkp, const SuccIndex& idx,
                                      const SuccIndex& idxp, const Region& z, bool strict = false)
{
    const Ats& k = fk.ats;
    const Ats& kp = fkp.ats;
    if (static_cast<int>(z.size()) != k.num_states()) throw Mismatch("fairness region does not match the left system");
    const auto match = label_match_table(k, kp);
    detail::check_index(k, idx, "left");
    detail::check_index(kp, idxp, "right");
    detail::SetGameConstruction c(k, kp, idx, idxp, match, &z, strict);
    ArenaBuilder b;
    FairGame g;
    g.z = z;
    c.run(b, g.edges);
    g.decode = c.take_decode();
    g.decode.left_sets = detail::copy_sets(idx);
    g.decode.label_match = match;
    g.decode.left_fair_region = z;
    auto prio = detail::pair_priorities(g.decode, fair_mask(fk.fair, k.num_states()), fair_mask(fkp.fair, kp.num_states()));
    g.arena = std::move(b).build().with_priorities(std::move(prio));
    return g;
}

inline FairGame build_fairaltsim_game(const FairAts& fk, const FairAts& fkp, bool strict = false)
{
    return build_fairaltsim_game(fk, fkp, build_succ_index(fk.ats), build_succ_index(fkp.ats),
                                 compute_fairness_region(fk), strict);
}

/// Fair-simulation game over transition systems: pair vertices <w1,w2> for
/// label-matching pairs and player-2 vertices <w1',w2,$> after the left move.
/// Sinks are handled as in the alternating game.
inline FairGame build_fairsim_game(const FairTs& ft, const FairTs& ftp, const Region& z, bool strict = false)
{
    const Ts& k = ft.ts;
    const Ts& kp = ftp.ts;
    const int n = k.num_states();
    const int np = kp.num_states();
    if (static_cast<int>(z.size()) != n) throw Mismatch("fairness region does not match the left system");
    const auto match = label_match_table(k, kp);
    auto matches = [&](int w, int wp) { return match[static_cast<std::size_t>(w) * np + wp]; };

    FairGame g;
    g.z = z;
    VertexDecode& d = g.decode;
    d.left_size = n;
    d.right_size = np;
    d.set_valued = false;
    d.pair_ids.assign(static_cast<std::size_t>(n) * np, -1);
    d.label_match = match;
    d.left_fair_region = z;
    std::vector<Player> owners;
    auto add = [&](VertexKind kind, int a, int b) {
        d.info.push_back({kind, a, b});
        owners.push_back(kind == VertexKind::Dollar ? Player::Two : Player::One);
        return static_cast<int>(d.info.size()) - 1;
    };
    for (int w = 0; w < n; ++w)
        for (int wp = 0; wp < np; ++wp)
            if (matches(w, wp)) d.pair_ids[static_cast<std::size_t>(w) * np + wp] = add(VertexKind::Pair, w, wp);
    d.frown = add(VertexKind::Frown, -1, -1);
    d.winsink = add(VertexKind::WinSink, -1, -1);
    std::vector<int> dollar(static_cast<std::size_t>(n) * np, -1);
    auto dollar_vertex = [&](int w, int wp) {
        int& id = dollar[static_cast<std::size_t>(w) * np + wp];
        if (id < 0) id = add(VertexKind::Dollar, w, wp);
        return id;
    };
    if (strict)
        for (int w = 0; w < n; ++w)
            for (int wp = 0; wp < np; ++wp) dollar_vertex(w, wp);

    std::vector<std::pair<int, int>> edges;
    auto emit = [&](int u, int v, EdgeFamily f) {
        edges.emplace_back(u, v);
        ++edge_count(g.edges, f);
    };
    for (int v = 0; v < static_cast<int>(d.info.size()); ++v) {
        const VertexInfo vi = d.info[v];
        switch (vi.kind) {
        case VertexKind::Pair:
            if (!z[vi.first]) {
                emit(v, d.winsink, EdgeFamily::Unfair);
                break;
            }
            for (int w1 : k.succ[vi.first]) emit(v, dollar_vertex(w1, vi.second), EdgeFamily::LeftMove);
            break;
        case VertexKind::Dollar: {
            bool any = false;
            for (int w2 : kp.succ[vi.second])
                if (matches(vi.first, w2)) {
                    emit(v, d.pair_vertex(vi.first, w2), EdgeFamily::LeftBranch);
                    any = true;
                }
            if (!any) {
                if (z[vi.first])
                    emit(v, d.frown, EdgeFamily::ToFrown);
                else
                    emit(v, d.winsink, EdgeFamily::Escape);
            }
            break;
        }
        default:
            emit(v, v, EdgeFamily::SinkLoop);
            break;
        }
    }
    ArenaBuilder b;
    for (auto o : owners) b.add_vertex(o);
    for (auto [u, v] : edges) b.add_edge(u, v);
    auto prio = detail::pair_priorities(d, fair_mask(ft.fair, n), fair_mask(ftp.fair, np));
    g.arena = std::move(b).build().with_priorities(std::move(prio));
    return g;
}

inline FairGame build_fairsim_game(const FairTs& ft, const FairTs& ftp, bool strict = false)
{
    return build_fairsim_game(ft, ftp, compute_fairness_region(ft), strict);
}

// ---------------------------------------------------------------------------
// Plays

struct PlayRuns {
    std::vector<int> left;
    std::vector<int> right;
    bool reached_frown = false;
    bool reached_winsink = false;
};

/// Reads the two runs off a finite play that starts at a pair vertex. After a
/// sink entered from <T,r',$>, the last left state is the lowest member of T
/// that mismatches r' (for the winning sink: the lowest such member outside
/// the fairness region).
inline PlayRuns play_to_runs(const GameArena& arena, const VertexDecode& d, const std::vector<int>& play)
{
    if (play.empty()) throw std::invalid_argument("empty play");
    for (int v : play)
        if (v < 0 || v >= arena.num_vertices()) throw std::invalid_argument("play vertex out of range");
    if (d.info[play[0]].kind != VertexKind::Pair) throw std::invalid_argument("play does not start at a pair vertex");
    for (std::size_t i = 1; i < play.size(); ++i)
        if (!arena.has_edge(play[i - 1], play[i]))
            throw std::invalid_argument("play is not a path: no edge " + std::to_string(play[i - 1]) + " -> " +
                                        std::to_string(play[i]));
    PlayRuns runs;
    auto mismatched = [&](int r, int rp) { return !d.label_match[static_cast<std::size_t>(r) * d.right_size + rp]; };
    for (std::size_t i = 0; i < play.size(); ++i) {
        const VertexInfo& vi = d.info[play[i]];
        if (vi.kind == VertexKind::Pair) {
            runs.left.push_back(vi.first);
            runs.right.push_back(vi.second);
            continue;
        }
        const bool frown = vi.kind == VertexKind::Frown;
        if (!frown && vi.kind != VertexKind::WinSink) continue;
        if (frown ? runs.reached_frown : runs.reached_winsink) continue;
        (frown ? runs.reached_frown : runs.reached_winsink) = true;
        const VertexInfo& prev = d.info[play[i - 1]];
        if (prev.kind != VertexKind::Dollar) continue;
        if (!d.set_valued) {
            runs.left.push_back(prev.first);
            continue;
        }
        for (int r : d.left_sets[prev.first]) {
            if (!mismatched(r, prev.second)) continue;
            if (!frown && d.left_fair_region[r]) continue;
            runs.left.push_back(r);
            runs.right.push_back(prev.second);
            break;
        }
    }
    return runs;
}

inline PlayRuns play_to_runs(const AltSimGame& g, const std::vector<int>& play)
{
    return play_to_runs(g.arena, g.decode, play);
}
inline PlayRuns play_to_runs(const FairGame& g, const std::vector<int>& play)
{
    return play_to_runs(g.arena, g.decode, play);
}

} // namespace altref
