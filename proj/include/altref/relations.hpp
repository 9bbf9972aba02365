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
#include "altref/reductions.hpp"
#include "altref/succ_index.hpp"
#include "altref/systems.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace altref {

enum class Algo { Basic, Game, Iterative };

// ---------------------------------------------------------------------------
// Fixpoint oracle

/// Maximum alternating simulation by naive refinement: start from the
/// label-matching pairs and delete (w,w') while some a in P1(w) admits no
/// a' in P1'(w') such that every b' in P2'(w') is answered by some b in P2(w)
/// with related successors.
inline SimRelation altsim_basic(const Ats& k, const Ats& kp)
{
    require_valid(k);
    require_valid(kp);
    const int n = k.num_states();
    const int np = kp.num_states();
    std::vector<bool> rel = label_match_table(k, kp);
    auto related = [&](int w, int wp) { return rel[static_cast<std::size_t>(w) * np + wp]; };

    auto survives = [&](int w, int wp) {
        for (int a : k.enabled1[w]) {
            bool answered = false;
            for (int ap : kp.enabled1[wp]) {
                bool all_bp = true;
                for (int bp : kp.enabled2[wp]) {
                    const int rp = kp.next(wp, ap, bp);
                    bool some_b = false;
                    for (int b : k.enabled2[w])
                        if (related(k.next(w, a, b), rp)) {
                            some_b = true;
                            break;
                        }
                    if (!some_b) {
                        all_bp = false;
                        break;
                    }
                }
                if (all_bp) {
                    answered = true;
                    break;
                }
            }
            if (!answered) return false;
        }
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int w = 0; w < n; ++w)
            for (int wp = 0; wp < np; ++wp)
                if (related(w, wp) && !survives(w, wp)) {
                    rel[static_cast<std::size_t>(w) * np + wp] = false;
                    changed = true;
                }
    }
    return SimRelation::from_matrix(n, np, rel);
}

// ---------------------------------------------------------------------------
// Game route

inline SimRelation relation_from_winning(const VertexDecode& d, const Region& win2)
{
    std::vector<std::pair<int, int>> pairs;
    for (int w = 0; w < d.left_size; ++w)
        for (int wp = 0; wp < d.right_size; ++wp) {
            const int v = d.pair_vertex(w, wp);
            if (v >= 0 && win2[v] && d.label_match[static_cast<std::size_t>(w) * d.right_size + wp])
                pairs.emplace_back(w, wp);
        }
    return SimRelation(d.left_size, d.right_size, std::move(pairs));
}

/// Alternating simulation as the player-2 region of the reachability game.
inline SimRelation altsim_game(const Ats& k, const Ats& kp, bool strict = false)
{
    require_valid(k);
    require_valid(kp);
    auto g = build_altsim_game(k, kp, build_succ_index(k), build_succ_index(kp), strict);
    return relation_from_winning(g.decode, solve_reachability(g.arena).win2);
}

/// Fair alternating simulation (weak and strong coincide): player-2 region
/// of the three-priority parity game, player 2 being the even player.
inline SimRelation fairaltsim(const FairAts& fk, const FairAts& fkp, bool strict = false)
{
    require_valid(fk);
    require_valid(fkp);
    auto g = build_fairaltsim_game(fk, fkp, strict);
    return relation_from_winning(g.decode, solve_parity3(g.arena, Player::Two).win_even);
}

/// Fair simulation between transition systems via the specialised game.
inline SimRelation fairsim(const FairTs& ft, const FairTs& ftp, bool strict = false)
{
    require_valid(ft);
    require_valid(ftp);
    auto g = build_fairsim_game(ft, ftp, strict);
    return relation_from_winning(g.decode, solve_parity3(g.arena, Player::Two).win_even);
}

// ---------------------------------------------------------------------------
// Relation graph

/// Bipartite graph over states (ids 0..|W|-1) and successor sets (ids
/// |W|+T) with edges w -> Succ(w,a) and T -> r for r in T.
class RelationGraph {
public:
    int num_states() const { return num_states_; }
    int num_sets() const { return num_sets_; }
    int num_vertices() const { return num_states_ + num_sets_; }
    int set_vertex(int t) const { return num_states_ + t; }
    std::size_t num_edges() const { return out_.size(); }

    std::span<const int> post(int v) const { return {out_.data() + out_off_[v], out_.data() + out_off_[v + 1]}; }
    std::span<const int> pre(int v) const { return {in_.data() + in_off_[v], in_.data() + in_off_[v + 1]}; }

    /// Edges leaving states (state -> set) and leaving sets (set -> state).
    std::size_t state_edges() const { return static_cast<std::size_t>(out_off_[num_states_]); }
    std::size_t set_edges() const { return out_.size() - state_edges(); }

    std::size_t cells() const { return out_off_.size() + out_.size() + in_off_.size() + in_.size(); }

    friend RelationGraph build_relation_graph(const Ats& k, const SuccIndex& idx);

private:
    int num_states_ = 0;
    int num_sets_ = 0;
    std::vector<int> out_off_, out_, in_off_, in_;
};

inline RelationGraph build_relation_graph(const Ats& k, const SuccIndex& idx)
{
    detail::check_index(k, idx, "system's");
    RelationGraph g;
    g.num_states_ = k.num_states();
    g.num_sets_ = idx.count();
    const int nv = g.num_vertices();
    std::vector<std::vector<int>> out(nv);
    for (int w = 0; w < g.num_states_; ++w) {
        for (int a : k.enabled1[w]) out[w].push_back(g.set_vertex(idx.succ_of(w, a)));
        std::sort(out[w].begin(), out[w].end());
        out[w].erase(std::unique(out[w].begin(), out[w].end()), out[w].end());
    }
    for (int t = 0; t < g.num_sets_; ++t) {
        auto m = idx.members(t);
        out[g.set_vertex(t)].assign(m.begin(), m.end());
    }
    std::vector<std::vector<int>> in(nv);
    for (int v = 0; v < nv; ++v)
        for (int w : out[v]) in[w].push_back(v);
    auto flatten = [](const std::vector<std::vector<int>>& lists, std::vector<int>& off, std::vector<int>& flat) {
        off.assign(1, 0);
        for (const auto& l : lists) {
            flat.insert(flat.end(), l.begin(), l.end());
            off.push_back(static_cast<int>(flat.size()));
        }
    };
    flatten(out, g.out_off_, g.out_);
    flatten(in, g.in_off_, g.in_);
    return g;
}

// ---------------------------------------------------------------------------
// Iterative pruning

struct IterativeOptions {
    bool assert_invariants = false;
};

/// Loop counters of the iterative engine next to their worst-case ceilings.
struct IterativeStats {
    std::size_t while_iterations = 0;
    std::size_t succ_outer = 0;   // w' with remove(w') non-empty
    std::size_t succ_pairs = 0;   // (T', T) pairs examined
    std::size_t succ_updates = 0; // count(s', T) decrements
    std::size_t prune_outer = 0;  // T with removeS(T) non-empty
    std::size_t prune_pairs = 0;  // (w, w') pairs examined
    std::size_t prune_updates = 0; // countS(D, w') decrements

    std::size_t while_ceiling = 0;
    std::size_t succ_outer_ceiling = 0;
    std::size_t succ_pairs_ceiling = 0;
    std::size_t succ_updates_ceiling = 0;
    std::size_t prune_outer_ceiling = 0;
    std::size_t prune_pairs_ceiling = 0;
    std::size_t prune_updates_ceiling = 0;

    std::size_t peak_cells = 0;      // largest number of storage cells held at once
    std::size_t invariant_checks = 0;

    bool within_ceilings() const
    {
        return while_iterations <= while_ceiling && succ_outer <= succ_outer_ceiling &&
               succ_pairs <= succ_pairs_ceiling && succ_updates <= succ_updates_ceiling &&
               prune_outer <= prune_outer_ceiling && prune_pairs <= prune_pairs_ceiling &&
               prune_updates <= prune_updates_ceiling;
    }
};

namespace detail {

// Set of small integers with O(1) duplicate-free insertion.
class FlaggedList {
public:
    explicit FlaggedList(int universe = 0) : flag_(universe, 0) {}
    void insert(int x)
    {
        if (!flag_[x]) {
            flag_[x] = 1;
            items_.push_back(x);
        }
    }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const std::vector<int>& items() const { return items_; }
    void clear()
    {
        for (int x : items_) flag_[x] = 0;
        items_.clear();
    }
    bool contains(int x) const { return flag_[x] != 0; }

private:
    std::vector<char> flag_;
    std::vector<int> items_;
};

class IterativeEngine {
public:
    IterativeEngine(const Ats& k, const Ats& kp, const IterativeOptions& opt)
        : k_(k), kp_(kp), opt_(opt), idx_(build_succ_index(k)), idxp_(build_succ_index(kp)),
          gk_(build_relation_graph(k, idx_)), gkp_(build_relation_graph(kp, idxp_))
    {
        n_ = k.num_states();
        np_ = kp.num_states();
        s_ = idx_.count();
        sp_ = idxp_.count();
        if (opt_.assert_invariants) oracle_ = altsim_basic(k, kp);
    }

    SimRelation run(IterativeStats* stats)
    {
        IterativeStats local;
        IterativeStats& st = stats ? *stats : local;
        st = IterativeStats{};
        set_ceilings(st);

        // Step 1: sim by label equality, simS all true.
        sim_ = label_match_table(k_, kp_);
        sim_s_.assign(static_cast<std::size_t>(sp_) * s_, true);
        // Step 2: count(w',T) = |Post(w')|, countS(T,w') = |T ∩ invsim(w')|.
        count_.assign(static_cast<std::size_t>(np_) * s_, 0);
        for (int wp = 0; wp < np_; ++wp)
            for (int t = 0; t < s_; ++t) count_[cidx(wp, t)] = static_cast<int>(gkp_.post(wp).size());
        count_s_.assign(static_cast<std::size_t>(s_) * np_, 0);
        for (int t = 0; t < s_; ++t)
            for (int wp = 0; wp < np_; ++wp) {
                int c = 0;
                for (int w : idx_.members(t)) c += sim(w, wp);
                count_s_[csidx(t, wp)] = c;
            }
        // Step 3: remove(w') = sets without any member simulated by w'; removeS empty.
        remove_.assign(np_, FlaggedList(s_));
        remove_s_.assign(s_, FlaggedList(np_));
        for (int wp = 0; wp < np_; ++wp)
            for (int t = 0; t < s_; ++t)
                if (count_s_[csidx(t, wp)] == 0) remove_[wp].insert(t);

        const std::size_t fixed_cells = sim_.size() + sim_s_.size() + count_.size() + count_s_.size() +
                                        static_cast<std::size_t>(np_) * s_ * 2 + gk_.cells() + gkp_.cells() +
                                        idx_.cells() + idxp_.cells();
        auto track_peak = [&] {
            std::size_t pending = 0;
            for (const auto& r : remove_) pending += r.size();
            for (const auto& r : remove_s_) pending += r.size();
            st.peak_cells = std::max(st.peak_cells, fixed_cells + pending);
        };
        track_peak();

        // Step 4.
        while (any_pending()) {
            ++st.while_iterations;
            if (opt_.assert_invariants) check_loop_top(st);
            prev_sim_ = sim_;
            prev_sim_s_ = sim_s_;
            prune_sim_str_succ(st);
            track_peak();
            if (opt_.assert_invariants) check_remove_s(st);
            prune_sim_str(st);
            track_peak();
            if (opt_.assert_invariants) check_remove(st);
        }
        if (opt_.assert_invariants) check_loop_top(st);
        return SimRelation::from_matrix(n_, np_, sim_);
    }

private:
    std::size_t cidx(int wp, int t) const { return static_cast<std::size_t>(wp) * s_ + t; }
    std::size_t csidx(int t, int wp) const { return static_cast<std::size_t>(t) * np_ + wp; }
    std::size_t sidx(int tp, int t) const { return static_cast<std::size_t>(tp) * s_ + t; }
    bool sim(int w, int wp) const { return sim_[static_cast<std::size_t>(w) * np_ + wp]; }
    int set_of(const RelationGraph& g, int v) const { return v - g.num_states(); }

    bool any_pending() const
    {
        for (const auto& r : remove_)
            if (!r.empty()) return true;
        for (const auto& r : remove_s_)
            if (!r.empty()) return true;
        return false;
    }

    void set_ceilings(IterativeStats& st) const
    {
        const std::size_t n = n_, np = np_, s = s_;
        st.while_ceiling = n * np;
        st.succ_outer_ceiling = np * s;
        st.succ_pairs_ceiling = s * gkp_.set_edges();
        st.succ_updates_ceiling = s * gkp_.state_edges();
        st.prune_outer_ceiling = s * np;
        st.prune_pairs_ceiling = np * gk_.state_edges();
        st.prune_updates_ceiling = np * gk_.set_edges();
    }

    // Prunes simS using remove; feeds removeS.
    void prune_sim_str_succ(IterativeStats& st)
    {
        for (int wp = 0; wp < np_; ++wp) {
            if (remove_[wp].empty()) continue;
            ++st.succ_outer;
            for (int tpv : gkp_.pre(wp)) {
                const int tp = set_of(gkp_, tpv);
                for (int t : remove_[wp].items()) {
                    ++st.succ_pairs;
                    if (!sim_s_[sidx(tp, t)]) continue;
                    sim_s_[sidx(tp, t)] = false;
                    for (int sp : gkp_.pre(tpv)) {
                        ++st.succ_updates;
                        if (--count_[cidx(sp, t)] == 0) remove_s_[t].insert(sp);
                    }
                }
            }
            remove_[wp].clear();
        }
    }

    // Prunes sim using removeS; feeds remove.
    void prune_sim_str(IterativeStats& st)
    {
        for (int t = 0; t < s_; ++t) {
            if (remove_s_[t].empty()) continue;
            ++st.prune_outer;
            for (int w : gk_.pre(gk_.set_vertex(t))) {
                for (int wp : remove_s_[t].items()) {
                    ++st.prune_pairs;
                    const std::size_t cell = static_cast<std::size_t>(w) * np_ + wp;
                    if (!sim_[cell]) continue;
                    sim_[cell] = false;
                    for (int dv : gk_.pre(w)) {
                        ++st.prune_updates;
                        const int d = set_of(gk_, dv);
                        if (--count_s_[csidx(d, wp)] == 0) remove_[wp].insert(d);
                    }
                }
            }
            remove_s_[t].clear();
        }
    }

    // ---- invariant checks -------------------------------------------------

    [[noreturn]] void fail(const std::string& what) const { throw InvariantViolation(what); }

    void check_loop_top(IterativeStats& st) const
    {
        ++st.invariant_checks;
        // Inv 1: entries set to false are really outside the maximum relations.
        for (int w = 0; w < n_; ++w)
            for (int wp = 0; wp < np_; ++wp)
                if (!sim(w, wp) && oracle_.contains(w, wp))
                    fail("invariant 1a: sim(" + std::to_string(w) + "," + std::to_string(wp) +
                         ") false but the pair is in the maximum relation");
        for (int tp = 0; tp < sp_; ++tp)
            for (int t = 0; t < s_; ++t) {
                if (sim_s_[sidx(tp, t)]) continue;
                bool companion = true;
                for (int rp : idxp_.members(tp)) {
                    bool some = false;
                    for (int r : idx_.members(t)) some = some || oracle_.contains(r, rp);
                    companion = companion && some;
                }
                if (companion)
                    fail("invariant 1b: simS(" + std::to_string(tp) + "," + std::to_string(t) +
                         ") false but the sets are companions");
            }
        // Inv 2a/2b: counters match their defining intersections.
        for (int wp = 0; wp < np_; ++wp)
            for (int t = 0; t < s_; ++t) {
                int c = 0;
                for (int tpv : gkp_.post(wp)) c += sim_s_[sidx(set_of(gkp_, tpv), t)];
                if (c != count_[cidx(wp, t)])
                    fail("invariant 2a: count(" + std::to_string(wp) + "," + std::to_string(t) + ") = " +
                         std::to_string(count_[cidx(wp, t)]) + ", expected " + std::to_string(c));
            }
        for (int t = 0; t < s_; ++t)
            for (int wp = 0; wp < np_; ++wp) {
                int c = 0;
                for (int w : idx_.members(t)) c += sim(w, wp);
                if (c != count_s_[csidx(t, wp)])
                    fail("invariant 2b: countS(" + std::to_string(t) + "," + std::to_string(wp) + ") = " +
                         std::to_string(count_s_[csidx(t, wp)]) + ", expected " + std::to_string(c));
            }
    }

    // removeS(T) = Pre(invprevsimS(T)) \ Pre(invsimS(T)) in the right relation graph.
    void check_remove_s(IterativeStats& st) const
    {
        ++st.invariant_checks;
        for (int t = 0; t < s_; ++t)
            for (int sp = 0; sp < np_; ++sp) {
                bool before = false, now = false;
                for (int tpv : gkp_.post(sp)) {
                    const int tp = set_of(gkp_, tpv);
                    before = before || prev_sim_s_[sidx(tp, t)];
                    now = now || sim_s_[sidx(tp, t)];
                }
                if (remove_s_[t].contains(sp) != (before && !now))
                    fail("invariant 3b: removeS(" + std::to_string(t) + ") disagrees at state " + std::to_string(sp));
            }
    }

    // remove(w') = Pre(invprevsim(w')) \ Pre(invsim(w')) in the left relation graph.
    void check_remove(IterativeStats& st) const
    {
        ++st.invariant_checks;
        for (int wp = 0; wp < np_; ++wp)
            for (int t = 0; t < s_; ++t) {
                bool before = false, now = false;
                for (int w : idx_.members(t)) {
                    before = before || prev_sim_[static_cast<std::size_t>(w) * np_ + wp];
                    now = now || sim(w, wp);
                }
                if (remove_[wp].contains(t) != (before && !now))
                    fail("invariant 3a: remove(" + std::to_string(wp) + ") disagrees at set " + std::to_string(t));
            }
    }

    const Ats& k_;
    const Ats& kp_;
    IterativeOptions opt_;
    SuccIndex idx_, idxp_;
    RelationGraph gk_, gkp_;
    int n_ = 0, np_ = 0, s_ = 0, sp_ = 0;
    std::vector<bool> sim_, sim_s_, prev_sim_, prev_sim_s_;
    std::vector<int> count_, count_s_;
    std::vector<FlaggedList> remove_, remove_s_;
    SimRelation oracle_;
};

} // namespace detail

/// Maximum alternating simulation by simultaneous pruning of the state
/// relation and its companion relation over successor sets. With
/// `assert_invariants` the engine cross-checks its data structures at every
/// iteration and throws InvariantViolation on the first discrepancy.
inline SimRelation altsim_iterative(const Ats& k, const Ats& kp, const IterativeOptions& opt = {},
                                    IterativeStats* stats = nullptr)
{
    require_valid(k);
    require_valid(kp);
    (void)observation_map(k.obs, kp.obs);
    detail::IterativeEngine engine(k, kp, opt);
    return engine.run(stats);
}

inline SimRelation altsim(const Ats& k, const Ats& kp, Algo algo, const IterativeOptions& opt = {})
{
    switch (algo) {
    case Algo::Basic: return altsim_basic(k, kp);
    case Algo::Iterative: return altsim_iterative(k, kp, opt);
    default: return altsim_game(k, kp);
    }
}

/// Plain simulation between transition systems, through their embeddings.
inline SimRelation sim(const Ts& t, const Ts& tp, Algo algo = Algo::Game, const IterativeOptions& opt = {})
{
    return altsim(ts_to_ats(t), ts_to_ats(tp), algo, opt);
}

} // namespace altref
