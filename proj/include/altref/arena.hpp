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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace altref {

enum class Player : std::uint8_t { One = 0, Two = 1 };

constexpr Player opponent(Player p) { return p == Player::One ? Player::Two : Player::One; }

/// Vertex set as a membership mask over 0..|V|-1.
using Region = std::vector<bool>;

inline std::size_t region_size(const Region& r) { return static_cast<std::size_t>(std::count(r.begin(), r.end(), true)); }

inline Region region_complement(const Region& r)
{
    Region c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) c[i] = !r[i];
    return c;
}

/// Two-player turn-based game graph. Out- and in-adjacency are stored in CSR
/// form, each list ascending and duplicate free. An arena optionally carries
/// a target set (reachability/safety) or a priority function.
class GameArena {
public:
    int num_vertices() const { return static_cast<int>(owner_.size()); }
    std::size_t num_edges() const { return out_.size(); }
    Player owner(int v) const { return owner_[v]; }

    std::span<const int> out(int v) const { return {out_.data() + out_off_[v], out_.data() + out_off_[v + 1]}; }
    std::span<const int> in(int v) const { return {in_.data() + in_off_[v], in_.data() + in_off_[v + 1]}; }
    std::size_t out_degree(int v) const { return static_cast<std::size_t>(out_off_[v + 1] - out_off_[v]); }

    bool has_edge(int u, int v) const
    {
        auto o = out(u);
        return std::binary_search(o.begin(), o.end(), v);
    }

    bool has_target() const { return has_target_flag_; }
    const Region& target() const
    {
        if (!has_target_flag_) throw std::logic_error("arena has no target set");
        return target_;
    }

    bool has_priorities() const { return !priority_.empty(); }
    int priority(int v) const { return priority_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::uint8_t>& priorities() const { return priority_; }
    int max_priority() const
    {
        return priority_.empty() ? -1 : *std::max_element(priority_.begin(), priority_.end());
    }

    GameArena with_target(Region target) const
    {
        if (static_cast<int>(target.size()) != num_vertices()) throw std::invalid_argument("target size mismatch");
        GameArena g = *this;
        g.target_ = std::move(target);
        g.has_target_flag_ = true;
        return g;
    }
    GameArena with_priorities(std::vector<std::uint8_t> prio) const
    {
        if (static_cast<int>(prio.size()) != num_vertices()) throw std::invalid_argument("priority size mismatch");
        GameArena g = *this;
        g.priority_ = std::move(prio);
        return g;
    }

    /// Storage cells: one per vertex plus one per edge in each direction.
    std::size_t cells() const { return owner_.size() + 2 * out_.size(); }

    friend class ArenaBuilder;

private:
    std::vector<Player> owner_;
    std::vector<int> out_off_{0}, out_;
    std::vector<int> in_off_{0}, in_;
    Region target_;
    bool has_target_flag_ = false;
    std::vector<std::uint8_t> priority_;
};

class ArenaBuilder {
public:
    int add_vertex(Player owner)
    {
        owner_.push_back(owner);
        return static_cast<int>(owner_.size()) - 1;
    }
    void add_edge(int u, int v) { edges_.emplace_back(u, v); }
    int num_vertices() const { return static_cast<int>(owner_.size()); }

    /// Sorts and deduplicates the edge list. Throws std::invalid_argument if
    /// some vertex has no outgoing edge or an edge endpoint is out of range.
    GameArena build() &&
    {
        const int n = num_vertices();
        for (auto [u, v] : edges_)
            if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        GameArena g;
        g.owner_ = std::move(owner_);
        g.out_off_.assign(n + 1, 0);
        g.in_off_.assign(n + 1, 0);
        for (auto [u, v] : edges_) {
            ++g.out_off_[u + 1];
            ++g.in_off_[v + 1];
        }
        for (int i = 0; i < n; ++i) {
            if (g.out_off_[i + 1] == 0)
                throw std::invalid_argument("vertex " + std::to_string(i) + " has no outgoing edge");
            g.out_off_[i + 1] += g.out_off_[i];
            g.in_off_[i + 1] += g.in_off_[i];
        }
        g.out_.resize(edges_.size());
        g.in_.resize(edges_.size());
        std::vector<int> pos(g.in_off_.begin(), g.in_off_.end() - 1);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto [u, v] = edges_[e];
            g.out_[e] = v;
            g.in_[pos[v]++] = u; // sources arrive in ascending order
        }
        return g;
    }

private:
    std::vector<Player> owner_;
    std::vector<std::pair<int, int>> edges_;
};

/// choice[v] is the successor picked at v, or -1 where the strategy is silent.
struct MemorylessStrategy {
    Player player = Player::One;
    std::vector<int> choice;

    MemorylessStrategy() = default;
    MemorylessStrategy(Player p, int n) : player(p), choice(n, -1) {}
};

// ---------------------------------------------------------------------------
// Attractors and reachability/safety

struct Attractor {
    Region region;
    MemorylessStrategy strategy;
};

namespace detail {

inline int first_successor_in(const GameArena& g, int v, const Region* sub)
{
    for (int w : g.out(v))
        if (!sub || (*sub)[w]) return w;
    return -1;
}

} // namespace detail

/// Vertices (inside `subgame`, when given) from which `player` forces a visit
/// to `target`. Backward worklist with per-vertex successor counters, seeded
/// with the target in ascending order; O(|V|+|E|).
inline Attractor attractor(const GameArena& g, Player player, const Region& target, const Region* subgame = nullptr)
{
    const int n = g.num_vertices();
    Attractor res{Region(n, false), MemorylessStrategy(player, n)};
    std::vector<int> remaining(n, 0);
    for (int v = 0; v < n; ++v) {
        if (subgame && !(*subgame)[v]) continue;
        if (g.owner(v) != player) {
            int c = 0;
            for (int w : g.out(v))
                if (!subgame || (*subgame)[w]) ++c;
            remaining[v] = c;
        }
    }
    std::deque<int> queue;
    for (int v = 0; v < n; ++v) {
        if (target[v] && (!subgame || (*subgame)[v])) {
            res.region[v] = true;
            queue.push_back(v);
            if (g.owner(v) == player) res.strategy.choice[v] = detail::first_successor_in(g, v, subgame);
        }
    }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u : g.in(v)) {
            if (res.region[u] || (subgame && !(*subgame)[u])) continue;
            if (g.owner(u) == player) {
                res.region[u] = true;
                res.strategy.choice[u] = v;
                queue.push_back(u);
            } else if (--remaining[u] == 0) {
                res.region[u] = true;
                queue.push_back(u);
            }
        }
    }
    return res;
}

struct ReachabilityResult {
    Region win1; // player 1 reaches the target
    Region win2; // player 2 keeps the play out of it forever
    MemorylessStrategy strategy1;
    MemorylessStrategy strategy2;
};

/// Player 1 wants to reach the arena's target set, player 2 to stay safe.
inline ReachabilityResult solve_reachability(const GameArena& g)
{
    const int n = g.num_vertices();
    auto attr = attractor(g, Player::One, g.target());
    ReachabilityResult res{attr.region, region_complement(attr.region), std::move(attr.strategy),
                           MemorylessStrategy(Player::Two, n)};
    for (int v = 0; v < n; ++v)
        if (res.win2[v] && g.owner(v) == Player::Two) res.strategy2.choice[v] = detail::first_successor_in(g, v, &res.win2);
    return res;
}

/// Vertices from which `player` keeps every play inside `safe`, with a strategy.
inline Attractor solve_safety(const GameArena& g, Player player, const Region& safe)
{
    const int n = g.num_vertices();
    auto opp = attractor(g, opponent(player), region_complement(safe));
    Attractor res{region_complement(opp.region), MemorylessStrategy(player, n)};
    for (int v = 0; v < n; ++v)
        if (res.region[v] && g.owner(v) == player) res.strategy.choice[v] = detail::first_successor_in(g, v, &res.region);
    return res;
}

// ---------------------------------------------------------------------------
// Büchi

/// Vertices from which `player` forces infinitely many visits to `accepting`;
/// repeated-attractor scheme, O(|V|·|E|).
inline Attractor solve_buchi(const GameArena& g, Player player, const Region& accepting)
{
    const int n = g.num_vertices();
    Region sub(n, true);
    Attractor reach;
    while (true) {
        Region goal(n, false);
        for (int v = 0; v < n; ++v) goal[v] = sub[v] && accepting[v];
        reach = attractor(g, player, goal, &sub);
        Region trap(n, false);
        bool any = false;
        for (int v = 0; v < n; ++v) {
            trap[v] = sub[v] && !reach.region[v];
            any = any || trap[v];
        }
        if (!any) break;
        auto lost = attractor(g, opponent(player), trap, &sub);
        for (int v = 0; v < n; ++v)
            if (lost.region[v]) sub[v] = false;
    }
    Attractor res{sub, MemorylessStrategy(player, n)};
    for (int v = 0; v < n; ++v) {
        if (!sub[v] || g.owner(v) != player) continue;
        res.strategy.choice[v] = accepting[v] ? detail::first_successor_in(g, v, &sub) : reach.strategy.choice[v];
    }
    return res;
}

// ---------------------------------------------------------------------------
// Parity

struct Parity3Result {
    Region win_even;
    Region win_odd;
    MemorylessStrategy strategy; // for the even player, on win_even
};

/// Three-priority parity game solved by small progress measures. The even
/// player wins a play iff the least priority seen infinitely often is even.
///
/// Measures range over {0..|p^-1(1)|} plus top; each vertex is lifted at most
/// |p^-1(1)|+1 times. The worklist is FIFO, seeded in ascending vertex order.
inline Parity3Result solve_parity3(const GameArena& g, Player even_player)
{
    if (!g.has_priorities()) throw std::invalid_argument("arena has no priority function");
    if (g.max_priority() > 2) throw std::invalid_argument("solve_parity3 needs priorities in {0,1,2}");
    const int n = g.num_vertices();
    int odd_count = 0;
    for (int v = 0; v < n; ++v) odd_count += g.priority(v) == 1;
    const int top = odd_count + 1;

    std::vector<int> rho(n, 0);
    auto prog = [&](int v, int w) {
        if (rho[w] == top) return top;
        switch (g.priority(v)) {
        case 0: return 0;
        case 1: return std::min(rho[w] + 1, top);
        default: return rho[w];
        }
    };
    auto lift = [&](int v) {
        const bool minimize = g.owner(v) == even_player;
        int best = minimize ? top : 0;
        for (int w : g.out(v)) best = minimize ? std::min(best, prog(v, w)) : std::max(best, prog(v, w));
        return best;
    };

    std::deque<int> queue;
    std::vector<char> queued(n, 1);
    for (int v = 0; v < n; ++v) queue.push_back(v);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        queued[v] = 0;
        const int m = lift(v);
        if (m <= rho[v]) continue;
        rho[v] = m;
        for (int u : g.in(v)) {
            if (!queued[u] && rho[u] != top) {
                queued[u] = 1;
                queue.push_back(u);
            }
        }
    }

    Parity3Result res{Region(n), Region(n), MemorylessStrategy(even_player, n)};
    for (int v = 0; v < n; ++v) {
        res.win_even[v] = rho[v] != top;
        res.win_odd[v] = !res.win_even[v];
        if (res.win_even[v] && g.owner(v) == even_player) {
            int best = -1, best_m = top + 1;
            for (int w : g.out(v)) {
                const int m = prog(v, w);
                if (m < best_m) {
                    best_m = m;
                    best = w;
                }
            }
            res.strategy.choice[v] = best;
        }
    }
    return res;
}

struct ParityResult {
    Region win_even;
    Region win_odd;
    MemorylessStrategy strategy_even;
    MemorylessStrategy strategy_odd;
};

namespace detail {

struct ZielonkaState {
    const GameArena& g;
    Player players[2]; // [0] wants even, [1] wants odd
    std::vector<int> choice[2];
};

// Min-parity Zielonka on the subgame `sub`; fills win[0]/win[1] and the
// matching strategy entries for vertices in `sub`.
inline void zielonka(ZielonkaState& st, const Region& sub, Region win[2])
{
    const GameArena& g = st.g;
    const int n = g.num_vertices();
    win[0].assign(n, false);
    win[1].assign(n, false);
    int p = -1;
    for (int v = 0; v < n; ++v)
        if (sub[v] && (p < 0 || g.priority(v) < p)) p = g.priority(v);
    if (p < 0) return;
    const int alpha = p % 2;
    const int beta = 1 - alpha;

    Region top_prio(n, false);
    for (int v = 0; v < n; ++v) top_prio[v] = sub[v] && g.priority(v) == p;
    auto attr_a = attractor(g, st.players[alpha], top_prio, &sub);
    Region sub1(n, false);
    for (int v = 0; v < n; ++v) sub1[v] = sub[v] && !attr_a.region[v];
    Region win1[2];
    zielonka(st, sub1, win1);

    if (region_size(win1[beta]) == 0) {
        win[alpha] = sub;
        for (int v = 0; v < n; ++v) {
            if (!sub[v] || g.owner(v) != st.players[alpha]) continue;
            if (top_prio[v])
                st.choice[alpha][v] = first_successor_in(g, v, &sub);
            else if (attr_a.region[v])
                st.choice[alpha][v] = attr_a.strategy.choice[v];
            // vertices of sub1 keep the choice from the recursive call
        }
        return;
    }

    auto attr_b = attractor(g, st.players[beta], win1[beta], &sub);
    for (int v = 0; v < n; ++v)
        if (attr_b.region[v] && !win1[beta][v] && g.owner(v) == st.players[beta])
            st.choice[beta][v] = attr_b.strategy.choice[v];
    Region sub2(n, false);
    for (int v = 0; v < n; ++v) sub2[v] = sub[v] && !attr_b.region[v];
    Region win2[2];
    zielonka(st, sub2, win2);
    win[alpha] = win2[alpha];
    win[beta] = win2[beta];
    for (int v = 0; v < n; ++v)
        if (attr_b.region[v]) win[beta][v] = true;
}

} // namespace detail

/// Recursive attractor-decomposition solver for any number of priorities
/// (min-parity); returns memoryless winning strategies for both sides.
inline ParityResult solve_parity_zielonka(const GameArena& g, Player even_player)
{
    if (!g.has_priorities()) throw std::invalid_argument("arena has no priority function");
    const int n = g.num_vertices();
    detail::ZielonkaState st{g, {even_player, opponent(even_player)}, {std::vector<int>(n, -1), std::vector<int>(n, -1)}};
    Region win[2];
    detail::zielonka(st, Region(n, true), win);
    ParityResult res{win[0], win[1], MemorylessStrategy(even_player, n), MemorylessStrategy(opponent(even_player), n)};
    for (int v = 0; v < n; ++v) {
        if (win[0][v] && g.owner(v) == even_player) res.strategy_even.choice[v] = st.choice[0][v];
        if (win[1][v] && g.owner(v) != even_player) res.strategy_odd.choice[v] = st.choice[1][v];
    }
    return res;
}

// ---------------------------------------------------------------------------
// Strategy verification

struct Objective {
    enum class Kind { Reach, Safe, Parity };
    Kind kind = Kind::Reach;
    Region set;            // target (Reach) or safe set (Safe)
    bool parity_even = true; // Parity: the strategy owner wants even

    static Objective reach(Region target) { return {Kind::Reach, std::move(target), true}; }
    static Objective safe(Region safe_set) { return {Kind::Safe, std::move(safe_set), true}; }
    static Objective parity(bool want_even) { return {Kind::Parity, {}, want_even}; }
};

/// Ultimately periodic play: `stem` followed by `cycle` repeated forever.
struct Lasso {
    std::vector<int> stem;
    std::vector<int> cycle;
    std::size_t length() const { return stem.size() + cycle.size(); }
};

namespace detail {

// Iterative Tarjan over the vertices with allowed[v]; comp[v] = -1 elsewhere.
inline std::vector<int> strongly_connected(int n, const std::vector<char>& allowed,
                                           const std::function<std::span<const int>(int)>& succ)
{
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    int counter = 0, comps = 0;
    struct Frame {
        int v;
        std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
        if (!allowed[root] || index[root] >= 0) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            auto s = succ(f.v);
            if (f.next < s.size()) {
                const int w = s[f.next++];
                if (!allowed[w]) continue;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const int v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = comps;
                } while (w != v);
                ++comps;
            }
        }
    }
    return comp;
}

} // namespace detail

/// Checks that `s` wins `objective` from every vertex of `claimed`, with the
/// opponent unrestricted. Returns std::nullopt on success, otherwise a lasso
/// consistent with `s` that violates the objective. Throws
/// std::invalid_argument if `s` picks a non-edge or is undefined at an owned
/// vertex the restricted play can reach.
inline std::optional<Lasso> verify_strategy(const GameArena& g, const MemorylessStrategy& s, const Objective& objective,
                                            const Region& claimed)
{
    const int n = g.num_vertices();
    if (static_cast<int>(s.choice.size()) != n) throw std::invalid_argument("strategy size mismatch");
    if (objective.kind == Objective::Kind::Parity && !g.has_priorities())
        throw std::invalid_argument("parity objective on an arena without priorities");
    for (int v = 0; v < n; ++v) {
        const int c = s.choice[v];
        if (c < 0) continue;
        if (g.owner(v) != s.player) throw std::invalid_argument("strategy chooses at an opponent vertex");
        if (!g.has_edge(v, c))
            throw std::invalid_argument("strategy edge " + std::to_string(v) + " -> " + std::to_string(c) +
                                        " not in arena");
    }
    const bool reach = objective.kind == Objective::Kind::Reach;
    auto stops = [&](int v) { return reach && objective.set[v]; };
    auto succ = [&](int v) -> std::span<const int> {
        if (g.owner(v) == s.player) {
            if (s.choice[v] < 0)
                throw std::invalid_argument("strategy undefined at reachable vertex " + std::to_string(v));
            return {&s.choice[v], 1};
        }
        return g.out(v);
    };

    // Forward exploration of the restricted arena; parent links give stems.
    std::vector<int> parent(n, -2);
    std::vector<char> seen(n, 0);
    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
        if (claimed[v]) {
            seen[v] = 1;
            parent[v] = -1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (stops(v)) continue;
        for (int w : succ(v))
            if (!seen[w]) {
                seen[w] = 1;
                parent[w] = v;
                queue.push_back(w);
            }
    }
    auto stem_to = [&](int x) {
        std::vector<int> path;
        for (int v = parent[x]; v >= 0; v = parent[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
    };
    // Shortest cycle through x using only vertices with allowed[v].
    auto cycle_through = [&](int x, const std::vector<char>& allowed) {
        std::vector<int> back(n, -2);
        std::deque<int> q;
        for (int w : succ(x)) {
            if (w == x) return std::vector<int>{x};
            if (allowed[w] && back[w] == -2) {
                back[w] = x;
                q.push_back(w);
            }
        }
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            for (int w : succ(v)) {
                if (w == x) {
                    std::vector<int> cyc;
                    for (int u = v; u != x; u = back[u]) cyc.push_back(u);
                    cyc.push_back(x);
                    std::reverse(cyc.begin(), cyc.end());
                    return cyc;
                }
                if (allowed[w] && back[w] == -2) {
                    back[w] = v;
                    q.push_back(w);
                }
            }
        }
        return std::vector<int>{};
    };

    if (objective.kind == Objective::Kind::Safe) {
        for (int x = 0; x < n; ++x) {
            if (!seen[x] || objective.set[x]) continue;
            Lasso lasso{stem_to(x), {}};
            std::vector<int> path{x};
            std::vector<int> pos(n, -1);
            pos[x] = 0;
            while (true) {
                const int w = succ(path.back())[0];
                if (pos[w] >= 0) {
                    lasso.stem.insert(lasso.stem.end(), path.begin(), path.begin() + pos[w]);
                    lasso.cycle.assign(path.begin() + pos[w], path.end());
                    return lasso;
                }
                pos[w] = static_cast<int>(path.size());
                path.push_back(w);
            }
        }
        return std::nullopt;
    }

    if (reach) {
        std::vector<char> allowed(n, 0);
        for (int v = 0; v < n; ++v) allowed[v] = seen[v] && !objective.set[v];
        auto comp = detail::strongly_connected(n, allowed, succ);
        std::vector<int> comp_size(n, 0);
        for (int v = 0; v < n; ++v)
            if (comp[v] >= 0) ++comp_size[comp[v]];
        for (int x = 0; x < n; ++x) {
            if (!allowed[x]) continue;
            const auto s_x = succ(x);
            const bool self = std::find(s_x.begin(), s_x.end(), x) != s_x.end();
            if (comp_size[comp[x]] > 1 || self) {
                std::vector<char> in_comp(n, 0);
                for (int v = 0; v < n; ++v) in_comp[v] = comp[v] == comp[x];
                return Lasso{stem_to(x), cycle_through(x, in_comp)};
            }
        }
        return std::nullopt;
    }

    // Parity: look for a reachable cycle whose least priority has the wrong parity.
    const int bad_parity = objective.parity_even ? 1 : 0;
    for (int q = bad_parity; q <= g.max_priority(); q += 2) {
        std::vector<char> allowed(n, 0);
        for (int v = 0; v < n; ++v) allowed[v] = seen[v] && g.priority(v) >= q;
        auto comp = detail::strongly_connected(n, allowed, succ);
        std::vector<int> comp_size(n, 0);
        for (int v = 0; v < n; ++v)
            if (comp[v] >= 0) ++comp_size[comp[v]];
        for (int x = 0; x < n; ++x) {
            if (!allowed[x] || g.priority(x) != q) continue;
            const auto s_x = succ(x);
            const bool self = std::find(s_x.begin(), s_x.end(), x) != s_x.end();
            if (comp_size[comp[x]] > 1 || self) {
                std::vector<char> in_comp(n, 0);
                for (int v = 0; v < n; ++v) in_comp[v] = comp[v] == comp[x];
                return Lasso{stem_to(x), cycle_through(x, in_comp)};
            }
        }
    }
    return std::nullopt;
}

} // namespace altref
