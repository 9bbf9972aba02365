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
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "altref/error.hpp"

namespace altref {

inline constexpr int kNoState = -1;

/// Labeled alternating transition system with two agents.
///
/// States, actions and observations are dense indices; the name vectors keep
/// the declaration order of the source file. `delta` is a dense table over
/// (state, agent-1 action, agent-2 action). Cells outside P1(w) x P2(w) hold
/// kNoState in a well-formed system.
struct Ats {
    std::vector<std::string> obs;
    std::vector<std::string> states;
    std::vector<std::string> actions1;
    std::vector<std::string> actions2;
    int init = 0;
    std::vector<int> label;
    std::vector<std::vector<int>> enabled1; // P1(w), ascending
    std::vector<std::vector<int>> enabled2; // P2(w), ascending
    std::vector<int> delta;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_actions1() const { return static_cast<int>(actions1.size()); }
    int num_actions2() const { return static_cast<int>(actions2.size()); }
    int num_obs() const { return static_cast<int>(obs.size()); }

    std::size_t cell(int w, int a, int b) const
    {
        return (static_cast<std::size_t>(w) * actions1.size() + static_cast<std::size_t>(a)) * actions2.size() +
               static_cast<std::size_t>(b);
    }
    int next(int w, int a, int b) const { return delta[cell(w, a, b)]; }

    bool is_enabled1(int w, int a) const
    {
        return std::binary_search(enabled1[w].begin(), enabled1[w].end(), a);
    }
    bool is_enabled2(int w, int b) const
    {
        return std::binary_search(enabled2[w].begin(), enabled2[w].end(), b);
    }

    /// Blank system with generated names (o0.., s0.., a0.., b0..), no enabled
    /// actions and an all-undefined transition table.
    static Ats with_shape(int n_states, int n_actions1, int n_actions2, int n_obs)
    {
        Ats k;
        for (int i = 0; i < n_obs; ++i) k.obs.push_back("o" + std::to_string(i));
        for (int i = 0; i < n_states; ++i) k.states.push_back("s" + std::to_string(i));
        for (int i = 0; i < n_actions1; ++i) k.actions1.push_back("a" + std::to_string(i));
        for (int i = 0; i < n_actions2; ++i) k.actions2.push_back("b" + std::to_string(i));
        k.label.assign(n_states, 0);
        k.enabled1.assign(n_states, {});
        k.enabled2.assign(n_states, {});
        k.delta.assign(static_cast<std::size_t>(n_states) * n_actions1 * n_actions2, kNoState);
        return k;
    }

    friend bool operator==(const Ats&, const Ats&) = default;
};

/// Labeled transition system; `succ[w]` is the ascending successor list of w.
struct Ts {
    std::vector<std::string> obs;
    std::vector<std::string> states;
    int init = 0;
    std::vector<int> label;
    std::vector<std::vector<int>> succ;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_obs() const { return static_cast<int>(obs.size()); }
    std::size_t num_edges() const
    {
        std::size_t m = 0;
        for (const auto& s : succ) m += s.size();
        return m;
    }

    friend bool operator==(const Ts&, const Ts&) = default;
};

/// Büchi fairness: a run is fair iff it visits `fair` infinitely often.
/// `fair` is an ascending list of state indices and may be empty.
struct FairAts {
    Ats ats;
    std::vector<int> fair;

    friend bool operator==(const FairAts&, const FairAts&) = default;
};

struct FairTs {
    Ts ts;
    std::vector<int> fair;

    friend bool operator==(const FairTs&, const FairTs&) = default;
};

using System = std::variant<Ts, FairTs, Ats, FairAts>;

inline std::vector<bool> fair_mask(const std::vector<int>& fair, int n)
{
    std::vector<bool> mask(n, false);
    for (int w : fair) mask[w] = true;
    return mask;
}

inline std::vector<int> all_states(int n)
{
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline std::string state_ref(const std::vector<std::string>& names, int w)
{
    std::string s = std::to_string(w);
    if (w >= 0 && w < static_cast<int>(names.size()) && names[w] != s) s += " (" + names[w] + ")";
    return s;
}

inline void check_common(const std::vector<std::string>& obs, const std::vector<std::string>& states, int init,
                         const std::vector<int>& label, std::vector<std::string>& out)
{
    const int n = static_cast<int>(states.size());
    if (n == 0) out.push_back("no states");
    if (init < 0 || init >= n) out.push_back("init " + std::to_string(init) + " out of range");
    if (static_cast<int>(label.size()) != n) {
        out.push_back("label table has " + std::to_string(label.size()) + " entries for " + std::to_string(n) +
                      " states");
        return;
    }
    for (int w = 0; w < n; ++w)
        if (label[w] < 0 || label[w] >= static_cast<int>(obs.size()))
            out.push_back("state " + state_ref(states, w) + " has no valid label");
}

inline void check_fair(const std::vector<int>& fair, int n, std::vector<std::string>& out)
{
    for (std::size_t i = 0; i < fair.size(); ++i) {
        if (fair[i] < 0 || fair[i] >= n) out.push_back("fair state " + std::to_string(fair[i]) + " out of range");
        if (i > 0 && fair[i] <= fair[i - 1]) out.push_back("fair set not strictly ascending");
    }
}

} // namespace detail

/// Every invariant violation of `k`; empty means the system is well formed.
inline std::vector<std::string> validate(const Ats& k)
{
    std::vector<std::string> out;
    detail::check_common(k.obs, k.states, k.init, k.label, out);
    const int n = k.num_states();
    const int na1 = k.num_actions1();
    const int na2 = k.num_actions2();
    if (static_cast<int>(k.enabled1.size()) != n || static_cast<int>(k.enabled2.size()) != n) {
        out.push_back("enabled-action tables do not cover all states");
        return out;
    }
    if (k.delta.size() != static_cast<std::size_t>(n) * na1 * na2) {
        out.push_back("transition table has wrong size");
        return out;
    }
    auto check_actions = [&](const std::vector<int>& acts, int limit, const char* which, int w) {
        if (acts.empty()) out.push_back(std::string(which) + "(" + std::to_string(w) + ") empty");
        for (std::size_t i = 0; i < acts.size(); ++i) {
            if (acts[i] < 0 || acts[i] >= limit)
                out.push_back(std::string(which) + "(" + std::to_string(w) + ") has undeclared action");
            if (i > 0 && acts[i] <= acts[i - 1])
                out.push_back(std::string(which) + "(" + std::to_string(w) + ") not strictly ascending");
        }
    };
    for (int w = 0; w < n; ++w) {
        check_actions(k.enabled1[w], na1, "P1", w);
        check_actions(k.enabled2[w], na2, "P2", w);
    }
    if (!out.empty()) return out;
    for (int w = 0; w < n; ++w) {
        for (int a = 0; a < na1; ++a) {
            for (int b = 0; b < na2; ++b) {
                const int t = k.next(w, a, b);
                const bool enabled = k.is_enabled1(w, a) && k.is_enabled2(w, b);
                if (enabled && t == kNoState) {
                    out.push_back("missing transition for (" + std::to_string(w) + ", " + k.actions1[a] + ", " +
                                  k.actions2[b] + ")");
                } else if (!enabled && t != kNoState) {
                    out.push_back("transition on disabled action (" + std::to_string(w) + ", " + k.actions1[a] +
                                  ", " + k.actions2[b] + ")");
                } else if (enabled && (t < 0 || t >= n)) {
                    out.push_back("dangling transition target " + std::to_string(t) + " at state " +
                                  std::to_string(w));
                }
            }
        }
    }
    return out;
}

inline std::vector<std::string> validate(const Ts& ts)
{
    std::vector<std::string> out;
    detail::check_common(ts.obs, ts.states, ts.init, ts.label, out);
    const int n = ts.num_states();
    if (static_cast<int>(ts.succ.size()) != n) {
        out.push_back("successor table does not cover all states");
        return out;
    }
    for (int w = 0; w < n; ++w) {
        const auto& s = ts.succ[w];
        if (s.empty()) out.push_back("state " + detail::state_ref(ts.states, w) + " has no outgoing edge");
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || s[i] >= n)
                out.push_back("dangling edge " + std::to_string(w) + " -> " + std::to_string(s[i]));
            if (i > 0 && s[i] <= s[i - 1]) out.push_back("successors of " + std::to_string(w) + " not ascending");
        }
    }
    return out;
}

inline std::vector<std::string> validate(const FairAts& fk)
{
    auto out = validate(fk.ats);
    detail::check_fair(fk.fair, fk.ats.num_states(), out);
    return out;
}

inline std::vector<std::string> validate(const FairTs& ft)
{
    auto out = validate(ft.ts);
    detail::check_fair(ft.fair, ft.ts.num_states(), out);
    return out;
}

inline std::vector<std::string> validate(const System& sys)
{
    return std::visit([](const auto& s) { return validate(s); }, sys);
}

template <class S>
void require_valid(const S& sys)
{
    auto v = validate(sys);
    if (!v.empty()) throw InvalidSystem("invalid system: " + v.front());
}

// ---------------------------------------------------------------------------
// Embedding of a TS as an ATS with a singleton agent-2 alphabet.

/// P1(w) gets one action per successor (a0, a1, ... in ascending target
/// order), A2 = {_}, and delta(w, a_i, _) is the i-th successor of w.
inline Ats ts_to_ats(const Ts& ts)
{
    require_valid(ts);
    std::size_t max_deg = 0;
    for (const auto& s : ts.succ) max_deg = std::max(max_deg, s.size());
    const int n = ts.num_states();
    Ats k = Ats::with_shape(n, static_cast<int>(max_deg), 1, 0);
    k.obs = ts.obs;
    k.states = ts.states;
    k.actions2 = {"_"};
    k.init = ts.init;
    k.label = ts.label;
    for (int w = 0; w < n; ++w) {
        k.enabled2[w] = {0};
        for (std::size_t i = 0; i < ts.succ[w].size(); ++i) {
            k.enabled1[w].push_back(static_cast<int>(i));
            k.delta[k.cell(w, static_cast<int>(i), 0)] = ts.succ[w][i];
        }
    }
    return k;
}

inline FairAts ts_to_ats(const FairTs& ft) { return FairAts{ts_to_ats(ft.ts), ft.fair}; }

// ---------------------------------------------------------------------------
// Observation alignment

/// Maps each right observation index to the left index with the same name.
/// Throws Mismatch unless both systems declare the same set of names.
inline std::vector<int> observation_map(const std::vector<std::string>& left, const std::vector<std::string>& right)
{
    std::unordered_map<std::string, int> idx;
    for (std::size_t i = 0; i < left.size(); ++i) idx.emplace(left[i], static_cast<int>(i));
    if (left.size() != right.size())
        throw Mismatch("observation alphabets differ in size (" + std::to_string(left.size()) + " vs " +
                       std::to_string(right.size()) + ")");
    std::vector<int> map(right.size());
    std::vector<bool> hit(left.size(), false);
    for (std::size_t j = 0; j < right.size(); ++j) {
        auto it = idx.find(right[j]);
        if (it == idx.end() || hit[it->second])
            throw Mismatch("observation '" + right[j] + "' is not shared by both systems");
        hit[it->second] = true;
        map[j] = it->second;
    }
    return map;
}

/// Label-equality table indexed [w * |W'| + w'].
template <class Left, class Right>
std::vector<bool> label_match_table(const Left& k, const Right& kp)
{
    const auto map = observation_map(k.obs, kp.obs);
    const int n = k.num_states();
    const int np = kp.num_states();
    std::vector<bool> eq(static_cast<std::size_t>(n) * np);
    for (int w = 0; w < n; ++w)
        for (int wp = 0; wp < np; ++wp)
            eq[static_cast<std::size_t>(w) * np + wp] = k.label[w] == map[kp.label[wp]];
    return eq;
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

struct Line {
    int number;
    std::vector<std::string> tok;
};

inline std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            std::size_t j = i;
            while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
            if (j > i) line.tok.emplace_back(raw.substr(i, j - i));
            i = j;
        }
        if (!line.tok.empty()) lines.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

class NameTable {
public:
    NameTable(const char* what) : what_(what) {}

    void declare(const std::string& name, int line)
    {
        if (!idx_.emplace(name, static_cast<int>(names_.size())).second)
            throw ParseError(line, std::string("duplicate ") + what_ + " '" + name + "'");
        names_.push_back(name);
    }
    int intern(const std::string& name)
    {
        auto [it, fresh] = idx_.emplace(name, static_cast<int>(names_.size()));
        if (fresh) names_.push_back(name);
        return it->second;
    }
    int lookup(const std::string& name, int line) const
    {
        auto it = idx_.find(name);
        if (it == idx_.end()) throw ParseError(line, std::string("undeclared ") + what_ + " '" + name + "'");
        return it->second;
    }
    std::optional<int> find(const std::string& name) const
    {
        auto it = idx_.find(name);
        if (it == idx_.end()) return std::nullopt;
        return it->second;
    }
    const std::vector<std::string>& names() const { return names_; }
    int size() const { return static_cast<int>(names_.size()); }

private:
    const char* what_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> idx_;
};

inline void expect_args(const Line& l, std::size_t n)
{
    if (l.tok.size() != n + 1)
        throw ParseError(l.number, "'" + l.tok[0] + "' expects " + std::to_string(n) + " argument" +
                                       (n == 1 ? "" : "s"));
}

} // namespace detail

/// Parses the line-based system format. The header (`ats` or `ts`) selects the
/// kind; a `fair` line (possibly with no names) makes it a fair system.
inline System parse_system(std::string_view text)
{
    using detail::Line;
    auto lines = detail::tokenize(text);
    if (lines.empty()) throw ParseError(0, "empty input; expected 'ats' or 'ts' header");
    const Line& head = lines.front();
    if (head.tok.size() != 1 || (head.tok[0] != "ats" && head.tok[0] != "ts"))
        throw ParseError(head.number, "expected 'ats' or 'ts' header");
    const bool is_ats = head.tok[0] == "ats";

    detail::NameTable obs("observation"), states("state"), act1("action"), act2("action");
    bool have_obs = false, have_states = false, have_alpha1 = false, have_alpha2 = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const std::string& d = l.tok[0];
        if (d == "obs" || d == "states") {
            bool& seen = d == "obs" ? have_obs : have_states;
            if (seen) throw ParseError(l.number, "duplicate '" + d + "' line");
            seen = true;
            for (std::size_t t = 1; t < l.tok.size(); ++t) (d == "obs" ? obs : states).declare(l.tok[t], l.number);
        } else if (d == "actions1" || d == "actions2") {
            // Optional alphabet declaration; fixes action indices independently of act1/act2 order.
            if (!is_ats) throw ParseError(l.number, "'" + d + "' is only allowed in ats files");
            bool& seen = d == "actions1" ? have_alpha1 : have_alpha2;
            if (seen) throw ParseError(l.number, "duplicate '" + d + "' line");
            seen = true;
            for (std::size_t t = 1; t < l.tok.size(); ++t) (d == "actions1" ? act1 : act2).declare(l.tok[t], l.number);
        } else if (d == "ats" || d == "ts") {
            throw ParseError(l.number, "repeated header");
        } else if (d != "init" && d != "label" && d != "act1" && d != "act2" && d != "trans" && d != "edge" &&
                   d != "fair") {
            throw ParseError(l.number, "unknown directive '" + d + "'");
        }
    }
    if (!have_obs) throw ParseError(0, "missing 'obs' line");
    if (!have_states || states.size() == 0) throw ParseError(0, "missing or empty 'states' line");

    const int n = states.size();
    std::optional<int> init;
    std::vector<int> label(n, -1);
    std::vector<std::vector<int>> en1(n), en2(n);
    std::vector<bool> have1(n, false), have2(n, false);
    std::vector<bool> fair(n, false);
    bool have_fair = false;
    struct Trans {
        int line, w;
        std::string a, b;
        int t;
    };
    std::vector<Trans> trans;
    std::vector<std::vector<int>> succ(n);

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& l = lines[i];
        const std::string& d = l.tok[0];
        if (d == "init") {
            detail::expect_args(l, 1);
            if (init) throw ParseError(l.number, "duplicate 'init' line");
            init = states.lookup(l.tok[1], l.number);
        } else if (d == "label") {
            detail::expect_args(l, 2);
            const int w = states.lookup(l.tok[1], l.number);
            if (label[w] != -1) throw ParseError(l.number, "duplicate label for state '" + l.tok[1] + "'");
            label[w] = obs.lookup(l.tok[2], l.number);
        } else if (d == "act1" || d == "act2") {
            if (!is_ats) throw ParseError(l.number, "'" + d + "' is only allowed in ats files");
            if (l.tok.size() < 2) throw ParseError(l.number, "'" + d + "' expects a state name");
            const int w = states.lookup(l.tok[1], l.number);
            auto& have = d == "act1" ? have1 : have2;
            if (have[w]) throw ParseError(l.number, "duplicate '" + d + "' line for state '" + l.tok[1] + "'");
            have[w] = true;
            auto& table = d == "act1" ? act1 : act2;
            auto& en = d == "act1" ? en1[w] : en2[w];
            for (std::size_t t = 2; t < l.tok.size(); ++t) {
                const bool declared = d == "act1" ? have_alpha1 : have_alpha2;
                const int a = declared ? table.lookup(l.tok[t], l.number) : table.intern(l.tok[t]);
                if (std::find(en.begin(), en.end(), a) != en.end())
                    throw ParseError(l.number, "action '" + l.tok[t] + "' listed twice");
                en.push_back(a);
            }
        } else if (d == "trans") {
            if (!is_ats) throw ParseError(l.number, "'trans' is only allowed in ats files");
            detail::expect_args(l, 4);
            trans.push_back({l.number, states.lookup(l.tok[1], l.number), l.tok[2], l.tok[3],
                             states.lookup(l.tok[4], l.number)});
        } else if (d == "edge") {
            if (is_ats) throw ParseError(l.number, "'edge' is only allowed in ts files");
            detail::expect_args(l, 2);
            const int u = states.lookup(l.tok[1], l.number);
            const int v = states.lookup(l.tok[2], l.number);
            if (std::find(succ[u].begin(), succ[u].end(), v) != succ[u].end())
                throw ParseError(l.number, "duplicate edge '" + l.tok[1] + "' -> '" + l.tok[2] + "'");
            succ[u].push_back(v);
        } else if (d == "fair") {
            have_fair = true;
            for (std::size_t t = 1; t < l.tok.size(); ++t) fair[states.lookup(l.tok[t], l.number)] = true;
        }
    }

    if (!init) throw ParseError(0, "missing 'init' line");
    for (int w = 0; w < n; ++w)
        if (label[w] == -1) throw ParseError(0, "state " + detail::state_ref(states.names(), w) + " has no label");
    std::vector<int> fair_list;
    for (int w = 0; w < n; ++w)
        if (fair[w]) fair_list.push_back(w);

    if (!is_ats) {
        Ts ts{obs.names(), states.names(), *init, label, std::move(succ)};
        for (int w = 0; w < n; ++w) {
            if (ts.succ[w].empty())
                throw ParseError(0, "state " + detail::state_ref(ts.states, w) + " has no outgoing edge");
            std::sort(ts.succ[w].begin(), ts.succ[w].end());
        }
        if (have_fair) return FairTs{std::move(ts), std::move(fair_list)};
        return ts;
    }

    Ats k;
    k.obs = obs.names();
    k.states = states.names();
    k.actions1 = act1.names();
    k.actions2 = act2.names();
    k.init = *init;
    k.label = label;
    for (int w = 0; w < n; ++w) {
        if (en1[w].empty()) throw ParseError(0, "P1(" + detail::state_ref(k.states, w) + ") empty");
        if (en2[w].empty()) throw ParseError(0, "P2(" + detail::state_ref(k.states, w) + ") empty");
        std::sort(en1[w].begin(), en1[w].end());
        std::sort(en2[w].begin(), en2[w].end());
    }
    k.enabled1 = std::move(en1);
    k.enabled2 = std::move(en2);
    k.delta.assign(static_cast<std::size_t>(n) * k.actions1.size() * k.actions2.size(), kNoState);
    for (const auto& tr : trans) {
        const int a = act1.lookup(tr.a, tr.line);
        const int b = act2.lookup(tr.b, tr.line);
        if (!k.is_enabled1(tr.w, a) || !k.is_enabled2(tr.w, b))
            throw ParseError(tr.line, "transition on disabled action at state '" + k.states[tr.w] + "'");
        auto& cell = k.delta[k.cell(tr.w, a, b)];
        if (cell != kNoState)
            throw ParseError(tr.line, "duplicate transition for (" + k.states[tr.w] + ", " + tr.a + ", " + tr.b + ")");
        cell = tr.t;
    }
    for (int w = 0; w < n; ++w)
        for (int a : k.enabled1[w])
            for (int b : k.enabled2[w])
                if (k.next(w, a, b) == kNoState)
                    throw ParseError(0, "missing transition for (" + k.states[w] + ", " + k.actions1[a] + ", " +
                                            k.actions2[b] + ")");
    if (have_fair) return FairAts{std::move(k), std::move(fair_list)};
    return k;
}

namespace detail {

inline void write_names(std::ostringstream& os, const char* directive, const std::vector<std::string>& names)
{
    os << directive;
    for (const auto& s : names) os << ' ' << s;
    os << '\n';
}

inline void write_fair(std::ostringstream& os, const std::vector<int>& fair, const std::vector<std::string>& states)
{
    os << "fair";
    for (int w : fair) os << ' ' << states[w];
    os << '\n';
}

inline void write_body(std::ostringstream& os, const Ats& k)
{
    os << "ats\n";
    write_names(os, "obs", k.obs);
    write_names(os, "states", k.states);
    write_names(os, "actions1", k.actions1);
    write_names(os, "actions2", k.actions2);
    os << "init " << k.states[k.init] << '\n';
    for (int w = 0; w < k.num_states(); ++w) os << "label " << k.states[w] << ' ' << k.obs[k.label[w]] << '\n';
    for (int w = 0; w < k.num_states(); ++w) {
        os << "act1 " << k.states[w];
        for (int a : k.enabled1[w]) os << ' ' << k.actions1[a];
        os << "\nact2 " << k.states[w];
        for (int b : k.enabled2[w]) os << ' ' << k.actions2[b];
        os << '\n';
    }
    for (int w = 0; w < k.num_states(); ++w)
        for (int a : k.enabled1[w])
            for (int b : k.enabled2[w])
                os << "trans " << k.states[w] << ' ' << k.actions1[a] << ' ' << k.actions2[b] << ' '
                   << k.states[k.next(w, a, b)] << '\n';
}

inline void write_body(std::ostringstream& os, const Ts& ts)
{
    os << "ts\n";
    write_names(os, "obs", ts.obs);
    write_names(os, "states", ts.states);
    os << "init " << ts.states[ts.init] << '\n';
    for (int w = 0; w < ts.num_states(); ++w) os << "label " << ts.states[w] << ' ' << ts.obs[ts.label[w]] << '\n';
    for (int w = 0; w < ts.num_states(); ++w)
        for (int v : ts.succ[w]) os << "edge " << ts.states[w] << ' ' << ts.states[v] << '\n';
}

} // namespace detail

/// Canonical text form. ATS output declares both action alphabets so that
/// parsing it back reproduces the same action indices.
inline std::string serialize_system(const System& sys)
{
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ats> || std::is_same_v<T, Ts>) {
                detail::write_body(os, s);
            } else if constexpr (std::is_same_v<T, FairAts>) {
                detail::write_body(os, s.ats);
                detail::write_fair(os, s.fair, s.ats.states);
            } else {
                detail::write_body(os, s.ts);
                detail::write_fair(os, s.fair, s.ts.states);
            }
        },
        sys);
    return os.str();
}

// ---------------------------------------------------------------------------
// Relations

/// Finite relation between the states of two systems, kept sorted and unique.
class SimRelation {
public:
    SimRelation() = default;
    SimRelation(int left_size, int right_size, std::vector<std::pair<int, int>> pairs = {})
        : left_size_(left_size), right_size_(right_size), pairs_(std::move(pairs))
    {
        for (auto [l, r] : pairs_)
            if (l < 0 || l >= left_size_ || r < 0 || r >= right_size_)
                throw std::out_of_range("relation pair (" + std::to_string(l) + ", " + std::to_string(r) +
                                        ") out of bounds");
        std::sort(pairs_.begin(), pairs_.end());
        pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    }

    /// Builds from a row-major |left| x |right| membership matrix.
    template <class Matrix>
    static SimRelation from_matrix(int left_size, int right_size, const Matrix& m)
    {
        SimRelation r;
        r.left_size_ = left_size;
        r.right_size_ = right_size;
        for (int i = 0; i < left_size; ++i)
            for (int j = 0; j < right_size; ++j)
                if (m[static_cast<std::size_t>(i) * right_size + j]) r.pairs_.emplace_back(i, j);
        return r;
    }

    int left_size() const { return left_size_; }
    int right_size() const { return right_size_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

    bool contains(int l, int r) const { return std::binary_search(pairs_.begin(), pairs_.end(), std::pair{l, r}); }

    friend bool operator==(const SimRelation&, const SimRelation&) = default;

private:
    int left_size_ = 0;
    int right_size_ = 0;
    std::vector<std::pair<int, int>> pairs_;
};

/// `# pairs=N` followed by one `left<TAB>right` line per pair in ascending
/// index order. Without name tables the indices themselves are written.
inline std::string serialize_relation(const SimRelation& rel, const std::vector<std::string>* left_names = nullptr,
                                      const std::vector<std::string>* right_names = nullptr)
{
    std::string out = "# pairs=" + std::to_string(rel.size()) + "\n";
    for (auto [l, r] : rel.pairs()) {
        out += left_names ? (*left_names)[l] : std::to_string(l);
        out += '\t';
        out += right_names ? (*right_names)[r] : std::to_string(r);
        out += '\n';
    }
    return out;
}

namespace detail {

template <class Resolve>
SimRelation parse_relation_impl(std::string_view text, int left_size, int right_size, Resolve resolve)
{
    std::vector<std::pair<int, int>> pairs;
    std::optional<long> declared;
    int number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            constexpr std::string_view key = "# pairs=";
            if (line.substr(0, key.size()) == key) {
                long v = 0;
                auto digits = line.substr(key.size());
                auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
                if (ec != std::errc() || p != digits.data() + digits.size())
                    throw ParseError(number, "bad pair count");
                declared = v;
            }
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw ParseError(number, "expected '<left>\\t<right>'");
        pairs.emplace_back(resolve(std::string(line.substr(0, tab)), true, number),
                           resolve(std::string(line.substr(tab + 1)), false, number));
    }
    if (!declared) throw ParseError(0, "missing '# pairs=' header");
    if (*declared != static_cast<long>(pairs.size()))
        throw ParseError(0, "header declares " + std::to_string(*declared) + " pairs, found " +
                                std::to_string(pairs.size()));
    return SimRelation(left_size, right_size, std::move(pairs));
}

} // namespace detail

/// Reads a relation written with indices.
inline SimRelation parse_relation(std::string_view text, int left_size, int right_size)
{
    return detail::parse_relation_impl(text, left_size, right_size, [&](const std::string& s, bool left, int line) {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v < 0 || v >= (left ? left_size : right_size))
            throw ParseError(line, "bad state index '" + s + "'");
        return v;
    });
}

/// Reads a relation written with state names.
inline SimRelation parse_relation(std::string_view text, const std::vector<std::string>& left_names,
                                  const std::vector<std::string>& right_names)
{
    detail::NameTable lt("state"), rt("state");
    for (const auto& s : left_names) lt.intern(s);
    for (const auto& s : right_names) rt.intern(s);
    return detail::parse_relation_impl(text, static_cast<int>(left_names.size()),
                                       static_cast<int>(right_names.size()),
                                       [&](const std::string& s, bool left, int line) {
                                           return (left ? lt : rt).lookup(s, line);
                                       });
}

} // namespace altref
