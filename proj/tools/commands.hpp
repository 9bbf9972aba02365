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

#include "altref/altref.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace altref::cli {

enum ExitCode : int { kOk = 0, kNotRelated = 1, kError = 2 };

enum class Kind { AltSim, FairAltSim, FairSim, Sim };

inline std::optional<Kind> parse_kind(const std::string& s)
{
    if (s == "altsim") return Kind::AltSim;
    if (s == "fairaltsim") return Kind::FairAltSim;
    if (s == "fairsim") return Kind::FairSim;
    if (s == "sim") return Kind::Sim;
    return std::nullopt;
}

inline std::optional<Algo> parse_algo(const std::string& s)
{
    if (s == "basic") return Algo::Basic;
    if (s == "game") return Algo::Game;
    if (s == "iterative") return Algo::Iterative;
    return std::nullopt;
}

struct RelationOptions {
    std::string kind;
    std::string left;
    std::string right;
    std::string algo = "game";
    std::string out;
    bool assert_invariants = false;
    bool dump_succ = false;
    bool strict_game = false;
};

struct GenOptions {
    RandomSpec spec;
    bool ts = false;
    std::string out;
};

struct BenchOptions {
    int min_states = 1;
    int max_states = 5;
    int actions1 = 3;
    int actions2 = 3;
    int obs = 2;
    int trials = 10;
    std::uint64_t seed = 1;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

inline System load(const std::string& path)
{
    try {
        return parse_system(read_file(path));
    } catch (const ParseError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

// Conversions between the four file kinds. A system without a fair line is
// treated as fully fair; fairness is dropped for the plain relations.

inline bool is_transition_system(const System& s) { return std::holds_alternative<Ts>(s) || std::holds_alternative<FairTs>(s); }

inline Ts as_ts(const System& s, const std::string& path)
{
    if (auto* t = std::get_if<Ts>(&s)) return *t;
    if (auto* f = std::get_if<FairTs>(&s)) return f->ts;
    throw UsageError(path + ": expected a ts file");
}

inline FairTs as_fair_ts(const System& s, const std::string& path)
{
    if (auto* f = std::get_if<FairTs>(&s)) return *f;
    Ts t = as_ts(s, path);
    const int n = t.num_states();
    return FairTs{std::move(t), all_states(n)};
}

inline Ats as_ats(const System& s)
{
    if (auto* k = std::get_if<Ats>(&s)) return *k;
    if (auto* f = std::get_if<FairAts>(&s)) return f->ats;
    if (auto* t = std::get_if<Ts>(&s)) return ts_to_ats(*t);
    return ts_to_ats(std::get<FairTs>(s).ts);
}

inline FairAts as_fair_ats(const System& s)
{
    if (auto* f = std::get_if<FairAts>(&s)) return *f;
    if (auto* f = std::get_if<FairTs>(&s)) return ts_to_ats(*f);
    Ats k = as_ats(s);
    const int n = k.num_states();
    return FairAts{std::move(k), all_states(n)};
}

inline const std::vector<std::string>& state_names(const System& s)
{
    return std::visit(
        [](const auto& x) -> const std::vector<std::string>& {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Ts>) return x.states;
            else if constexpr (std::is_same_v<T, FairTs>) return x.ts.states;
            else if constexpr (std::is_same_v<T, Ats>) return x.states;
            else return x.ats.states;
        },
        s);
}

inline int init_state(const System& s)
{
    return std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Ts> || std::is_same_v<T, Ats>) return x.init;
            else if constexpr (std::is_same_v<T, FairTs>) return x.ts.init;
            else return x.ats.init;
        },
        s);
}

inline void dump_succ(const std::string& side, const Ats& k, std::ostream& err)
{
    const auto idx = build_succ_index(k);
    err << "# " << side << " successor sets\n";
    for (int t = 0; t < idx.count(); ++t) {
        err << t << ": {";
        bool first = true;
        for (int w : idx.members(t)) {
            err << (first ? "" : ",") << k.states[w];
            first = false;
        }
        err << "}\n";
    }
}

inline SimRelation compute_relation(const RelationOptions& o, const System& left, const System& right,
                                    std::ostream& err)
{
    const auto kind = parse_kind(o.kind);
    if (!kind) throw UsageError("unknown kind '" + o.kind + "' (expected altsim, fairaltsim, fairsim or sim)");
    const auto algo = parse_algo(o.algo);
    if (!algo) throw UsageError("unknown algorithm '" + o.algo + "' (expected basic, game or iterative)");
    if ((*kind == Kind::FairAltSim || *kind == Kind::FairSim) && *algo != Algo::Game)
        throw UsageError("kind " + o.kind + " supports only --algo game");
    if ((*kind == Kind::Sim || *kind == Kind::FairSim) && (!is_transition_system(left) || !is_transition_system(right)))
        throw UsageError("kind " + o.kind + " needs two ts files");

    if (o.dump_succ) {
        dump_succ("left", as_ats(left), err);
        dump_succ("right", as_ats(right), err);
    }
    const IterativeOptions iopt{o.assert_invariants};
    switch (*kind) {
    case Kind::FairAltSim: return fairaltsim(as_fair_ats(left), as_fair_ats(right), o.strict_game);
    case Kind::FairSim: return fairsim(as_fair_ts(left, o.left), as_fair_ts(right, o.right), o.strict_game);
    default: break;
    }
    const Ats k = as_ats(left);
    const Ats kp = as_ats(right);
    if (*algo == Algo::Game) return altsim_game(k, kp, o.strict_game);
    return altsim(k, kp, *algo, iopt);
}

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const InvariantViolation& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kError;
}

inline int cmd_compute(const RelationOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const System left = load(o.left);
        const System right = load(o.right);
        const SimRelation rel = compute_relation(o, left, right, err);
        const std::string text = serialize_relation(rel, &state_names(left), &state_names(right));
        const std::string summary = "pairs=" + std::to_string(rel.size()) + " left=" +
                                    std::to_string(rel.left_size()) + " right=" + std::to_string(rel.right_size());
        if (o.out.empty()) {
            out << text;
            err << summary << "\n";
        } else {
            write_file(o.out, text);
            out << summary << "\n";
        }
        return static_cast<int>(kOk);
    });
}

inline int cmd_check(const RelationOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const System left = load(o.left);
        const System right = load(o.right);
        const SimRelation rel = compute_relation(o, left, right, err);
        const bool related = rel.contains(init_state(left), init_state(right));
        out << (related ? "related" : "not-related") << "\n";
        return static_cast<int>(related ? kOk : kNotRelated);
    });
}

inline int cmd_export_dot(const RelationOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto kind = parse_kind(o.kind);
        if (!kind) throw UsageError("unknown kind '" + o.kind + "'");
        const System left = load(o.left);
        const System right = load(o.right);
        std::string dot;
        switch (*kind) {
        case Kind::FairAltSim: {
            auto g = build_fairaltsim_game(as_fair_ats(left), as_fair_ats(right), o.strict_game);
            dot = to_dot(g.arena, &g.decode, "fairaltsim");
            break;
        }
        case Kind::FairSim: {
            auto g = build_fairsim_game(as_fair_ts(left, o.left), as_fair_ts(right, o.right), o.strict_game);
            dot = to_dot(g.arena, &g.decode, "fairsim");
            break;
        }
        default: {
            if (*kind == Kind::Sim && (!is_transition_system(left) || !is_transition_system(right)))
                throw UsageError("kind sim needs two ts files");
            const Ats k = as_ats(left);
            const Ats kp = as_ats(right);
            require_valid(k);
            require_valid(kp);
            auto g = build_altsim_game(k, kp, build_succ_index(k), build_succ_index(kp), o.strict_game);
            dot = to_dot(g.arena, &g.decode, "altsim");
            break;
        }
        }
        if (o.out.empty())
            out << dot;
        else
            write_file(o.out, dot);
        return static_cast<int>(kOk);
    });
}

inline int cmd_gen_random(const GenOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const std::string text = serialize_system(random_system(o.spec, o.ts));
        if (o.out.empty())
            out << text;
        else
            write_file(o.out, text);
        return static_cast<int>(kOk);
    });
}

struct BenchRow {
    std::uint64_t seed = 0;
    int left_states = 0;
    int right_states = 0;
    std::size_t pairs = 0;
    double basic_ms = 0, game_ms = 0, iterative_ms = 0;
    std::size_t arena_vertices = 0, arena_edges = 0, arena_cells = 0;
    IterativeStats stats;
};

inline std::string bench_header()
{
    return "seed\tleft\tright\tpairs\tbasic_ms\tgame_ms\titerative_ms\tarena_V\tarena_E\tarena_cells\t"
           "iter_peak_cells\twhile\tsucc_outer\tsucc_pairs\tsucc_updates\tprune_outer\tprune_pairs\tprune_updates\n";
}

inline std::string bench_line(const BenchRow& r)
{
    auto frac = [](std::size_t v, std::size_t c) { return std::to_string(v) + "/" + std::to_string(c); };
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    const auto& s = r.stats;
    os << r.seed << '\t' << r.left_states << '\t' << r.right_states << '\t' << r.pairs << '\t' << r.basic_ms << '\t'
       << r.game_ms << '\t' << r.iterative_ms << '\t' << r.arena_vertices << '\t' << r.arena_edges << '\t'
       << r.arena_cells << '\t' << s.peak_cells << '\t' << frac(s.while_iterations, s.while_ceiling) << '\t'
       << frac(s.succ_outer, s.succ_outer_ceiling) << '\t' << frac(s.succ_pairs, s.succ_pairs_ceiling) << '\t'
       << frac(s.succ_updates, s.succ_updates_ceiling) << '\t' << frac(s.prune_outer, s.prune_outer_ceiling) << '\t'
       << frac(s.prune_pairs, s.prune_pairs_ceiling) << '\t' << frac(s.prune_updates, s.prune_updates_ceiling)
       << '\n';
    return os.str();
}

/// Runs one bench instance; returns false on disagreement or ceiling breach.
inline bool bench_instance(const BenchOptions& o, std::uint64_t seed, int n, int np, BenchRow& row, std::string& why)
{
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
    const Ats k = random_ats({n, o.actions1, o.actions2, o.obs, 0.0, seed});
    const Ats kp = random_ats({np, o.actions1, o.actions2, o.obs, 0.0, RandomStream::splitmix64(seed)});
    row.seed = seed;
    row.left_states = n;
    row.right_states = np;

    auto t0 = clock::now();
    const SimRelation basic = altsim_basic(k, kp);
    auto t1 = clock::now();
    const auto idx = build_succ_index(k);
    const auto idxp = build_succ_index(kp);
    const auto game = build_altsim_game(k, kp, idx, idxp);
    const SimRelation via_game = relation_from_winning(game.decode, solve_reachability(game.arena).win2);
    auto t2 = clock::now();
    const SimRelation iterative = altsim_iterative(k, kp, {}, &row.stats);
    auto t3 = clock::now();

    row.pairs = basic.size();
    row.basic_ms = ms(t1 - t0);
    row.game_ms = ms(t2 - t1);
    row.iterative_ms = ms(t3 - t2);
    row.arena_vertices = static_cast<std::size_t>(game.arena.num_vertices());
    row.arena_edges = game.arena.num_edges();
    row.arena_cells = game.arena.cells() + idx.cells() + idxp.cells();
    if (!(basic == via_game) || !(basic == iterative)) {
        why = "relations disagree";
        return false;
    }
    if (!row.stats.within_ceilings()) {
        why = "loop counter above its ceiling";
        return false;
    }
    return true;
}

inline int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (o.min_states < 1 || o.max_states < o.min_states || o.trials < 1 || o.actions1 < 1 || o.actions2 < 1 ||
            o.obs < 1)
            throw UsageError("invalid bench ranges");
        out << bench_header();
        RandomStream seeds(o.seed, 2);
        for (int n = o.min_states; n <= o.max_states; ++n) {
            for (int t = 0; t < o.trials; ++t) {
                const std::uint64_t seed = seeds.bits();
                BenchRow row;
                std::string why;
                if (!bench_instance(o, seed, n, n, row, why)) {
                    out << bench_line(row);
                    err << "error: " << why << " on instance seed=" << seed << " states=" << n
                        << " (actions1=" << o.actions1 << " actions2=" << o.actions2 << " obs=" << o.obs << ")\n";
                    return static_cast<int>(kError);
                }
                out << bench_line(row);
            }
        }
        return static_cast<int>(kOk);
    });
}

} // namespace altref::cli
