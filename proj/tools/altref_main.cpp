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

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace altref::cli;

    CLI::App app{"altref: simulation and alternating refinement relations between transition systems"};
    app.require_subcommand(1);

    RelationOptions rel;
    auto add_relation_args = [&rel](CLI::App* sub) {
        sub->add_option("kind", rel.kind, "altsim, fairaltsim, fairsim or sim")->required();
        sub->add_option("left", rel.left, "left (simulated) system file")->required();
        sub->add_option("right", rel.right, "right (simulating) system file")->required();
        sub->add_flag("--strict-game", rel.strict_game, "materialize every game vertex");
    };

    auto* compute = app.add_subcommand("compute", "compute the maximum relation");
    add_relation_args(compute);
    compute->add_option("--algo", rel.algo, "basic, game or iterative");
    compute->add_option("--out", rel.out, "relation output file");
    compute->add_flag("--assert-invariants", rel.assert_invariants, "check iterative-engine invariants");
    compute->add_flag("--dump-succ", rel.dump_succ, "print successor sets to stderr");

    auto* check = app.add_subcommand("check", "test whether the right initial state simulates the left one");
    add_relation_args(check);
    check->add_option("--algo", rel.algo, "basic, game or iterative");
    check->add_flag("--assert-invariants", rel.assert_invariants, "check iterative-engine invariants");
    check->add_flag("--dump-succ", rel.dump_succ, "print successor sets to stderr");

    auto* dot = app.add_subcommand("export-dot", "write the game graph in Graphviz format");
    add_relation_args(dot);
    dot->add_option("--out", rel.out, "output file");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen-random", "generate a random system");
    gen_cmd->add_option("--states", gen.spec.n_states)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--actions1", gen.spec.n_actions1)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--actions2", gen.spec.n_actions2)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--obs", gen.spec.n_obs)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--fair-density", gen.spec.fair_density)->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen.spec.seed);
    gen_cmd->add_flag("--ts", gen.ts, "emit a transition system");
    gen_cmd->add_option("--out", gen.out, "output file");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "compare the three alternating-simulation routes");
    bench_cmd->add_option("--min-states", bench.min_states);
    bench_cmd->add_option("--max-states", bench.max_states);
    bench_cmd->add_option("--actions1", bench.actions1);
    bench_cmd->add_option("--actions2", bench.actions2);
    bench_cmd->add_option("--obs", bench.obs);
    bench_cmd->add_option("--trials", bench.trials);
    bench_cmd->add_option("--seed", bench.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    if (*compute) return cmd_compute(rel, std::cout, std::cerr);
    if (*check) return cmd_check(rel, std::cout, std::cerr);
    if (*dot) return cmd_export_dot(rel, std::cout, std::cerr);
    if (*gen_cmd) return cmd_gen_random(gen, std::cout, std::cerr);
    return cmd_bench(bench, std::cout, std::cerr);
}
