// Copyright 2026 The faultgrover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "faultgrover/faultgrover.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAssertion = 3;
constexpr int kExitBudget = 4;

struct RawFlags {
    std::string n = "1024";
    std::string k = "3";
    std::string p = "0.5";
    std::uint64_t t_max = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    bool oracle_check = false;
    double merge_tol = 0.0;
    std::uint64_t samples = 100'000;
    std::uint64_t max_branches = 1u << 20;
    bool strict = false;
    bool window = false;
};

void add_common_flags(CLI::App* sub, RawFlags& f) {
    sub->add_option("--n", f.n, "item counts: comma list or lo:hi:step")->capture_default_str();
    sub->add_option("--k", f.k, "marked counts (the last marked item is faulty)")
        ->capture_default_str();
    sub->add_option("--p", f.p, "fault probabilities")->capture_default_str();
    sub->add_option("--t-max", f.t_max, "number of steps");
    sub->add_option("--seed", f.seed, "base seed for Monte Carlo sampling");
    sub->add_option("--out", f.out, "output path (default: stdout)");
    sub->add_option("--format", f.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_flag("--oracle-check", f.oracle_check,
                  "cross-check instances with n <= 32 against the full-matrix oracle");
    sub->add_option("--merge-tol", f.merge_tol,
                    "also enumerate fault words exactly, merging branches closer than this");
    sub->add_option("--samples", f.samples, "Monte Carlo trajectories")->capture_default_str();
    sub->add_option("--max-branches", f.max_branches, "cap for exact enumeration")
        ->capture_default_str();
    sub->add_flag("--strict", f.strict, "exit with status 3 if any asserted row fails");
    sub->add_flag("--window", f.window, "theorem1: also scan t between 1x and 1.25x");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace faultgrover;

    CLI::App app{"Grover search with one faulty marked item: experiments and bounds"};
    app.require_subcommand(1);
    RawFlags flags;
    const char* names[] = {"simulate", "theorem1", "limit", "bounds", "montecarlo"};
    const char* help[] = {
        "class probabilities and distance to the limit for t = 0..t_max",
        "success probability after the extended run lengths",
        "convergence to the limiting mixed state",
        "spherical-geometry constants behind the search bound",
        "sampled trajectories against exact probabilities",
    };
    for (int i = 0; i < 5; ++i) {
        add_common_flags(app.add_subcommand(names[i], help[i]), flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    ExperimentConfig cfg;
    try {
        const auto* sub = app.get_subcommands().front();
        cfg.experiment = sub->get_name();
        cfg.ns = parse_count_grid(flags.n);
        cfg.ks = parse_count_grid(flags.k);
        cfg.ps = parse_real_grid(flags.p);
        if (sub->count("--t-max") > 0) cfg.t_max = flags.t_max;
        if (sub->count("--seed") > 0) cfg.seed = flags.seed;
        if (sub->count("--merge-tol") > 0) cfg.merge_tol = flags.merge_tol;
        cfg.out = flags.out;
        cfg.format = flags.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        cfg.oracle_check = flags.oracle_check;
        cfg.samples = flags.samples;
        cfg.max_branches = flags.max_branches;
        cfg.strict = flags.strict;
        cfg.window = flags.window;

        const auto result = run_experiment(cfg);
        if (cfg.out.empty()) {
            write_table(result.table, std::cout, cfg.format);
        } else {
            write_table_file(result.table, cfg.out, cfg.format);
        }
        if (result.budget_exceeded) {
            std::cerr << "error: step budget or branch cap exceeded\n";
            return kExitBudget;
        }
        if (cfg.strict && !result.assertions_ok) {
            std::cerr << "error: asserted rows failed\n";
            return kExitAssertion;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegenerateInstance& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BranchExplosion& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
