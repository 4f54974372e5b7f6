// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// bench: run, summarize, render and check-admissibility subcommands.
// Exit codes: 0 success, 1 configuration error, 2 internal failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fiberdance/bench.hpp"

namespace fd = fiberdance;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilevel section-pattern planner benchmark"};
    app.require_subcommand(1);

    std::vector<std::string> scenarios;
    std::vector<std::string> planners{"QMP", "RRT"};
    std::size_t runs = 10;
    double cutoff = 10.0;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::size_t parallel = 1;
    std::string clock = "wall";
    bool no_wriggle = false, no_tunnel = false;

    auto* run = app.add_subcommand("run", "Run seeded planner trials and write CSV records");
    run->add_option("--scenario", scenarios, "Builtin scenario name or scenario file")->required();
    run->add_option("--planner", planners, "Planners: QRRT QMP RRT PRM")->delimiter(',');
    run->add_option("--runs", runs, "Runs per (scenario, planner)")->check(CLI::PositiveNumber);
    run->add_option("--cutoff", cutoff, "Cutoff per run in seconds")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Base seed (FIBERDANCE_SEED overrides)");
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--clock", clock, "wall or work (deterministic work units)")
        ->check(CLI::IsMember({"wall", "work"}));
    run->add_flag("--no-wriggle", no_wriggle, "Disable the wriggle pattern");
    run->add_flag("--no-tunnel", no_tunnel, "Disable the tunnel pattern");

    std::string summary_dir;
    auto* summarize = app.add_subcommand("summarize", "Print the averaged runtime table of a results directory");
    summarize->add_option("dir", summary_dir, "Directory holding results.csv")->required();

    std::string render_scenario, result_file, svg_out;
    std::size_t ghosts = 8;
    auto* render = app.add_subcommand("render", "Render a solution path as SVG");
    render->add_option("--scenario", render_scenario, "Builtin scenario name or scenario file")->required();
    render->add_option("--result", result_file, "Path file written by 'run' (one state per line)")->required();
    render->add_option("--ghosts", ghosts, "Number of ghost poses");
    render->add_option("--out", svg_out, "Output SVG file")->required();

    std::string adm_scenario;
    std::size_t samples = 10000;
    auto* admiss = app.add_subcommand("check-admissibility", "Sample every bundle of a scenario ladder");
    admiss->add_option("--scenario", adm_scenario, "Builtin scenario name or scenario file")->required();
    admiss->add_option("--samples", samples, "Samples per level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            fd::BenchConfig config;
            config.scenarios = scenarios;
            config.planners.clear();
            for (const auto& p : planners) {
                const auto kind = fd::parse_planner(p);
                if (!kind) throw ConfigError("unknown planner '" + p + "'");
                config.planners.push_back(*kind);
            }
            config.runs = runs;
            config.cutoff = cutoff;
            config.seed = seed;
            if (const char* env = std::getenv("FIBERDANCE_SEED")) {
                try {
                    config.seed = std::stoull(env);
                } catch (const std::exception&) {
                    throw ConfigError("FIBERDANCE_SEED is not an unsigned integer");
                }
            }
            config.out_dir = out_dir;
            config.parallel = parallel;
            config.clock = clock == "work" ? fd::ClockKind::Work : fd::ClockKind::Wall;
            config.planner.dance.enable_wriggle = !no_wriggle;
            config.planner.dance.enable_tunnel = !no_tunnel;
            for (const auto& s : config.scenarios) {
                try {
                    (void)fd::resolve_scenario(s);
                } catch (const fd::ScenarioError& e) {
                    throw ConfigError(e.what());
                }
            }
            const auto records = fd::run_benchmark(config, [](const fd::BenchRecord& r) {
                std::cerr << r.scenario << ' ' << r.planner << " seed " << r.seed << ": "
                          << (r.solved ? "solved" : "unsolved") << " in " << r.wall_time << " s"
                          << (r.error.empty() ? "" : " (error: " + r.error + ")") << "\n";
            });
            std::cout << fd::summarize(records);
            return 0;
        }
        if (*summarize) {
            const auto text = read_file((std::filesystem::path(summary_dir) / "results.csv").string());
            std::cout << fd::summarize(fd::parse_csv(text));
            return 0;
        }
        if (*render) {
            fd::Scenario s;
            try {
                s = fd::resolve_scenario(render_scenario);
            } catch (const fd::ScenarioError& e) {
                throw ConfigError(e.what());
            }
            const auto path = fd::read_path_file(result_file);
            if (path.empty()) throw ConfigError("path file is empty");
            for (const auto& x : path)
                if (x.size() != s.space(s.levels()).dimension()) throw ConfigError("path dimension does not match scenario");
            std::ofstream(svg_out) << fd::emit_svg(s.world, path, s.robot(s.levels()), ghosts, &s.space(s.levels()));
            return 0;
        }
        if (*admiss) {
            fd::Scenario s;
            try {
                s = fd::resolve_scenario(adm_scenario);
            } catch (const fd::ScenarioError& e) {
                throw ConfigError(e.what());
            }
            std::size_t total = 0;
            for (std::size_t k = 1; k < s.levels(); ++k) {
                fd::RandomSource rng(0);
                const auto rep = fd::check_admissibility(s.ladder, k, samples, rng);
                std::cout << "level " << k << " -> " << k + 1 << ": " << rep.violations << " violations"
                          << (s.inflated[k - 1] ? " (inflated)" : "") << "\n";
                if (!s.inflated[k - 1]) total += rep.violations;
            }
            std::cout << "non-inflated violations: " << total << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
