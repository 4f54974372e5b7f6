// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Plans once on a scenario (builtin name or JSON file) with QMP and writes
// the solution as an SVG next to the working directory.
//
//   plan_scenario [scenario] [seed] [out.svg]

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "fiberdance/bench.hpp"

namespace fd = fiberdance;

int main(int argc, char** argv) {
    const std::string name = argc > 1 ? argv[1] : "slit_2d";
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 0;
    const std::string out = argc > 3 ? argv[3] : name + ".svg";

    fd::Scenario s;
    try {
        s = fd::resolve_scenario(name);
    } catch (const fd::ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    fd::RandomSource rng(seed);
    const auto res = fd::multilevel_plan(s.problem(), fd::PlannerKind::QMP, fd::PlannerConfig{}, fd::Ptc::seconds(10.0), rng);
    for (std::size_t k = 0; k < res.levels.size(); ++k) {
        const auto& lv = res.levels[k];
        std::cout << "level " << k + 1 << " (dim " << lv.dimension << "): " << lv.vertices << " vertices, "
                  << lv.patterns.frames << " dance frames";
        if (lv.first_section) std::cout << ", first section " << (*lv.first_section ? "found" : "not found");
        std::cout << "\n";
    }
    if (!res.solved) {
        std::cout << "no solution after " << res.wall_time << " s\n";
        return 2;
    }
    std::cout << "solved in " << res.wall_time << " s, " << res.path.size() << " states, cost " << res.cost << "\n";
    const std::size_t K = s.levels();
    std::ofstream(out) << fd::emit_svg(s.world, res.path, s.robot(K), 10, &s.space(K));
    std::cout << "wrote " << out << "\n";
    return 0;
}
