// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// PatternDance: cheapest pattern first, recursing whenever a pattern moved
// the head, plus FindSection which sets a dance up on the current base path.

#pragma once

#include <cstddef>
#include <optional>

#include "fiberdance/patterns.hpp"

namespace fiberdance {

struct DanceParams {
    std::size_t d_max = 3;
    std::size_t b_max = 500;
    std::optional<PatternParams> pattern;  // unset: PatternParams::defaults(bundle)
    bool enable_wriggle = true;
    bool enable_tunnel = true;
};

inline bool pattern_dance(PatternContext& ctx, const DanceParams& dance, std::size_t depth = 0) {
    ctx.frame = ++ctx.stats.frames;
    ctx.depth = depth;
    ctx.stats.max_depth = std::max(ctx.stats.max_depth, depth);
    if (ctx.out_of_time()) return false;

    if (manhattan_pattern(ctx)) return true;
    if (depth >= dance.d_max) return false;

    if ((dance.enable_wriggle && wriggle_pattern(ctx)) || (dance.enable_tunnel && tunnel_pattern(ctx)))
        return pattern_dance(ctx, dance, depth + 1);

    const Bundle& bundle = ctx.bundle();
    const State xb = ctx.path().at(ctx.head.location() + ctx.params.delta_base);
    const std::size_t frame = ctx.frame;
    std::size_t samples = 0;
    for (std::size_t j = 0; j < dance.b_max && !ctx.out_of_time(); ++j) {
        ++samples;
        ctx.stats.max_fiber_samples_per_frame = std::max(ctx.stats.max_fiber_samples_per_frame, samples);
        const State x = bundle.lift(xb, bundle.fiber().sample_uniform(ctx.rng));
        if (!ctx.checker()(x) || ctx.reachable(ctx.head.state(), x)) continue;
        if (triple_step_pattern(ctx, x)) return pattern_dance(ctx, dance, depth + 1);
        ctx.frame = frame;
        ctx.depth = depth;
    }
    return false;
}

/// Everything find_section needs from the planner for one level k >= 2.
struct SectionProblem {
    const RoadmapGraph& base_graph;  // G_{k-1}, start/goal set
    RoadmapGraph& graph;             // G_k, start vertex set
    const Bundle& bundle;            // X_k -> X_{k-1}
    ValidityChecker checker;         // constraint on X_k
    State start;
    State goal;
    double goal_tolerance = 0.0;
};

struct SectionOutcome {
    bool found = false;
    bool had_base_path = false;
    double base_path_length = 0.0;
};

/// Runs a pattern dance over the restriction of the current shortest base
/// path. Edges found along the way stay in the graph even on failure.
inline SectionOutcome find_section(SectionProblem& problem, const DanceParams& dance, RandomSource& rng,
                                   PatternStats& stats, const Budget* budget = nullptr) {
    SectionOutcome out;
    auto waypoints = extract_path(problem.base_graph);
    if (!waypoints) return out;
    out.had_base_path = true;
    PathRestriction restriction{BasePath(problem.bundle.base(), std::move(*waypoints)), problem.bundle,
                                problem.checker};
    out.base_path_length = restriction.base_path.length();
    HeadPointer head(restriction, problem.start, 0.0);
    PatternContext ctx{head,
                       problem.goal,
                       problem.graph,
                       dance.pattern.value_or(PatternParams::defaults(problem.bundle)),
                       rng,
                       stats,
                       budget,
                       problem.goal_tolerance};
    problem.graph.find_or_add_vertex(problem.start);
    out.found = pattern_dance(ctx, dance);
    return out;
}

}  // namespace fiberdance
