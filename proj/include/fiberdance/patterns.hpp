// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Section patterns. Each one pushes a HeadPointer along a path restriction
// and records every motion it certifies as an edge of the level's roadmap.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fiberdance/budget.hpp"
#include "fiberdance/restriction.hpp"
#include "fiberdance/roadmap.hpp"

namespace fiberdance {

struct PatternParams {
    double delta_base = 0.0;   // step along the base path
    double delta_fiber = 0.0;  // fiber neighbourhood radius
    std::size_t s_max = 100;   // sampling attempts before a pattern gives up

    /// delta = 0.01 x extent of the respective space.
    [[nodiscard]] static PatternParams defaults(const Bundle& bundle) {
        PatternParams p;
        p.delta_base = 0.01 * bundle.base().extent();
        p.delta_fiber = 0.01 * bundle.fiber().extent();
        return p;
    }
};

enum class PatternKind : std::uint8_t { Manhattan, Wriggle, Tunnel, TripleStep };

[[nodiscard]] constexpr const char* to_string(PatternKind k) noexcept {
    switch (k) {
        case PatternKind::Manhattan: return "manhattan";
        case PatternKind::Wriggle: return "wriggle";
        case PatternKind::Tunnel: return "tunnel";
        case PatternKind::TripleStep: return "triplestep";
    }
    return "?";
}

struct PatternEvent {
    std::size_t frame = 0;  // dance frame that issued the call
    std::size_t depth = 0;
    PatternKind kind = PatternKind::Manhattan;
    bool success = false;
};

/// Counters shared by every pattern call on one level.
struct PatternStats {
    std::size_t calls[4] = {0, 0, 0, 0};
    std::size_t successes[4] = {0, 0, 0, 0};
    std::size_t frames = 0;
    std::size_t max_depth = 0;
    std::size_t max_fiber_samples_per_frame = 0;
    std::size_t tunnel_iterations = 0;
    std::size_t triple_iterations = 0;  // backward-walk iterations, summed
    std::vector<PatternEvent> log;

    [[nodiscard]] std::size_t calls_of(PatternKind k) const { return calls[static_cast<int>(k)]; }
    [[nodiscard]] std::size_t successes_of(PatternKind k) const { return successes[static_cast<int>(k)]; }
};

struct PatternContext {
    HeadPointer& head;
    const State& goal;
    RoadmapGraph& graph;
    PatternParams params;
    RandomSource& rng;
    PatternStats& stats;
    const Budget* budget = nullptr;
    double goal_tolerance = 0.0;

    std::size_t frame = 0;  // set by the dance
    std::size_t depth = 0;

    [[nodiscard]] const PathRestriction& restriction() const { return head.restriction(); }
    [[nodiscard]] const Bundle& bundle() const { return head.restriction().bundle; }
    [[nodiscard]] const BasePath& path() const { return head.restriction().base_path; }
    [[nodiscard]] const ValidityChecker& checker() const { return head.restriction().checker; }
    [[nodiscard]] bool out_of_time() const { return budget && budget->expired(); }

    [[nodiscard]] bool reachable(const State& a, const State& b) const {
        return check_motion(checker(), bundle().total(), a, b).reached;
    }
};

namespace detail {

inline void record(PatternContext& ctx, PatternKind kind, bool ok) {
    const auto i = static_cast<int>(kind);
    ++ctx.stats.calls[i];
    if (ok) ++ctx.stats.successes[i];
    ctx.stats.log.push_back({ctx.frame, ctx.depth, kind, ok});
}

}  // namespace detail

/// Hermite smoothstep schedule from lo (ctr = 0) to hi (ctr >= s_max).
class SmoothSchedule {
public:
    SmoothSchedule(double lo, double hi, std::size_t s_max) : lo_(lo), hi_(hi), s_max_(s_max) {
        require(lo <= hi, "smooth_parameter: lo <= hi");
        require(s_max >= 1, "smooth_parameter: s_max >= 1");
    }
    [[nodiscard]] double operator()(double ctr) const {
        const double t = std::clamp(ctr / static_cast<double>(s_max_), 0.0, 1.0);
        return lo_ + (hi_ - lo_) * (t * t * (3.0 - 2.0 * t));
    }

private:
    double lo_, hi_;
    std::size_t s_max_;
};

[[nodiscard]] inline SmoothSchedule smooth_parameter(double lo, double hi, std::size_t s_max) {
    return {lo, hi, s_max};
}

/// Keeps the head's fiber fixed, sweeps the rest of the base path and then
/// heads for the goal. The head ends on the last valid state of that sweep.
inline bool manhattan_pattern(PatternContext& ctx) {
    const Bundle& bundle = ctx.bundle();
    const BasePath& path = ctx.path();
    const double L = path.length();
    const State fiber = bundle.project_fiber(ctx.head.state());

    std::vector<State> s;
    std::vector<double> loc;
    double l = ctx.head.location();
    while (l < L) {
        s.push_back(bundle.lift(path.at(l), fiber));
        loc.push_back(l);
        l += ctx.params.delta_base;
    }
    s.push_back(ctx.goal);
    loc.push_back(L);
    if (s.front() != ctx.head.state()) {
        s.insert(s.begin(), ctx.head.state());
        loc.insert(loc.begin(), ctx.head.location());
    }

    const MotionResult r = check_motion(ctx.checker(), bundle.total(), std::span<const State>(s));
    const std::size_t last = s.size() == 1 ? 0 : r.last_segment;
    for (std::size_t i = 0; i < last; ++i) ctx.graph.add_edge(s[i], s[i + 1], EdgeOrigin::Manhattan);
    double new_loc = loc[last];
    if (r.last_valid != s[last]) {
        ctx.graph.add_edge(s[last], r.last_valid, EdgeOrigin::Manhattan);
        new_loc = r.reached ? L : loc[last] + r.segment_fraction * (loc[last + 1] - loc[last]);
    }
    if (r.reached) new_loc = L;
    ctx.head.update(r.last_valid, new_loc);

    const bool ok = has_reached_goal(ctx.head, ctx.goal, ctx.goal_tolerance);
    detail::record(ctx, PatternKind::Manhattan, ok);
    return ok;
}

/// Random walk along the fibers: each step moves delta_base forward on the
/// base path and at most delta_fiber in the fiber.
inline bool wriggle_pattern(PatternContext& ctx) {
    const Bundle& bundle = ctx.bundle();
    const BasePath& path = ctx.path();
    const double L = path.length();
    double l = ctx.head.location() + ctx.params.delta_base;
    std::size_t steps = 0;
    while (l < L && !ctx.out_of_time()) {
        const State xb = path.at(l);
        const State xh = ctx.head.state();
        const State fh = bundle.project_fiber(xh);
        std::size_t ctr = 0;
        while (ctr < ctx.params.s_max) {
            const State xf = bundle.fiber().sample_uniform_near(fh, ctx.params.delta_fiber, ctx.rng);
            State x = bundle.lift(xb, xf);
            if (ctx.checker()(x) && ctx.reachable(xh, x)) {
                ctx.graph.add_edge(xh, x, EdgeOrigin::Wriggle);
                ctx.head.update(std::move(x), l);
                ++steps;
                break;
            }
            ++ctr;
        }
        if (ctr >= ctx.params.s_max) break;
        l += ctx.params.delta_base;
    }
    detail::record(ctx, PatternKind::Wriggle, steps > 0);
    return steps > 0;
}

struct TunnelEnd {
    State state;
    double location = 0.0;
};

/// First valid lift of the head's fiber past a blocked stretch of the base
/// path. With no blocked stretch ahead, the lift one step ahead is returned.
[[nodiscard]] inline std::optional<TunnelEnd> tunnel_end(const PatternContext& ctx) {
    const Bundle& bundle = ctx.bundle();
    const BasePath& path = ctx.path();
    const double L = path.length();
    const State fiber = bundle.project_fiber(ctx.head.state());
    std::optional<TunnelEnd> first;
    bool blocked = false;
    double l = ctx.head.location() + ctx.params.delta_base;
    for (bool done = false; !done;) {
        if (l >= L) {
            l = L;
            done = true;
        }
        State x = bundle.lift(path.at(l), fiber);
        const bool valid = ctx.checker()(x);
        if (!valid) {
            blocked = true;
        } else if (blocked) {
            return TunnelEnd{std::move(x), l};
        } else if (!first) {
            first = TunnelEnd{std::move(x), l};
        }
        l += ctx.params.delta_base;
    }
    if (blocked) return std::nullopt;
    return first;
}

/// Steps off the restriction around an infeasible stretch, accepting only
/// samples that get strictly closer to the tunnel end.
inline bool tunnel_pattern(PatternContext& ctx) {
    const auto end = tunnel_end(ctx);
    if (!end) {
        detail::record(ctx, PatternKind::Tunnel, false);
        return false;
    }
    const Bundle& bundle = ctx.bundle();
    const StateSpace& total = bundle.total();
    const BasePath& path = ctx.path();
    const auto eps = smooth_parameter(0.0, 10.0 * ctx.params.delta_base, ctx.params.s_max);

    State xh = ctx.head.state();
    const State fh = bundle.project_fiber(xh);
    double d_best = total.distance(xh, end->state);
    double l = ctx.head.location();
    while (l <= end->location && !ctx.out_of_time()) {
        ++ctx.stats.tunnel_iterations;
        if (ctx.reachable(xh, end->state)) {
            ctx.graph.add_edge(xh, end->state, EdgeOrigin::Tunnel);
            ctx.head.update(end->state, end->location);
            detail::record(ctx, PatternKind::Tunnel, true);
            return true;
        }
        l += ctx.params.delta_base;
        const State centre = path.at(l);
        std::size_t ctr = 0;
        while (ctr < ctx.params.s_max) {
            const State xb = bundle.base().sample_uniform_near(centre, eps(static_cast<double>(ctr)), ctx.rng);
            const State xf = bundle.fiber().sample_uniform_near(fh, ctx.params.delta_fiber, ctx.rng);
            State x = bundle.lift(xb, xf);
            if (ctx.checker()(x)) {
                const double d = total.distance(x, end->state);
                if (d < d_best && ctx.reachable(xh, x)) {
                    ctx.graph.add_edge(xh, x, EdgeOrigin::Tunnel);
                    xh = std::move(x);
                    d_best = d;
                    break;
                }
            }
            ++ctr;
        }
        if (ctr >= ctx.params.s_max) break;
    }
    detail::record(ctx, PatternKind::Tunnel, false);
    return false;
}

/// Backstep along the restriction, sidestep in the fiber towards x, then
/// step forward onto x. x must be valid and lie one base step ahead.
inline bool triple_step_pattern(PatternContext& ctx, const State& x) {
    require(ctx.checker()(x), "triple_step_pattern: target must be valid");
    const Bundle& bundle = ctx.bundle();
    const BasePath& path = ctx.path();
    const State xh = ctx.head.state();
    const double forward = std::min(ctx.head.location() + ctx.params.delta_base, path.length());
    const State f1 = bundle.project_fiber(xh);
    const State f2 = bundle.project_fiber(x);
    const State fm = bundle.fiber().interpolate(f1, f2, 0.5);

    double l = ctx.head.location();
    while (l > ctx.params.delta_base) {
        ++ctx.stats.triple_iterations;
        l -= ctx.params.delta_base;
        const State xb = path.at(l);
        if (!ctx.checker()(bundle.lift(xb, fm))) continue;
        const State x1 = bundle.lift(xb, f1);
        const State x2 = bundle.lift(xb, f2);
        if (!ctx.reachable(x1, x2)) continue;
        if (ctx.reachable(xh, x1) && ctx.reachable(x2, x)) {
            ctx.graph.add_edge(xh, x1, EdgeOrigin::TripleStep);
            ctx.graph.add_edge(x1, x2, EdgeOrigin::TripleStep);
            ctx.graph.add_edge(x2, x, EdgeOrigin::TripleStep);
            ctx.head.update(x, forward);
            detail::record(ctx, PatternKind::TripleStep, true);
            return true;
        }
        break;
    }
    detail::record(ctx, PatternKind::TripleStep, false);
    return false;
}

}  // namespace fiberdance
