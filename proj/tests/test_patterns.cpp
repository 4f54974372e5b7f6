#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "fiberdance/pattern_dance.hpp"
#include "fiberdance/scenario.hpp"
#include "oracles.hpp"

using namespace fiberdance;

namespace {

using Pred = std::function<bool(const State&)>;

StateSpace plane() { return StateSpace::euclidean({-2, -2}, {2, 2}); }
StateSpace se2() { return StateSpace::product({plane(), StateSpace::planar_rotation()}, {1.0, 0.4}); }

/// Everything a pattern call needs, owned in one place.
struct Rig {
    Pred pred;
    Pred exact;  // oracle geometry when pred is padded
    PathRestriction restriction;
    RoadmapGraph graph;
    RandomSource rng;
    PatternStats stats;
    State goal;
    HeadPointer head;
    PatternContext ctx;

    Rig(Pred p, std::vector<State> base_waypoints, State start, double start_loc, State goal_state,
        PatternParams params = {0.02, 0.05, 100}, std::uint64_t seed = 0)
        : pred(std::move(p)),
          restriction{BasePath(plane(), std::move(base_waypoints)), Bundle(se2(), plane(), {true, true, false}),
                      ValidityChecker{pred, 1e-3}},
          graph(se2()),
          rng(seed),
          goal(std::move(goal_state)),
          head(restriction, std::move(start), start_loc),
          ctx{head, goal, graph, params, rng, stats, nullptr, 1e-9} {}

    /// Every edge of the given kinds passes the dense oracle.
    [[nodiscard]] bool edges_sound(double step = 1e-4) const {
        for (const auto& e : graph.edges()) {
            if (!is_pattern_edge(e.origin)) continue;
            if (!oracle::motion_ok(exact ? exact : pred, se2(), graph.state(e.a), graph.state(e.b), step)) return false;
        }
        return true;
    }
};

Pred free_pred() {
    return [](const State&) { return true; };
}

}  // namespace

// ── Manhattan ────────────────────────────────────────────────────────────────

TEST(Manhattan, FreeRestrictionReachesGoal) {
    Rig r(free_pred(), {{-1, 0}, {1, 0}}, {-1, 0, 0.3}, 0.0, {1, 0, 0.3});
    EXPECT_TRUE(manhattan_pattern(r.ctx));
    EXPECT_EQ(r.head.state(), r.goal);
    EXPECT_DOUBLE_EQ(r.head.location(), 2.0);
    const auto s = r.graph.find_vertex({-1, 0, 0.3}), g = r.graph.find_vertex(r.goal);
    ASSERT_TRUE(s && g);
    EXPECT_TRUE(r.graph.connected(*s, *g));
    EXPECT_TRUE(r.edges_sound());
}

TEST(Manhattan, HeadAlreadyAtGoal) {
    Rig r(free_pred(), {{-1, 0}, {1, 0}}, {1, 0, 0.3}, 2.0, {1, 0, 0.3});
    EXPECT_TRUE(manhattan_pattern(r.ctx));
    EXPECT_EQ(r.stats.calls_of(PatternKind::Manhattan), 1u);
}

TEST(Manhattan, WallAcrossEveryFiberStopsBeforeIt) {
    const double l_star = 1.23;  // wall at x = -1 + l_star
    const double wall = -1 + l_star;
    Rig r([wall](const State& x) { return x[0] < wall; }, {{-1, 0}, {1, 0}}, {-1, 0, 0}, 0.0, {1, 0, 0});
    EXPECT_FALSE(manhattan_pattern(r.ctx));
    EXPECT_LT(r.head.location(), l_star);
    EXPECT_GE(r.head.location(), l_star - r.ctx.params.delta_base - 1e-3);
    EXPECT_TRUE(r.edges_sound());
}

TEST(Manhattan, FiberChangeOnlyAtTheGoal) {
    Rig r(free_pred(), {{-1, 0}, {1, 0}}, {-1, 0, 0.0}, 0.0, {1, 0, 1.0});
    EXPECT_TRUE(manhattan_pattern(r.ctx));
    for (const auto& e : r.graph.edges())
        if (r.graph.state(e.b) != r.goal) {
            EXPECT_EQ(r.graph.state(e.b)[2], 0.0);
        }
}

// ── Wriggle ──────────────────────────────────────────────────────────────────

TEST(Wriggle, FreeCorridorAdvances) {
    Rig r([](const State& x) { return std::abs(x[1]) < 0.3; }, {{-1, 0}, {1, 0}}, {-1, 0, 0}, 0.0, {1, 0, 0});
    EXPECT_TRUE(wriggle_pattern(r.ctx));
    EXPECT_GE(r.head.location(), r.ctx.params.delta_base);
    EXPECT_TRUE(r.edges_sound());
}

TEST(Wriggle, BoxedInGivesUpAfterSmaxSamples) {
    const State start{-1, 0, 0};
    std::size_t calls = 0;
    Pred only_start = [&](const State& x) {
        ++calls;
        return x == start;
    };
    Rig r(only_start, {{-1, 0}, {1, 0}}, start, 0.0, {1, 0, 0});
    calls = 0;
    EXPECT_FALSE(wriggle_pattern(r.ctx));
    EXPECT_EQ(calls, r.ctx.params.s_max);
    EXPECT_EQ(r.head.state(), start);
    EXPECT_EQ(r.head.location(), 0.0);
    EXPECT_EQ(r.graph.edge_count(), 0u);
}

TEST(Wriggle, FollowsATwistingChannel) {
    // Valid iff the heading stays within 0.1 of a target that turns by a
    // quarter circle over the middle of the path.
    auto target = [](double x) { return std::clamp(x + 0.5, 0.0, 1.0) * std::numbers::pi / 2; };
    Pred channel = [target](const State& x) { return oracle::arc(x[2], target(x[0])) < 0.1; };
    // Per-step twist is delta_base * pi/2 ~ 0.031, below delta_fiber / weight.
    Rig r(channel, {{-1, 0}, {1, 0}}, {-1, 0, 0}, 0.0, {1, 0, std::numbers::pi / 2}, {0.02, 0.05, 100}, 3);
    EXPECT_TRUE(wriggle_pattern(r.ctx));
    EXPECT_GT(r.head.location(), 1.5);  // through the twist
    EXPECT_TRUE(r.edges_sound());
    for (const auto& e : r.graph.edges()) {
        const double df = 0.4 * oracle::arc(r.graph.state(e.a)[2], r.graph.state(e.b)[2]);
        EXPECT_LE(df, r.ctx.params.delta_fiber + 1e-12);
    }
}

// ── Tunnel ───────────────────────────────────────────────────────────────────

TEST(TunnelEnd, NoObstacleIsOneStepAhead) {
    Rig r(free_pred(), {{-1, 0}, {1, 0}}, {-1, 0, 0.2}, 0.5, {1, 0, 0});
    const auto e = tunnel_end(r.ctx);
    ASSERT_TRUE(e);
    EXPECT_NEAR(e->location, 0.52, 1e-12);
    EXPECT_NEAR(e->state[0], -1 + 0.52, 1e-12);
    EXPECT_EQ(e->state[2], 0.2);
}

TEST(TunnelEnd, PastABlockedInterval) {
    const double l1 = 0.71, l2 = 0.93;
    Pred block = [&](const State& x) { return !(x[0] + 1 > l1 && x[0] + 1 < l2); };
    Rig r(block, {{-1, 0}, {1, 0}}, {-1, 0, 0}, 0.5, {1, 0, 0});
    const auto e = tunnel_end(r.ctx);
    ASSERT_TRUE(e);
    EXPECT_GE(e->location, l2);
    EXPECT_LE(e->location, l2 + r.ctx.params.delta_base);
}

TEST(TunnelEnd, BlockedToTheEnd) {
    Pred block = [](const State& x) { return x[0] < 0.0; };
    Rig r(block, {{-1, 0}, {1, 0}}, {-1, 0, 0}, 0.0, {1, 0, 0});
    EXPECT_FALSE(tunnel_end(r.ctx));
}

namespace {

// Block across the path, 0.1 long and 0.01 wide; the head waits just before it.
// Planning sees it padded by half the resolution.
Pred block_ahead(double pad = 0.0) {
    return [pad](const State& x) {
        return !(x[0] >= -pad && x[0] <= 0.1 + pad && std::abs(x[1]) < 0.005 + pad);
    };
}

bool run_tunnel(std::uint64_t seed, bool check_edges) {
    Rig r(block_ahead(5e-4), {{-1, 0}, {1, 0}}, {-0.01, 0, 0}, 0.99, {1, 0, 0}, {0.02, 0.05, 100}, seed);
    r.exact = block_ahead();
    const auto end = tunnel_end(r.ctx);
    EXPECT_TRUE(end);
    if (!end) return false;
    EXPECT_GE(end->state[0], 0.1);
    const bool ok = tunnel_pattern(r.ctx);
    if (!check_edges) return ok;
    EXPECT_TRUE(r.edges_sound());
    // Accepted candidates get strictly closer to the tunnel end.
    double last = oracle::distance(se2(), {-0.01, 0, 0}, end->state);
    for (const auto& e : r.graph.edges()) {
        EXPECT_EQ(e.origin, EdgeOrigin::Tunnel);
        const double d = oracle::distance(se2(), r.graph.state(e.b), end->state);
        EXPECT_LT(d, last);
        last = d;
    }
    if (ok) {
        EXPECT_EQ(r.head.state(), end->state);
        EXPECT_EQ(r.head.location(), end->location);
    } else {
        EXPECT_EQ(r.head.state(), (State{-0.01, 0, 0}));
    }
    return ok;
}

}  // namespace

TEST(Tunnel, GoesAroundABlock) { EXPECT_TRUE(run_tunnel(0, true)); }

TEST(Tunnel, SoundAndMonotoneOverSeeds) {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) ok += run_tunnel(seed, true) ? 1 : 0;
    EXPECT_GE(ok, 90);
}

TEST(Tunnel, NoEndLeavesHeadAlone) {
    Pred block = [](const State& x) { return x[0] < 0.0; };
    Rig r(block, {{-1, 0}, {1, 0}}, {-1, 0, 0}, 0.0, {1, 0, 0});
    const State before = r.head.state();
    EXPECT_FALSE(tunnel_pattern(r.ctx));
    EXPECT_EQ(r.head.state(), before);
    EXPECT_EQ(r.graph.edge_count(), 0u);
}

// ── TripleStep ───────────────────────────────────────────────────────────────

TEST(TripleStep, RotatesIntoTheSlit) {
    const Scenario s = builtin_scenario("slit_2d");
    const Bundle& bundle = s.ladder.bundle(2);
    PathRestriction restriction{BasePath(bundle.base(), {{0, -2}, {0, 2}}), bundle, s.ladder.checker(2)};
    RoadmapGraph graph(bundle.total());
    RandomSource rng(0);
    PatternStats stats;
    const PatternParams params = PatternParams::defaults(bundle);
    // Horizontal, just short of the wall face at y = -0.7.
    HeadPointer head(restriction, {0, -0.82, 0}, 1.18);
    const State goal = s.goal;
    PatternContext ctx{head, goal, graph, params, rng, stats, nullptr, s.goal_tolerance};
    const State x{0, -0.82 + params.delta_base, std::numbers::pi / 2};
    ASSERT_TRUE(restriction.checker(x));
    ASSERT_FALSE(ctx.reachable(head.state(), x));

    EXPECT_TRUE(triple_step_pattern(ctx, x));
    EXPECT_EQ(graph.edge_count(), 3u);
    EXPECT_EQ(head.state(), x);
    const ValidityChecker exact = s.exact_checker(2, 1e-4);
    for (const auto& e : graph.edges())
        EXPECT_TRUE(oracle::motion_ok(exact.predicate, bundle.total(), graph.state(e.a), graph.state(e.b), 1e-4));
}

TEST(TripleStep, FirstBackstepSuffices) {
    Rig r(free_pred(), {{-1, 0}, {1, 0}}, {-0.5, 0, 0}, 0.5, {1, 0, 0});
    const State x{-0.48, 0, 1.0};
    EXPECT_TRUE(triple_step_pattern(r.ctx, x));
    EXPECT_EQ(r.stats.triple_iterations, 1u);
    EXPECT_EQ(r.head.state(), x);
    EXPECT_NEAR(r.head.location(), 0.52, 1e-12);
}

TEST(TripleStep, WalledCorridorBehindFailsWithinBound) {
    const double loc = 0.5;
    Pred walled = [](const State& x) { return x[0] >= -0.5 - 1e-9; };  // nothing behind the head
    Rig r(walled, {{-1, 0}, {1, 0}}, {-0.5, 0, 0}, loc, {1, 0, 0});
    const State x{-0.48, 0, 1.0};
    EXPECT_FALSE(triple_step_pattern(r.ctx, x));
    EXPECT_LE(r.stats.triple_iterations,
              static_cast<std::size_t>(std::ceil(loc / r.ctx.params.delta_base)) - 1);
    EXPECT_EQ(r.graph.edge_count(), 0u);
}

TEST(TripleStep, RejectsInvalidTarget) {
    Pred half = [](const State& x) { return x[0] < 0.0; };
    Rig r(half, {{-1, 0}, {1, 0}}, {-0.5, 0, 0}, 0.5, {1, 0, 0});
    EXPECT_THROW(triple_step_pattern(r.ctx, {0.5, 0, 0}), ContractViolation);
}

// ── Smoothstep ───────────────────────────────────────────────────────────────

TEST(SmoothParameter, Anchors) {
    const double d = 0.0849;
    const auto f = smooth_parameter(0.0, 10 * d, 100);
    EXPECT_NEAR(f(0), 0.0, 1e-12);
    EXPECT_NEAR(f(50), 5 * d, 1e-12);
    EXPECT_NEAR(f(100), 10 * d, 1e-12);
}

TEST(SmoothParameter, MatchesHermiteOracle) {
    const auto f = smooth_parameter(0.3, 2.0, 37);
    for (int c = 0; c <= 50; ++c) EXPECT_NEAR(f(c), oracle::smoothstep(0.3, 2.0, c, 37), 1e-12);
}

TEST(SmoothParameter, Monotone) {
    const auto f = smooth_parameter(0.0, 1.0, 100);
    for (int c = 0; c < 100; ++c) EXPECT_LE(f(c), f(c + 1));
}
