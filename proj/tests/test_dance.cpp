#include <gtest/gtest.h>

#include <map>

#include "fiberdance/pattern_dance.hpp"
#include "fiberdance/scenario.hpp"
#include "oracles.hpp"

using namespace fiberdance;

namespace {

StateSpace plane() { return StateSpace::euclidean({-2, -2}, {2, 2}); }
StateSpace se2() { return StateSpace::product({plane(), StateSpace::planar_rotation()}, {1.0, 0.4}); }

/// Two-vertex base graph along a straight segment.
RoadmapGraph straight_base(const StateSpace& base, const State& a, const State& b) {
    RoadmapGraph g(base);
    const VertexId s = g.add_vertex(a);
    g.set_start(s);
    g.set_goal(g.add_edge(a, b, EdgeOrigin::Grow));
    return g;
}

/// Manhattan opens every frame of the call log.
bool manhattan_opens_each_frame(const PatternStats& stats) {
    std::map<std::size_t, PatternKind> first;
    for (const auto& ev : stats.log) first.emplace(ev.frame, ev.kind);
    for (const auto& [frame, kind] : first)
        if (kind != PatternKind::Manhattan) return false;
    return first.size() == stats.frames;
}

}  // namespace

TEST(PatternDance, FreeRestrictionNeedsOnlyManhattan) {
    const Bundle bundle(se2(), plane(), {true, true, false});
    PathRestriction r{BasePath(plane(), {{-1, 0}, {1, 1}}), bundle, ValidityChecker{[](const State&) { return true; }, 1e-3}};
    HeadPointer head(r, {-1, 0, 0}, 0.0);
    RoadmapGraph graph(se2());
    RandomSource rng(0);
    PatternStats stats;
    const State goal{1, 1, 0.5};
    PatternContext ctx{head, goal, graph, PatternParams::defaults(bundle), rng, stats, nullptr, 1e-9};
    EXPECT_TRUE(pattern_dance(ctx, DanceParams{}));
    EXPECT_EQ(stats.max_depth, 0u);
    EXPECT_EQ(stats.frames, 1u);
    EXPECT_EQ(rng.draws(), 0u);
    EXPECT_EQ(stats.log.size(), 1u);
}

TEST(PatternDance, ZeroDepthStopsAfterManhattan) {
    const Bundle bundle(se2(), plane(), {true, true, false});
    PathRestriction r{BasePath(plane(), {{-1, 0}, {1, 0}}), bundle,
                      ValidityChecker{[](const State& x) { return x[0] < 0.0; }, 1e-3}};
    HeadPointer head(r, {-1, 0, 0}, 0.0);
    RoadmapGraph graph(se2());
    RandomSource rng(0);
    PatternStats stats;
    const State goal{1, 0, 0};
    PatternContext ctx{head, goal, graph, PatternParams::defaults(bundle), rng, stats, nullptr, 1e-9};
    DanceParams dance;
    dance.d_max = 0;
    EXPECT_FALSE(pattern_dance(ctx, dance));
    EXPECT_EQ(stats.log.size(), 1u);
    EXPECT_EQ(stats.log[0].kind, PatternKind::Manhattan);
    EXPECT_EQ(rng.draws(), 0u);
}

TEST(PatternDance, SlitSectionOverStraightBasePath) {
    const Scenario s = builtin_scenario("slit_2d");
    const Bundle& bundle = s.ladder.bundle(2);
    const RoadmapGraph base = straight_base(bundle.base(), {0, -2}, {0, 2});
    RoadmapGraph graph(bundle.total());
    SectionProblem sp{base, graph, bundle, s.ladder.checker(2), s.start, s.goal, s.goal_tolerance};
    RandomSource rng(0);
    PatternStats stats;
    const DanceParams dance;
    const auto out = find_section(sp, dance, rng, stats);
    EXPECT_TRUE(out.found);
    EXPECT_LE(stats.max_depth, dance.d_max);
    EXPECT_LE(stats.max_fiber_samples_per_frame, dance.b_max);
    EXPECT_TRUE(manhattan_opens_each_frame(stats));

    const auto a = graph.find_vertex(s.start), b = graph.find_vertex(s.goal);
    ASSERT_TRUE(a && b);
    EXPECT_TRUE(graph.connected(*a, *b));
    const ValidityChecker exact = s.exact_checker(2, 1e-4);
    for (const auto& e : graph.edges())
        EXPECT_TRUE(oracle::motion_ok(exact.predicate, bundle.total(), graph.state(e.a), graph.state(e.b), 1e-4));
}

TEST(PatternDance, DepthAndSampleBoundsOverSeeds) {
    for (const auto& name : builtin_scenario_names()) {
        const Scenario s = builtin_scenario(name);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            RandomSource rng(seed);
            PlannerConfig cfg;
            const auto res = multilevel_plan(s.problem(), PlannerKind::QMP, cfg, Ptc::seconds(5.0), rng);
            for (const auto& lv : res.levels) {
                EXPECT_LE(lv.patterns.max_depth, cfg.dance.d_max) << name << " seed " << seed;
                EXPECT_LE(lv.patterns.max_fiber_samples_per_frame, cfg.dance.b_max);
                EXPECT_TRUE(manhattan_opens_each_frame(lv.patterns)) << name << " seed " << seed;
            }
            if (seed >= 20 && name == "double_L_2d") break;  // slowest builtin: fewer seeds
        }
    }
}

TEST(FindSection, FreeTotalSpaceConnectsStartToGoal) {
    const Bundle bundle(se2(), plane(), {true, true, false});
    const RoadmapGraph base = straight_base(plane(), {-1, -1}, {1, 1});
    RoadmapGraph graph(se2());
    SectionProblem sp{base, graph, bundle, ValidityChecker{[](const State&) { return true; }, 1e-3},
                      {-1, -1, 0}, {1, 1, 2}, 1e-9};
    RandomSource rng(0);
    PatternStats stats;
    const auto out = find_section(sp, DanceParams{}, rng, stats);
    EXPECT_TRUE(out.found);
    EXPECT_TRUE(out.had_base_path);
    EXPECT_NEAR(out.base_path_length, std::sqrt(8.0), 1e-12);
    EXPECT_TRUE(graph.connected(*graph.find_vertex({-1, -1, 0}), *graph.find_vertex({1, 1, 2})));
}

TEST(FindSection, NoBaseConnectionLeavesGraphUntouched) {
    const Bundle bundle(se2(), plane(), {true, true, false});
    RoadmapGraph base(plane());
    base.set_start(base.add_vertex({-1, -1}));
    base.set_goal(base.add_vertex({1, 1}));
    RoadmapGraph graph(se2());
    SectionProblem sp{base, graph, bundle, ValidityChecker{[](const State&) { return true; }, 1e-3},
                      {-1, -1, 0}, {1, 1, 2}, 1e-9};
    RandomSource rng(0);
    PatternStats stats;
    const auto out = find_section(sp, DanceParams{}, rng, stats);
    EXPECT_FALSE(out.found);
    EXPECT_FALSE(out.had_base_path);
    EXPECT_EQ(graph.vertex_count(), 0u);
    EXPECT_EQ(stats.frames, 0u);
}

TEST(FindSection, DisabledPatternsAreNeverCalled) {
    const Scenario s = builtin_scenario("slit_2d");
    const Bundle& bundle = s.ladder.bundle(2);
    const RoadmapGraph base = straight_base(bundle.base(), {0, -2}, {0, 2});
    RoadmapGraph graph(bundle.total());
    SectionProblem sp{base, graph, bundle, s.ladder.checker(2), s.start, s.goal, s.goal_tolerance};
    RandomSource rng(0);
    PatternStats stats;
    DanceParams dance;
    dance.enable_wriggle = false;
    dance.enable_tunnel = false;
    (void)find_section(sp, dance, rng, stats);
    EXPECT_EQ(stats.calls_of(PatternKind::Wriggle), 0u);
    EXPECT_EQ(stats.calls_of(PatternKind::Tunnel), 0u);
    EXPECT_GT(stats.calls_of(PatternKind::Manhattan), 0u);
}
