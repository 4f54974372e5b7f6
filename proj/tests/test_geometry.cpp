#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fiberdance/scenario.hpp"
#include "oracles.hpp"

using namespace fiberdance;

TEST(IsValid, DiskInEmptyWorld) {
    const World w{{-1, -1}, {1, 1}, {}};
    EXPECT_TRUE(is_valid(w, DiskRobot{0.1}, {0, 0}));
}

TEST(IsValid, DiskInsideObstacle) {
    const World w{{-1, -1}, {1, 1}, {rectangle(-0.5, -0.5, 0.5, 0.5)}};
    EXPECT_FALSE(is_valid(w, DiskRobot{0.1}, {0, 0}));
}

TEST(IsValid, SquareNextToWallFace) {
    // Wall face at x = 1; unit square robot centred on its own origin.
    const World w{{-5, -5}, {5, 5}, {rectangle(1, -2, 2, 2)}};
    const PolygonRobot sq{rectangle(-0.5, -0.5, 0.5, 0.5)};
    EXPECT_TRUE(is_valid(w, sq, {1 - 0.5 - 1e-6, 0, 0}));
    EXPECT_FALSE(is_valid(w, sq, {1 - 0.5 + 1e-6, 0, 0}));
    EXPECT_FALSE(is_valid(w, sq, {1 - 0.5, 0, 0}));  // touching counts as contact
}

TEST(IsValid, MarginPadsClearance) {
    const World w{{-5, -5}, {5, 5}, {rectangle(1, -2, 2, 2)}};
    const PolygonRobot sq{rectangle(-0.5, -0.5, 0.5, 0.5)};
    EXPECT_TRUE(is_valid(w, sq, {0.4, 0, 0}, 0.09));
    EXPECT_FALSE(is_valid(w, sq, {0.4, 0, 0}, 0.11));
}

TEST(IsValid, OutsideBounds) {
    const World w{{-1, -1}, {1, 1}, {}};
    EXPECT_FALSE(is_valid(w, DiskRobot{0.1}, {0.95, 0}));
    EXPECT_FALSE(is_valid(w, PolygonRobot{rectangle(-0.3, -0.1, 0.3, 0.1)}, {0.8, 0, 0}));
}

TEST(IsValid, ConcaveRobotNotch) {
    // An L whose notch wraps around a small post.
    const Polygon L({{-0.1, -0.1}, {0.5, -0.1}, {0.5, 0.1}, {0.1, 0.1}, {0.1, 0.5}, {-0.1, 0.5}});
    const World w{{-2, -2}, {2, 2}, {rectangle(0.2, 0.2, 0.3, 0.3)}};
    EXPECT_TRUE(is_valid(w, PolygonRobot{L}, {0, 0, 0}));
    EXPECT_GT(L.convex_pieces().size(), 1u);
}

TEST(Polygon, RejectsSelfIntersection) {
    EXPECT_THROW(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
}

TEST(Polygon, ClockwiseInputIsNormalized) {
    const Polygon p({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    EXPECT_GT(p.area(), 0.0);
}

TEST(Polygon, DecompositionCoversArea) {
    const Polygon L({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}});
    double sum = 0;
    for (const auto& piece : L.convex_pieces()) sum += signed_area(piece);
    EXPECT_NEAR(sum, L.area(), 1e-12);
    EXPECT_NEAR(L.area(), 5.0, 1e-12);
}

// ── Forward kinematics ───────────────────────────────────────────────────────

TEST(ForwardKinematics, ZeroPostureIsCollinear) {
    const ChainRobot c{{0.3, 0.2, 0.4}, {0.1, 0.1, 0.1}, 2.0};
    const auto links = forward_kinematics(c, {0, 0, 0, 0, 0});
    ASSERT_EQ(links.size(), 3u);
    double start = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        double xmin = 1e9;
        for (auto v : links[i].vertices()) xmin = std::min(xmin, v.x);
        EXPECT_NEAR(xmin, start - 0.05, 1e-12);
        start += c.lengths[i];
    }
}

TEST(ForwardKinematics, BaseRotationIsRigid) {
    const ChainRobot c{{0.3, 0.2}, {0.1, 0.1}, 2.0};
    const auto a = forward_kinematics(c, {0, 0, 0, 0.4});
    const auto b = forward_kinematics(c, {0, 0, std::numbers::pi / 2, 0.4});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].vertices().size(); ++k) {
            const Vec2 p = a[i].vertices()[k], q = b[i].vertices()[k];
            EXPECT_NEAR(q.x, -p.y, 1e-12);
            EXPECT_NEAR(q.y, p.x, 1e-12);
        }
}

TEST(ForwardKinematics, TwoLinkArmClosedForm) {
    const ChainRobot c{{0.5, 0.3}, {0.0001, 0.0001}, 2.0};
    const double q = std::numbers::pi / 2;
    const auto links = forward_kinematics(c, {0, 0, 0, q});
    // Far end of link 2 sits at (l1 + l2 cos q, l2 sin q); the rectangle
    // overhangs it by half a width.
    Vec2 best{};
    double far = -1;
    for (auto v : links[1].vertices())
        if (v.y > far) far = v.y, best = v;
    EXPECT_NEAR(best.y, 0.3 + 0.00005, 1e-9);
    EXPECT_NEAR(std::abs(best.x - 0.5), 0.00005, 1e-9);
}

TEST(ForwardKinematics, MatchesOracleChain) {
    const ChainRobot c{{0.25, 0.25, 0.25, 0.25}, {0.1, 0.1, 0.1, 0.1}, 2.0};
    RandomSource rng(5);
    for (int i = 0; i < 200; ++i) {
        const State x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-3, 3), rng.uniform(-2, 2),
                      rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto links = forward_kinematics(c, x);
        const auto ref = oracle::chain_links(c.lengths, c.widths, x);
        for (std::size_t l = 0; l < 4; ++l)
            for (std::size_t k = 0; k < 4; ++k) {
                // Polygon normalizes orientation, so look the oracle vertex up.
                double best = 1e9;
                for (auto v : links[l].vertices()) best = std::min(best, std::hypot(v.x - ref[l][k].x, v.y - ref[l][k].y));
                EXPECT_LT(best, 1e-12);
            }
    }
}

TEST(ForwardKinematics, EquivariantUnderBasePose) {
    const ChainRobot c{{0.25, 0.25, 0.25}, {0.1, 0.1, 0.1}, 2.0};
    RandomSource rng(6);
    for (int i = 0; i < 1000; ++i) {
        const State x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-3, 3), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Pose2 g{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-3, 3)};
        const Pose2 moved = g.compose(Pose2{{x[0], x[1]}, x[2]});
        const State y{moved.t.x, moved.t.y, moved.theta, x[3], x[4]};
        const auto a = forward_kinematics(c, x), b = forward_kinematics(c, y);
        for (std::size_t l = 0; l < a.size(); ++l)
            for (std::size_t k = 0; k < a[l].vertices().size(); ++k) {
                const Vec2 p = g.apply(a[l].vertices()[k]), q = b[l].vertices()[k];
                EXPECT_NEAR(p.x, q.x, 1e-9);
                EXPECT_NEAR(p.y, q.y, 1e-9);
            }
    }
}

TEST(RobotSpace, MetricBoundsPointTravel) {
    // The metric weights are chosen so that no robot point moves farther than
    // the metric distance of a motion.
    const ChainRobot c{{0.25, 0.25, 0.25, 0.25}, {0.1, 0.1, 0.1, 0.1}, 2.0};
    const World w{{-2, -2}, {2, 2}, {}};
    const StateSpace sp = robot_space(w, c);
    RandomSource rng(8);
    for (int i = 0; i < 500; ++i) {
        const State a = sp.sample_uniform(rng);
        const State b = sp.sample_uniform_near(a, 0.05, rng);
        const auto la = oracle::chain_links(c.lengths, c.widths, a), lb = oracle::chain_links(c.lengths, c.widths, b);
        const double d = sp.distance(a, b);
        for (std::size_t l = 0; l < la.size(); ++l)
            for (std::size_t k = 0; k < 4; ++k)
                EXPECT_LE(std::hypot(la[l][k].x - lb[l][k].x, la[l][k].y - lb[l][k].y), d + 1e-12);
    }
}

// ── Rasterization agreement ──────────────────────────────────────────────────

namespace {

/// True if a move of at most h in robot point travel changes the verdict:
/// a plane translation, or a single angle scaled by its metric weight.
/// Joint moves catch link-link contact.
bool near_contact(const Scenario& s, const StateSpace& space, const RobotModel& robot, const State& x, double h) {
    const bool v = is_valid(*s.index, robot, x);
    for (double dx : {-h, 0.0, h})
        for (double dy : {-h, 0.0, h}) {
            State y = x;
            y[0] += dx;
            y[1] += dy;
            if (is_valid(*s.index, robot, y) != v) return true;
        }
    for (std::size_t i = 2; i < x.size(); ++i) {
        State probe = x;
        probe[i] += 1e-6;
        const double weight = space.distance(x, probe) / 1e-6;
        for (double d : {-h / weight, h / weight}) {
            State y = x;
            y[i] += d;
            if (is_valid(*s.index, robot, y) != v) return true;
        }
    }
    return false;
}

}  // namespace

class Raster : public ::testing::TestWithParam<std::string> {};

TEST_P(Raster, AgreesWithBruteForceUpToOneCell) {
    const Scenario s = builtin_scenario(GetParam());
    const double h = 1e-3;
    RandomSource rng(13);
    int disagreements = 0;
    for (std::size_t level = 1; level <= s.levels(); ++level) {
        const RobotModel& robot = s.robot(level);
        for (int i = 0; i < 1000; ++i) {
            const State x = s.space(level).sample_uniform(rng);
            const bool fast = is_valid(*s.index, robot, x);
            const bool slow = oracle::raster_valid(s.world, robot, x, h);
            if (fast != slow) {
                ++disagreements;
                EXPECT_TRUE(near_contact(s, s.space(level), robot, x, 3 * h)) << "level " << level << " pose " << x[0] << "," << x[1];
            }
        }
    }
    EXPECT_LE(disagreements, 10);
}

INSTANTIATE_TEST_SUITE_P(Builtins, Raster,
                         ::testing::Values("slit_2d", "double_L_2d", "chain_egress_2d", "shapesorter_2d"));
