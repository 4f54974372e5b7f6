// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Scenario documents: a JSON world, one robot model per ladder level, the
// coordinate masks between levels, and start/goal. Loading validates every
// invariant and builds the bundle ladder with geometric validity checkers.

#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiberdance/geometry.hpp"
#include "fiberdance/planner.hpp"

namespace fiberdance {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Validity checker for one robot: clearance is padded by half the
/// resolution, so a motion sampled at that resolution is free in between.
[[nodiscard]] inline ValidityChecker make_checker(std::shared_ptr<const WorldIndex> world, RobotModel robot,
                                                  double resolution, double margin) {
    return ValidityChecker{[world = std::move(world), robot = std::move(robot), margin](const State& x) {
                               return is_valid(*world, robot, x, margin);
                           },
                           resolution};
}

struct Scenario {
    std::string name;
    std::string description;
    World world;
    std::vector<RobotModel> robots;  // innermost level first
    std::vector<std::vector<bool>> bundles;
    State start;
    State goal;
    double goal_tolerance = 0.0;
    std::vector<bool> inflated;

    std::shared_ptr<const WorldIndex> index;
    std::vector<StateSpace> spaces;
    BundleLadder ladder;

    [[nodiscard]] std::size_t levels() const noexcept { return robots.size(); }
    [[nodiscard]] const RobotModel& robot(std::size_t level) const { return robots.at(level - 1); }
    [[nodiscard]] const StateSpace& space(std::size_t level) const { return spaces.at(level - 1); }

    /// Unpadded geometry evaluated at the given resolution.
    [[nodiscard]] ValidityChecker exact_checker(std::size_t level, double resolution) const {
        return make_checker(index, robot(level), resolution, 0.0);
    }

    [[nodiscard]] MultilevelProblem problem() const { return {ladder, start, goal, goal_tolerance}; }

    /// The same problem on the top level only.
    [[nodiscard]] MultilevelProblem flat_problem() const {
        const std::size_t K = levels();
        return {BundleLadder({spaces.back()}, {}, {ladder.checker(K)}), start, goal, goal_tolerance};
    }
};

namespace detail {

using Json = nlohmann::ordered_json;

inline void expect_keys(const Json& j, const std::string& where, std::initializer_list<const char*> required,
                        std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw ScenarioError(where + ": expected an object");
    std::set<std::string> known;
    for (const char* k : required) {
        known.insert(k);
        if (!j.contains(k)) throw ScenarioError(where + ": missing field '" + k + "'");
    }
    for (const char* k : optional) known.insert(k);
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ScenarioError(where + ": unknown field '" + k + "'");
}

inline double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw ScenarioError(where + ": expected a number");
    return j.get<double>();
}

inline std::vector<double> numbers(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ScenarioError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline Vec2 point(const Json& j, const std::string& where) {
    const auto v = numbers(j, where);
    if (v.size() != 2) throw ScenarioError(where + ": expected [x, y]");
    return {v[0], v[1]};
}

inline Polygon polygon(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ScenarioError(where + ": expected an array of points");
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point(j[i], where + "[" + std::to_string(i) + "]"));
    try {
        return Polygon(std::move(pts));
    } catch (const GeometryError& e) {
        throw ScenarioError(where + ": invariant 'polygon simple' violated: " + e.what());
    }
}

inline RobotModel robot_model(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ScenarioError(where + ": expected an object with a string 'type'");
    const std::string type = j["type"].get<std::string>();
    if (type == "disk") {
        expect_keys(j, where, {"type", "radius"});
        const double r = number(j["radius"], where + ".radius");
        if (!(r > 0.0)) throw ScenarioError(where + ": radius must be positive");
        return DiskRobot{r};
    }
    if (type == "polygon") {
        expect_keys(j, where, {"type", "vertices"});
        return PolygonRobot{polygon(j["vertices"], where + ".vertices")};
    }
    if (type == "chain") {
        expect_keys(j, where, {"type", "lengths", "widths", "joint_limit"});
        ChainRobot c{numbers(j["lengths"], where + ".lengths"), numbers(j["widths"], where + ".widths"),
                     number(j["joint_limit"], where + ".joint_limit")};
        if (c.lengths.size() < 2) throw ScenarioError(where + ": a chain needs at least two links");
        if (c.widths.size() != c.lengths.size()) throw ScenarioError(where + ": one width per link");
        for (double v : c.lengths)
            if (!(v > 0.0)) throw ScenarioError(where + ": link lengths must be positive");
        for (double v : c.widths)
            if (!(v > 0.0)) throw ScenarioError(where + ": link widths must be positive");
        if (!(c.joint_limit > 0.0 && c.joint_limit <= kPi)) throw ScenarioError(where + ": joint_limit in (0, pi]");
        return c;
    }
    throw ScenarioError(where + ": unknown robot type '" + type + "'");
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline bool scalar_array(const Json& j) {
    for (const auto& e : j)
        if (e.is_structured()) return false;
    return true;
}

inline void write_json(std::ostream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_object()) {
        os << "{\n";
        std::size_t i = 0;
        for (const auto& [k, v] : j.items()) {
            os << inner << Json(k).dump() << ": ";
            write_json(os, v, indent + 1);
            os << (++i < j.size() ? ",\n" : "\n");
        }
        os << pad << "}";
    } else if (j.is_array()) {
        // Points and masks stay on one line; anything deeper is broken up.
        bool flat = scalar_array(j);
        if (!flat) {
            flat = true;
            for (const auto& e : j)
                if (!e.is_array() || !scalar_array(e)) flat = false;
            if (flat && j.size() > 4) flat = false;
        }
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent + 1);
            }
            os << "]";
        } else {
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                os << inner;
                write_json(os, j[i], indent + 1);
                os << (i + 1 < j.size() ? ",\n" : "\n");
            }
            os << pad << "]";
        }
    } else if (j.is_number()) {
        os << format_real(j.get<double>());
    } else {
        os << j.dump();
    }
}

inline Json points_json(const std::vector<Vec2>& pts) {
    Json a = Json::array();
    for (Vec2 p : pts) a.push_back(Json::array({p.x, p.y}));
    return a;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Builds spaces, checkers and the ladder, then checks the cross-level
/// invariants. Throws ScenarioError naming the violated invariant.
inline void finalize_scenario(Scenario& s, bool check_admissible = true) {
    auto fail = [&](const std::string& what) { throw ScenarioError(s.name + ": invariant '" + what + "' violated"); };
    if (!(s.world.lower.x < s.world.upper.x && s.world.lower.y < s.world.upper.y)) fail("world bounds");
    for (const auto& o : s.world.obstacles)
        for (Vec2 p : o.vertices())
            if (p.x < s.world.lower.x || p.x > s.world.upper.x || p.y < s.world.lower.y || p.y > s.world.upper.y)
                fail("obstacles within bounds");
    const std::size_t K = s.robots.size();
    if (K == 0) fail("at least one robot level");
    if (s.bundles.size() + 1 != K) fail("one bundle per adjacent level pair");
    if (s.inflated.empty()) s.inflated.assign(K, false);
    if (s.inflated.size() != K) fail("one inflated flag per level");

    s.index = std::make_shared<const WorldIndex>(s.world);
    s.spaces.clear();
    std::vector<ValidityChecker> checkers;
    for (const auto& r : s.robots) {
        s.spaces.push_back(robot_space(s.world, r));
        const double res = 1e-3 * s.spaces.back().extent();
        checkers.push_back(make_checker(s.index, r, res, 0.5 * res));
    }
    try {
        s.ladder = BundleLadder(s.spaces, s.bundles, checkers);
    } catch (const ContractViolation& e) {
        fail(std::string("bundle masks: ") + e.what());
    }

    const StateSpace& top = s.spaces.back();
    if (s.goal_tolerance == 0.0) s.goal_tolerance = 1e-6 * top.extent();
    if (!(s.goal_tolerance > 0.0)) fail("goal_tolerance > 0");
    if (!top.satisfies_bounds(s.start)) fail("x_I within bounds");
    if (!top.satisfies_bounds(s.goal)) fail("x_G within bounds");
    State xs = s.start, xg = s.goal;
    for (std::size_t k = K; k >= 1; --k) {
        if (!s.ladder.checker(k)(xs)) fail("x_I valid");
        if (!s.ladder.checker(k)(xg)) fail("x_G valid");
        if (k > 1) {
            xs = s.ladder.bundle(k).project_base(xs);
            xg = s.ladder.bundle(k).project_base(xg);
        }
    }
    if (check_admissible) {
        for (std::size_t k = 1; k < K; ++k) {
            if (s.inflated[k - 1]) continue;
            RandomSource rng(0);
            if (check_admissibility(s.ladder, k, 1000, rng).violations > 0) fail("admissibility");
        }
    }
}

inline Scenario load_scenario(const std::string& text) {
    using detail::Json;
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ScenarioError("parse error at " + detail::line_column(text, e.byte) + ": " + e.what());
    }
    detail::expect_keys(j, "scenario", {"name", "world", "robot_levels", "bundles", "start", "goal"},
                        {"description", "goal_tolerance", "inflated"});
    Scenario s;
    if (!j["name"].is_string()) throw ScenarioError("scenario.name: expected a string");
    s.name = j["name"].get<std::string>();
    if (j.contains("description")) {
        if (!j["description"].is_string()) throw ScenarioError("scenario.description: expected a string");
        s.description = j["description"].get<std::string>();
    }
    const Json& w = j["world"];
    detail::expect_keys(w, "world", {"bounds", "obstacles"});
    if (!w["bounds"].is_array() || w["bounds"].size() != 2) throw ScenarioError("world.bounds: expected [[x, y], [x, y]]");
    s.world.lower = detail::point(w["bounds"][0], "world.bounds[0]");
    s.world.upper = detail::point(w["bounds"][1], "world.bounds[1]");
    if (!w["obstacles"].is_array()) throw ScenarioError("world.obstacles: expected an array");
    for (std::size_t i = 0; i < w["obstacles"].size(); ++i)
        s.world.obstacles.push_back(detail::polygon(w["obstacles"][i], "world.obstacles[" + std::to_string(i) + "]"));

    if (!j["robot_levels"].is_array()) throw ScenarioError("robot_levels: expected an array");
    for (std::size_t i = 0; i < j["robot_levels"].size(); ++i)
        s.robots.push_back(detail::robot_model(j["robot_levels"][i], "robot_levels[" + std::to_string(i) + "]"));

    if (!j["bundles"].is_array()) throw ScenarioError("bundles: expected an array of masks");
    for (std::size_t i = 0; i < j["bundles"].size(); ++i) {
        const Json& m = j["bundles"][i];
        if (!m.is_array()) throw ScenarioError("bundles[" + std::to_string(i) + "]: expected an array of booleans");
        std::vector<bool> mask;
        for (const auto& b : m) {
            if (!b.is_boolean()) throw ScenarioError("bundles[" + std::to_string(i) + "]: expected booleans");
            mask.push_back(b.get<bool>());
        }
        s.bundles.push_back(std::move(mask));
    }
    s.start = State(detail::numbers(j["start"], "start"));
    s.goal = State(detail::numbers(j["goal"], "goal"));
    if (s.robots.empty()) throw ScenarioError(s.name + ": invariant 'at least one robot level' violated");
    const std::size_t top_dim = robot_space(s.world, s.robots.back()).dimension();
    if (s.start.size() != top_dim) throw ScenarioError(s.name + ": invariant 'x_I dimension' violated");
    if (s.goal.size() != top_dim) throw ScenarioError(s.name + ": invariant 'x_G dimension' violated");
    if (j.contains("goal_tolerance")) s.goal_tolerance = detail::number(j["goal_tolerance"], "goal_tolerance");
    if (j.contains("inflated")) {
        if (!j["inflated"].is_array()) throw ScenarioError("inflated: expected an array of booleans");
        for (const auto& b : j["inflated"]) {
            if (!b.is_boolean()) throw ScenarioError("inflated: expected booleans");
            s.inflated.push_back(b.get<bool>());
        }
    }
    finalize_scenario(s);
    return s;
}

/// Canonical text: fixed key order, reals with 17 significant digits.
[[nodiscard]] inline std::string serialize_scenario(const Scenario& s) {
    using detail::Json;
    Json j;
    j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;
    Json w;
    w["bounds"] = Json::array({Json::array({s.world.lower.x, s.world.lower.y}),
                               Json::array({s.world.upper.x, s.world.upper.y})});
    w["obstacles"] = Json::array();
    for (const auto& o : s.world.obstacles) w["obstacles"].push_back(detail::points_json(o.vertices()));
    j["world"] = w;
    j["robot_levels"] = Json::array();
    for (const auto& r : s.robots) {
        Json m;
        if (const auto* d = std::get_if<DiskRobot>(&r)) {
            m["type"] = "disk";
            m["radius"] = d->radius;
        } else if (const auto* p = std::get_if<PolygonRobot>(&r)) {
            m["type"] = "polygon";
            m["vertices"] = detail::points_json(p->shape.vertices());
        } else {
            const auto& c = std::get<ChainRobot>(r);
            m["type"] = "chain";
            m["lengths"] = c.lengths;
            m["widths"] = c.widths;
            m["joint_limit"] = c.joint_limit;
        }
        j["robot_levels"].push_back(m);
    }
    j["bundles"] = Json::array();
    for (const auto& mask : s.bundles) {
        Json a = Json::array();
        for (bool b : mask) a.push_back(b);
        j["bundles"].push_back(a);
    }
    j["start"] = s.start.values;
    j["goal"] = s.goal.values;
    j["goal_tolerance"] = s.goal_tolerance;
    Json infl = Json::array();
    for (bool b : s.inflated) infl.push_back(b);
    j["inflated"] = infl;
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << "\n";
    return os.str();
}

namespace detail {

inline const char* const kSlit2d = R"({
  "name": "slit_2d",
  "description": "Rectangle 0.8 x 0.2 through a 0.24 wide slit in a 1.4 thick wall; base level is the inscribed disk.",
  "world": {
    "bounds": [[-3, -3], [3, 3]],
    "obstacles": [
      [[-3, -0.7], [-0.12, -0.7], [-0.12, 0.7], [-3, 0.7]],
      [[0.12, -0.7], [3, -0.7], [3, 0.7], [0.12, 0.7]]
    ]
  },
  "robot_levels": [
    {"type": "disk", "radius": 0.1},
    {"type": "polygon", "vertices": [[-0.4, -0.1], [0.4, -0.1], [0.4, 0.1], [-0.4, 0.1]]}
  ],
  "bundles": [[true, true, false]],
  "start": [0, -2, 0],
  "goal": [0, 2, 0]
})";

inline const char* const kDoubleL2d = R"({
  "name": "double_L_2d",
  "description": "Concave L body through a 0.4 wide hole in a thin wall; base disk inflated 10% past the arm half width.",
  "world": {
    "bounds": [[-1.5, -1.5], [1.5, 1.5]],
    "obstacles": [
      [[-1.5, -0.05], [-0.2, -0.05], [-0.2, 0.05], [-1.5, 0.05]],
      [[0.2, -0.05], [1.5, -0.05], [1.5, 0.05], [0.2, 0.05]]
    ]
  },
  "robot_levels": [
    {"type": "disk", "radius": 0.11},
    {"type": "polygon", "vertices": [[-0.1, -0.1], [0.5, -0.1], [0.5, 0.1], [0.1, 0.1], [0.1, 0.5], [-0.1, 0.5]]}
  ],
  "bundles": [[true, true, false]],
  "start": [-0.2, -0.9, 0],
  "goal": [-0.2, 0.6, 0],
  "inflated": [true, false]
})";

inline const char* const kChainEgress2d = R"({
  "name": "chain_egress_2d",
  "description": "Four-link chain pulled out of a U-shaped pipe; ladder chain -> first link -> disk.",
  "world": {
    "bounds": [[-1.5, -1.5], [1.5, 1.5]],
    "obstacles": [
      [[-1.3, -0.2], [0.2, -0.2], [0.2, -0.08], [-1.15, -0.08], [-1.15, 0.08], [0.2, 0.08], [0.2, 0.2], [-1.3, 0.2]]
    ]
  },
  "robot_levels": [
    {"type": "disk", "radius": 0.05},
    {"type": "polygon", "vertices": [[-0.05, -0.05], [0.3, -0.05], [0.3, 0.05], [-0.05, 0.05]]},
    {"type": "chain", "lengths": [0.25, 0.25, 0.25, 0.25], "widths": [0.1, 0.1, 0.1, 0.1], "joint_limit": 2}
  ],
  "bundles": [[true, true, false], [true, true, true, false, false, false]],
  "start": [-1, 0, 0, 0, 0, 0],
  "goal": [0.3, 0.8, 0, 0, 0, 0]
})";

inline const char* const kShapesorter2d = R"({
  "name": "shapesorter_2d",
  "description": "Two holes: the short one is a dog-leg only the disk fits through; the long way round is a straight gap.",
  "world": {
    "bounds": [[-2, -1.5], [2, 1.5]],
    "obstacles": [
      [[-2, -0.3], [-0.12, -0.3], [-0.12, 0.3], [-2, 0.3]],
      [[0.12, -0.3], [1.2, -0.3], [1.2, -0.12], [0.12, -0.12]],
      [[-0.12, 0.12], [0.28, 0.12], [0.28, 0.3], [-0.12, 0.3]],
      [[0.52, -0.12], [1.2, -0.12], [1.2, 0.3], [0.52, 0.3]],
      [[1.6, -0.3], [2, -0.3], [2, 0.3], [1.6, 0.3]]
    ]
  },
  "robot_levels": [
    {"type": "disk", "radius": 0.1},
    {"type": "polygon", "vertices": [[-0.3, -0.1], [0.3, -0.1], [0.3, 0.1], [-0.3, 0.1]]}
  ],
  "bundles": [[true, true, false]],
  "start": [0, -1, 0],
  "goal": [0.4, 1, 0]
})";

}  // namespace detail

[[nodiscard]] inline std::vector<std::string> builtin_scenario_names() {
    return {"slit_2d", "double_L_2d", "chain_egress_2d", "shapesorter_2d"};
}

[[nodiscard]] inline std::string builtin_scenario_text(const std::string& name) {
    if (name == "slit_2d") return detail::kSlit2d;
    if (name == "double_L_2d") return detail::kDoubleL2d;
    if (name == "chain_egress_2d") return detail::kChainEgress2d;
    if (name == "shapesorter_2d") return detail::kShapesorter2d;
    throw ScenarioError("unknown builtin scenario '" + name + "'");
}

[[nodiscard]] inline Scenario builtin_scenario(const std::string& name) { return load_scenario(builtin_scenario_text(name)); }

[[nodiscard]] inline std::map<std::string, Scenario> builtin_scenarios() {
    std::map<std::string, Scenario> out;
    for (const auto& n : builtin_scenario_names()) out.emplace(n, builtin_scenario(n));
    return out;
}

}  // namespace fiberdance
