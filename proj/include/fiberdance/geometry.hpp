// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Planar geometry for the 2D scenarios: polygons with a convex decomposition,
// separating-axis tests with a clearance margin, and the robot models
// (disk, rigid polygon, planar chain) posed by a State.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fiberdance/state_space.hpp"

namespace fiberdance {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

[[nodiscard]] inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
[[nodiscard]] inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Rigid planar transform: rotate by theta, then translate by t.
struct Pose2 {
    Vec2 t;
    double theta = 0.0;

    [[nodiscard]] Vec2 apply(Vec2 p) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return {c * p.x - s * p.y + t.x, s * p.x + c * p.y + t.y};
    }
    [[nodiscard]] Pose2 compose(const Pose2& local) const { return {apply(local.t), theta + local.theta}; }
};

struct Aabb {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void expand(Vec2 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    /// Boxes closer than margin (or overlapping).
    [[nodiscard]] bool near(const Aabb& o, double margin) const {
        return lo.x <= o.hi.x + margin && o.lo.x <= hi.x + margin && lo.y <= o.hi.y + margin &&
               o.lo.y <= hi.y + margin;
    }
};

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

[[nodiscard]] inline double signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

namespace detail {

inline bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline bool is_convex_ccw(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]) < -1e-12) return false;
    return true;
}

inline bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
}

/// Ear clipping on a simple CCW polygon; returns index triples.
inline std::vector<std::vector<std::size_t>> triangulate(const std::vector<Vec2>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<std::vector<std::size_t>> tris;
    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const std::size_t ia = idx[(k + idx.size() - 1) % idx.size()], ib = idx[k],
                              ic = idx[(k + 1) % idx.size()];
            const Vec2 a = v[ia], b = v[ib], c = v[ic];
            if (cross(b - a, c - b) <= 0) continue;  // reflex or degenerate
            bool empty = true;
            for (std::size_t j : idx) {
                if (j == ia || j == ib || j == ic) continue;
                if (point_in_triangle(v[j], a, b, c)) {
                    empty = false;
                    break;
                }
            }
            if (!empty) continue;
            tris.push_back({ia, ib, ic});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
            clipped = true;
            break;
        }
        if (!clipped) throw GeometryError("polygon: triangulation failed (not simple?)");
    }
    tris.push_back(idx);
    return tris;
}

/// Greedy Hertel-Mehlhorn: merge neighbouring pieces while the union stays convex.
inline std::vector<std::vector<std::size_t>> merge_convex(const std::vector<Vec2>& v,
                                                          std::vector<std::vector<std::size_t>> pieces) {
    auto coords = [&](const std::vector<std::size_t>& p) {
        std::vector<Vec2> out;
        for (std::size_t i : p) out.push_back(v[i]);
        return out;
    };
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t a = 0; a < pieces.size() && !merged; ++a) {
            for (std::size_t b = a + 1; b < pieces.size() && !merged; ++b) {
                const auto& A = pieces[a];
                const auto& B = pieces[b];
                for (std::size_t i = 0; i < A.size() && !merged; ++i) {
                    const std::size_t u = A[i], w = A[(i + 1) % A.size()];
                    for (std::size_t j = 0; j < B.size(); ++j) {
                        if (B[j] != w || B[(j + 1) % B.size()] != u) continue;
                        // A runs w..u once edge u->w is dropped, B runs u..w.
                        std::vector<std::size_t> m;
                        for (std::size_t s = 0; s < A.size(); ++s) m.push_back(A[(i + 1 + s) % A.size()]);
                        for (std::size_t s = 1; s + 1 < B.size(); ++s) m.push_back(B[(j + 1 + s) % B.size()]);
                        if (!is_convex_ccw(coords(m))) break;
                        pieces[a] = std::move(m);
                        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(b));
                        merged = true;
                        break;
                    }
                }
            }
        }
    }
    return pieces;
}

}  // namespace detail

/// Simple polygon, stored counter-clockwise, with its convex pieces.
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.size() < 3) throw GeometryError("polygon: needs at least 3 vertices");
        const double area = signed_area(vertices_);
        if (area == 0.0) throw GeometryError("polygon: zero area");
        if (area < 0.0) std::reverse(vertices_.begin(), vertices_.end());
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (detail::segments_properly_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                                                        vertices_[(j + 1) % n]))
                    throw GeometryError("polygon: edges intersect (not simple)");
        if (detail::is_convex_ccw(vertices_)) {
            pieces_.push_back(vertices_);
        } else {
            for (const auto& p : detail::merge_convex(vertices_, detail::triangulate(vertices_))) {
                std::vector<Vec2> piece;
                for (std::size_t i : p) piece.push_back(vertices_[i]);
                pieces_.push_back(std::move(piece));
            }
        }
    }

    [[nodiscard]] const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<std::vector<Vec2>>& convex_pieces() const noexcept { return pieces_; }
    [[nodiscard]] bool convex() const noexcept { return pieces_.size() == 1; }

    [[nodiscard]] double area() const { return signed_area(vertices_); }

    /// Largest distance of a vertex from the local origin.
    [[nodiscard]] double circumradius() const {
        double r = 0.0;
        for (Vec2 p : vertices_) r = std::max(r, norm(p));
        return r;
    }

    [[nodiscard]] Polygon transformed(const Pose2& pose) const {
        Polygon out;
        for (Vec2 p : vertices_) out.vertices_.push_back(pose.apply(p));
        for (const auto& piece : pieces_) {
            std::vector<Vec2> q;
            for (Vec2 p : piece) q.push_back(pose.apply(p));
            out.pieces_.push_back(std::move(q));
        }
        return out;
    }

    [[nodiscard]] bool contains(Vec2 p) const {
        bool inside = false;
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2 a = vertices_[i], b = vertices_[j];
            if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
        }
        return inside;
    }

private:
    std::vector<Vec2> vertices_;
    std::vector<std::vector<Vec2>> pieces_;
};

[[nodiscard]] inline Polygon rectangle(double x0, double y0, double x1, double y1) {
    return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

// ── Convex primitives ────────────────────────────────────────────────────────

/// Convex polygon in world coordinates with a cached bounding box.
struct ConvexShape {
    std::vector<Vec2> v;
    Aabb box;

    explicit ConvexShape(std::vector<Vec2> pts) : v(std::move(pts)) {
        for (Vec2 p : v) box.expand(p);
    }
};

[[nodiscard]] inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * ab));
}

namespace detail {

/// True if some edge normal of a strictly separates a from b.
inline bool separated_by_axes_of(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec2 e = a[(i + 1) % a.size()] - a[i];
        const Vec2 n{e.y, -e.x};  // outward for CCW
        double amax = -std::numeric_limits<double>::infinity();
        for (Vec2 p : a) amax = std::max(amax, dot(n, p));
        double bmin = std::numeric_limits<double>::infinity();
        for (Vec2 p : b) bmin = std::min(bmin, dot(n, p));
        if (bmin > amax) return true;
    }
    return false;
}

inline double boundary_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double d = std::numeric_limits<double>::infinity();
    for (Vec2 p : a)
        for (std::size_t i = 0; i < b.size(); ++i) d = std::min(d, point_segment_distance(p, b[i], b[(i + 1) % b.size()]));
    for (Vec2 p : b)
        for (std::size_t i = 0; i < a.size(); ++i) d = std::min(d, point_segment_distance(p, a[i], a[(i + 1) % a.size()]));
    return d;
}

}  // namespace detail

/// Convex shapes closer than margin, touching or overlapping.
[[nodiscard]] inline bool convex_collide(const ConvexShape& a, const ConvexShape& b, double margin) {
    if (!a.box.near(b.box, margin)) return false;
    const bool separated = detail::separated_by_axes_of(a.v, b.v) || detail::separated_by_axes_of(b.v, a.v);
    if (!separated) return true;
    if (margin <= 0.0) return false;
    return detail::boundary_distance(a.v, b.v) <= margin;
}

/// Distance from p to a convex CCW polygon (0 inside).
[[nodiscard]] inline double point_convex_distance(Vec2 p, const std::vector<Vec2>& v) {
    bool inside = true;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % v.size()];
        if (cross(b - a, p - a) < 0) inside = false;
        d = std::min(d, point_segment_distance(p, a, b));
    }
    return inside ? 0.0 : d;
}

// ── World and robots ─────────────────────────────────────────────────────────

struct World {
    Vec2 lower;
    Vec2 upper;
    std::vector<Polygon> obstacles;
};

/// Convex obstacle pieces flattened for collision queries.
class WorldIndex {
public:
    WorldIndex() = default;
    explicit WorldIndex(const World& w) : lower_(w.lower), upper_(w.upper) {
        for (const auto& o : w.obstacles)
            for (const auto& piece : o.convex_pieces()) pieces_.emplace_back(piece);
    }

    [[nodiscard]] Vec2 lower() const noexcept { return lower_; }
    [[nodiscard]] Vec2 upper() const noexcept { return upper_; }
    [[nodiscard]] const std::vector<ConvexShape>& pieces() const noexcept { return pieces_; }

    [[nodiscard]] bool inside_bounds(Vec2 p, double margin) const {
        return p.x > lower_.x + margin && p.x < upper_.x - margin && p.y > lower_.y + margin &&
               p.y < upper_.y - margin;
    }

    /// Convex shape inside the bounds and clear of every obstacle by more than margin.
    [[nodiscard]] bool shape_free(const ConvexShape& s, double margin) const {
        for (Vec2 p : s.v)
            if (!inside_bounds(p, margin)) return false;
        for (const auto& o : pieces_)
            if (convex_collide(s, o, margin)) return false;
        return true;
    }

    [[nodiscard]] bool disk_free(Vec2 c, double r, double margin) const {
        if (!inside_bounds(c, r + margin)) return false;
        for (const auto& o : pieces_) {
            if (c.x + r + margin < o.box.lo.x || c.x - r - margin > o.box.hi.x || c.y + r + margin < o.box.lo.y ||
                c.y - r - margin > o.box.hi.y)
                continue;
            if (point_convex_distance(c, o.v) <= r + margin) return false;
        }
        return true;
    }

private:
    Vec2 lower_, upper_;
    std::vector<ConvexShape> pieces_;
};

struct DiskRobot {
    double radius = 0.1;
};

struct PolygonRobot {
    Polygon shape;  // local frame; the state's (x, y, theta) poses its origin
};

/// Serial chain of rectangular links. Link 1 is posed by (x, y, theta);
/// every further link is rotated by one joint at the far end of its predecessor.
/// Each rectangle covers its link from joint to joint plus half a width at both ends.
struct ChainRobot {
    std::vector<double> lengths;
    std::vector<double> widths;
    double joint_limit = 2.0;

    [[nodiscard]] std::size_t joints() const { return lengths.size() - 1; }
    /// Bound on the distance of any chain point from joint j (0 = the base origin).
    [[nodiscard]] double reach_from(std::size_t j) const {
        double r = 0.0, w = 0.0;
        for (std::size_t i = j; i < lengths.size(); ++i) {
            r += lengths[i];
            w = std::max(w, widths[i]);
        }
        return r + w;
    }
};

using RobotModel = std::variant<DiskRobot, PolygonRobot, ChainRobot>;

[[nodiscard]] inline Polygon link_rectangle(double length, double width) {
    return rectangle(-0.5 * width, -0.5 * width, length + 0.5 * width, 0.5 * width);
}

/// Configuration space of a robot in a world: R^2 for disks, SE(2) for
/// polygons, SE(2) x R^n for chains. Rotation and joint weights bound the
/// displacement of every robot point, so metric distance >= point travel.
[[nodiscard]] inline StateSpace robot_space(const World& w, const RobotModel& robot) {
    const StateSpace plane = StateSpace::euclidean({w.lower.x, w.lower.y}, {w.upper.x, w.upper.y});
    if (std::holds_alternative<DiskRobot>(robot)) return plane;
    if (const auto* p = std::get_if<PolygonRobot>(&robot))
        return StateSpace::product({plane, StateSpace::planar_rotation()}, {1.0, p->shape.circumradius()});
    const auto& c = std::get<ChainRobot>(robot);
    std::vector<StateSpace> parts{plane, StateSpace::planar_rotation()};
    std::vector<double> weights{1.0, c.reach_from(0)};
    for (std::size_t j = 1; j <= c.joints(); ++j) {
        parts.push_back(StateSpace::euclidean({-c.joint_limit}, {c.joint_limit}));
        weights.push_back(c.reach_from(j));
    }
    return StateSpace::product(parts, weights);
}

/// World-frame link polygons of a chain.
[[nodiscard]] inline std::vector<Polygon> forward_kinematics(const ChainRobot& chain, const State& x) {
    require(x.size() == 3 + chain.joints(), "forward_kinematics: state dimension mismatch");
    std::vector<Polygon> links;
    Pose2 frame{{x[0], x[1]}, x[2]};
    for (std::size_t i = 0; i < chain.lengths.size(); ++i) {
        if (i > 0) frame = frame.compose(Pose2{{chain.lengths[i - 1], 0.0}, x[2 + i]});
        links.push_back(link_rectangle(chain.lengths[i], chain.widths[i]).transformed(frame));
    }
    return links;
}

/// Robot geometry posed at x, as world-frame polygons (disks excluded).
[[nodiscard]] inline std::vector<Polygon> posed_polygons(const RobotModel& robot, const State& x) {
    if (const auto* p = std::get_if<PolygonRobot>(&robot)) return {p->shape.transformed(Pose2{{x[0], x[1]}, x[2]})};
    if (const auto* c = std::get_if<ChainRobot>(&robot)) return forward_kinematics(*c, x);
    return {};
}

/// Robot inside the bounds and more than margin away from every obstacle;
/// chains also keep non-adjacent links more than 2 x margin apart.
[[nodiscard]] inline bool is_valid(const WorldIndex& world, const RobotModel& robot, const State& x,
                                   double margin = 0.0) {
    if (const auto* d = std::get_if<DiskRobot>(&robot)) return world.disk_free({x[0], x[1]}, d->radius, margin);
    const auto polys = posed_polygons(robot, x);
    std::vector<std::vector<ConvexShape>> shapes;
    for (const auto& poly : polys) {
        std::vector<ConvexShape> ps;
        for (const auto& piece : poly.convex_pieces()) {
            ps.emplace_back(piece);
            if (!world.shape_free(ps.back(), margin)) return false;
        }
        shapes.push_back(std::move(ps));
    }
    for (std::size_t i = 0; i < shapes.size(); ++i)
        for (std::size_t j = i + 2; j < shapes.size(); ++j)
            for (const auto& a : shapes[i])
                for (const auto& b : shapes[j])
                    if (convex_collide(a, b, 2.0 * margin)) return false;
    return true;
}

[[nodiscard]] inline bool is_valid(const World& world, const RobotModel& robot, const State& x, double margin = 0.0) {
    return is_valid(WorldIndex(world), robot, x, margin);
}

}  // namespace fiberdance
