// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Configuration spaces: Euclidean boxes, planar rotations and weighted
// products of those, together with sampling, interpolation and the
// discretized motion validator used by every planner in the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fiberdance {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool condition, const char* what) {
    if (!condition) throw ContractViolation(what);
}

inline constexpr double kPi = std::numbers::pi;

/// Maps any angle into [-pi, pi).
[[nodiscard]] inline double normalize_angle(double a) noexcept {
    if (a >= -kPi && a < kPi) return a;
    double r = std::fmod(a + kPi, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    double out = r - kPi;
    if (out >= kPi) out = -kPi;
    return out;
}

/// Signed shortest arc from a to b, in [-pi, pi).
[[nodiscard]] inline double angle_difference(double a, double b) noexcept {
    return normalize_angle(b - a);
}

// ── State ────────────────────────────────────────────────────────────────────

/// Flat coordinate vector laid out in the order of the owning space's components.
struct State {
    std::vector<double> values;

    State() = default;
    explicit State(std::vector<double> v) : values(std::move(v)) {}
    State(std::initializer_list<double> v) : values(v) {}

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values[i]; }
    [[nodiscard]] double& operator[](std::size_t i) { return values[i]; }

    friend bool operator==(const State&, const State&) = default;
};

// ── RandomSource ─────────────────────────────────────────────────────────────

/// Seeded pseudo-random source. One per thread; never shared.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] double uniform01() {
        ++draws_;
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }
    [[nodiscard]] double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    [[nodiscard]] std::size_t index(std::size_t n) {
        ++draws_;
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    [[nodiscard]] bool bernoulli(double p) { return uniform01() < p; }

    /// Number of primitive draws taken so far.
    [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

// ── StateSpace ───────────────────────────────────────────────────────────────

enum class SpaceKind { Euclidean, PlanarRotation, Product };

/// One leaf of a (flattened) product space.
struct SpaceComponent {
    SpaceKind kind = SpaceKind::Euclidean;  // Euclidean or PlanarRotation only
    std::size_t offset = 0;                  // first coordinate in the flat State
    std::size_t dim = 0;
    std::vector<double> lower;               // Euclidean only
    std::vector<double> upper;
    double weight = 1.0;

    [[nodiscard]] double extent() const {
        if (kind == SpaceKind::PlanarRotation) return weight * kPi;
        double sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) sq += (upper[i] - lower[i]) * (upper[i] - lower[i]);
        return weight * std::sqrt(sq);
    }
};

/// A configuration space. Products are stored flattened; the metric is the
/// weighted sum of component distances.
class StateSpace {
public:
    StateSpace() = default;

    static StateSpace euclidean(std::vector<double> lower, std::vector<double> upper) {
        require(lower.size() == upper.size(), "euclidean: bound size mismatch");
        for (std::size_t i = 0; i < lower.size(); ++i)
            require(lower[i] < upper[i], "euclidean: lower < upper on every axis");
        StateSpace s;
        s.kind_ = SpaceKind::Euclidean;
        SpaceComponent c;
        c.kind = SpaceKind::Euclidean;
        c.dim = lower.size();
        c.lower = std::move(lower);
        c.upper = std::move(upper);
        s.components_.push_back(std::move(c));
        s.finish();
        return s;
    }

    static StateSpace planar_rotation() {
        StateSpace s;
        s.kind_ = SpaceKind::PlanarRotation;
        SpaceComponent c;
        c.kind = SpaceKind::PlanarRotation;
        c.dim = 1;
        s.components_.push_back(std::move(c));
        s.finish();
        return s;
    }

    /// Weighted product; weights multiply into the leaves of nested products.
    static StateSpace product(const std::vector<StateSpace>& parts, const std::vector<double>& weights) {
        require(parts.size() == weights.size(), "product: one weight per part");
        StateSpace s;
        s.kind_ = SpaceKind::Product;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            require(weights[p] > 0.0, "product: weights must be positive");
            for (SpaceComponent c : parts[p].components_) {
                c.weight *= weights[p];
                s.components_.push_back(std::move(c));
            }
        }
        s.finish();
        return s;
    }

    /// Space made of a subset of this space's coordinates (used for fibers).
    /// Rotation components must be kept or dropped as a whole.
    [[nodiscard]] StateSpace select(const std::vector<bool>& keep) const {
        require(keep.size() == dim_, "select: mask length must equal dimension");
        StateSpace s;
        s.kind_ = SpaceKind::Product;
        for (const auto& c : components_) {
            if (c.kind == SpaceKind::PlanarRotation) {
                if (keep[c.offset]) s.components_.push_back(c);
                continue;
            }
            SpaceComponent sub;
            sub.kind = SpaceKind::Euclidean;
            sub.weight = c.weight;
            for (std::size_t i = 0; i < c.dim; ++i) {
                if (!keep[c.offset + i]) continue;
                sub.lower.push_back(c.lower[i]);
                sub.upper.push_back(c.upper[i]);
                ++sub.dim;
            }
            if (sub.dim > 0) s.components_.push_back(std::move(sub));
        }
        if (s.components_.size() == 1) s.kind_ = s.components_.front().kind;
        s.finish();
        return s;
    }

    [[nodiscard]] SpaceKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] double extent() const noexcept { return extent_; }
    [[nodiscard]] std::span<const SpaceComponent> components() const noexcept { return components_; }

    [[nodiscard]] bool is_angle(std::size_t coordinate) const {
        for (const auto& c : components_)
            if (coordinate >= c.offset && coordinate < c.offset + c.dim)
                return c.kind == SpaceKind::PlanarRotation;
        throw ContractViolation("is_angle: coordinate out of range");
    }

    [[nodiscard]] double distance(const State& a, const State& b) const {
        check_dim(a, "distance: dimension mismatch");
        check_dim(b, "distance: dimension mismatch");
        double d = 0.0;
        for (const auto& c : components_) {
            if (c.kind == SpaceKind::PlanarRotation) {
                d += c.weight * std::abs(angle_difference(a[c.offset], b[c.offset]));
            } else {
                double sq = 0.0;
                for (std::size_t i = c.offset; i < c.offset + c.dim; ++i) sq += (b[i] - a[i]) * (b[i] - a[i]);
                d += c.weight * std::sqrt(sq);
            }
        }
        return d;
    }

    /// Geodesic interpolation; rotations follow the shortest arc.
    [[nodiscard]] State interpolate(const State& a, const State& b, double t) const {
        require(t >= 0.0 && t <= 1.0, "interpolate: t must lie in [0, 1]");
        check_dim(a, "interpolate: dimension mismatch");
        check_dim(b, "interpolate: dimension mismatch");
        if (t == 0.0) return a;
        if (t == 1.0) return b;
        State out = a;
        for (const auto& c : components_) {
            if (c.kind == SpaceKind::PlanarRotation) {
                out[c.offset] = normalize_angle(a[c.offset] + t * angle_difference(a[c.offset], b[c.offset]));
            } else {
                for (std::size_t i = c.offset; i < c.offset + c.dim; ++i) out[i] = a[i] + t * (b[i] - a[i]);
            }
        }
        return out;
    }

    [[nodiscard]] bool satisfies_bounds(const State& s) const {
        if (s.size() != dim_) return false;
        for (const auto& c : components_) {
            if (c.kind == SpaceKind::PlanarRotation) {
                if (!(s[c.offset] >= -kPi && s[c.offset] < kPi)) return false;
                continue;
            }
            for (std::size_t i = 0; i < c.dim; ++i)
                if (!(s[c.offset + i] >= c.lower[i] && s[c.offset + i] <= c.upper[i])) return false;
        }
        return true;
    }

    /// Clamps Euclidean coordinates into the box and normalizes angles.
    [[nodiscard]] State enforce_bounds(State s) const {
        check_dim(s, "enforce_bounds: dimension mismatch");
        for (const auto& c : components_) {
            if (c.kind == SpaceKind::PlanarRotation) {
                s[c.offset] = normalize_angle(s[c.offset]);
                continue;
            }
            for (std::size_t i = 0; i < c.dim; ++i)
                s[c.offset + i] = std::clamp(s[c.offset + i], c.lower[i], c.upper[i]);
        }
        return s;
    }

    [[nodiscard]] State sample_uniform(RandomSource& rng) const {
        State s(std::vector<double>(dim_, 0.0));
        for (const auto& c : components_) {
            if (c.kind == SpaceKind::PlanarRotation) {
                s[c.offset] = normalize_angle(rng.uniform(-kPi, kPi));
                continue;
            }
            for (std::size_t i = 0; i < c.dim; ++i) s[c.offset + i] = rng.uniform(c.lower[i], c.upper[i]);
        }
        return s;
    }

    /// Uniform draw from the metric ball of radius eps around center, using a
    /// per-component box (half-width eps / weight) as the proposal, then
    /// clamped into bounds.
    [[nodiscard]] State sample_uniform_near(const State& center, double eps, RandomSource& rng) const {
        check_dim(center, "sample_uniform_near: dimension mismatch");
        if (eps <= 0.0 || dim_ == 0) return center;
        constexpr int kMaxRejections = 64;
        State s = center;
        for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
            for (const auto& c : components_) {
                const double half = eps / c.weight;
                for (std::size_t i = c.offset; i < c.offset + c.dim; ++i)
                    s[i] = center[i] + rng.uniform(-half, half);
            }
            if (distance(center, s) <= eps) return enforce_bounds(std::move(s));
        }
        // Proposal kept missing the ball: pull the last draw radially inside.
        const double d = distance(center, s);
        return enforce_bounds(interpolate(center, s, std::min(1.0, eps / d)));
    }

private:
    void finish() {
        dim_ = 0;
        extent_ = 0.0;
        for (auto& c : components_) {
            c.offset = dim_;
            dim_ += c.dim;
            extent_ += c.extent();
        }
    }

    void check_dim(const State& s, const char* what) const { require(s.size() == dim_, what); }

    SpaceKind kind_ = SpaceKind::Product;
    std::vector<SpaceComponent> components_;
    std::size_t dim_ = 0;
    double extent_ = 0.0;
};

// ── Validity and motion checking ─────────────────────────────────────────────

/// State constraint plus the maximum metric step between evaluations along a motion.
struct ValidityChecker {
    std::function<bool(const State&)> predicate;
    double resolution = 1e-3;

    [[nodiscard]] bool operator()(const State& s) const { return predicate(s); }
};

struct MotionResult {
    bool reached = false;
    State last_valid;
    /// Fraction of the motion (for paths: of the cumulative metric length)
    /// covered up to last_valid.
    double last_valid_fraction = 0.0;
    /// Path overload only: segment holding last_valid and the fraction within it.
    std::size_t last_segment = 0;
    double segment_fraction = 0.0;
};

/// Forward sweep from a to b at spacing <= checker.resolution, endpoint b last.
[[nodiscard]] inline MotionResult check_motion(const ValidityChecker& checker, const StateSpace& space,
                                               const State& a, const State& b) {
    if (!checker(a)) return {false, a, 0.0, 0, 0.0};
    const double d = space.distance(a, b);
    if (d == 0.0) return {true, b, 1.0, 0, 1.0};
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(d / checker.resolution)));
    State previous = a;
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = (i == n) ? 1.0 : static_cast<double>(i) / static_cast<double>(n);
        State s = (i == n) ? b : space.interpolate(a, b, t);
        if (!checker(s)) {
            const double f = static_cast<double>(i - 1) / static_cast<double>(n);
            return {false, std::move(previous), f, 0, f};
        }
        previous = std::move(s);
    }
    return {true, b, 1.0, 0, 1.0};
}

/// Checks a polyline of states segment by segment; stops at the first violation.
[[nodiscard]] inline MotionResult check_motion(const ValidityChecker& checker, const StateSpace& space,
                                               std::span<const State> path) {
    require(!path.empty(), "check_motion: empty path");
    if (path.size() == 1) {
        const bool ok = checker(path[0]);
        return {ok, path[0], ok ? 1.0 : 0.0, 0, ok ? 1.0 : 0.0};
    }
    std::vector<double> lengths(path.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        lengths[i] = space.distance(path[i], path[i + 1]);
        total += lengths[i];
    }
    double covered = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        MotionResult seg = check_motion(checker, space, path[i], path[i + 1]);
        if (!seg.reached) {
            const double frac = total > 0.0 ? (covered + seg.last_valid_fraction * lengths[i]) / total : 0.0;
            return {false, std::move(seg.last_valid), frac, i, seg.last_valid_fraction};
        }
        covered += lengths[i];
    }
    return {true, path.back(), 1.0, path.size() - 2, 1.0};
}

}  // namespace fiberdance
