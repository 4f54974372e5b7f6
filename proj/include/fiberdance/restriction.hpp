// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Base paths, path restrictions and the head pointer that section patterns
// push along a restriction.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "fiberdance/bundle.hpp"

namespace fiberdance {

/// Arc-length parameterized polyline on a base space.
class BasePath {
public:
    BasePath(StateSpace base, std::vector<State> waypoints) : space_(std::move(base)) {
        require(!waypoints.empty(), "base path: needs at least one waypoint");
        for (auto& w : waypoints) {
            require(w.size() == space_.dimension(), "base path: waypoint dimension mismatch");
            if (!waypoints_.empty()) {
                const double d = space_.distance(waypoints_.back(), w);
                if (d == 0.0) continue;
                cumulative_.push_back(cumulative_.back() + d);
            } else {
                cumulative_.push_back(0.0);
            }
            waypoints_.push_back(std::move(w));
        }
    }

    [[nodiscard]] const StateSpace& space() const noexcept { return space_; }
    [[nodiscard]] const std::vector<State>& waypoints() const noexcept { return waypoints_; }
    [[nodiscard]] const std::vector<double>& cumulative_lengths() const noexcept { return cumulative_; }
    [[nodiscard]] double length() const noexcept { return cumulative_.back(); }

    /// State at arc length l; l is clamped into [0, length()].
    [[nodiscard]] State at(double l) const {
        if (waypoints_.size() == 1 || l <= 0.0) return waypoints_.front();
        if (l >= length()) return waypoints_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), l);
        const auto i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
        const double seg = cumulative_[i + 1] - cumulative_[i];
        const double t = std::clamp((l - cumulative_[i]) / seg, 0.0, 1.0);
        return space_.interpolate(waypoints_[i], waypoints_[i + 1], t);
    }

private:
    StateSpace space_;
    std::vector<State> waypoints_;
    std::vector<double> cumulative_;
};

[[nodiscard]] inline State base_path_at(const BasePath& p, double l) { return p.at(l); }

/// r(p) = { x | pi(x) in p }, held implicitly by its generators.
struct PathRestriction {
    BasePath base_path;
    Bundle bundle;
    ValidityChecker checker;  // on the total space
};

/// Cursor (state, arc-length location) over a restriction.
class HeadPointer {
public:
    HeadPointer(const PathRestriction& restriction, State state, double location)
        : restriction_(&restriction) {
        update(std::move(state), location);
    }

    [[nodiscard]] const State& state() const noexcept { return state_; }
    [[nodiscard]] double location() const noexcept { return location_; }
    [[nodiscard]] const PathRestriction& restriction() const noexcept { return *restriction_; }

    void update(State x, double location) {
        require(restriction_->checker(x), "update_head: head state must be valid");
        state_ = std::move(x);
        location_ = std::clamp(location, 0.0, restriction_->base_path.length());
    }

private:
    const PathRestriction* restriction_;
    State state_;
    double location_ = 0.0;
};

inline void update_head(HeadPointer& head, State x, double location) { head.update(std::move(x), location); }

/// Closed threshold: distance <= tol counts as reached.
[[nodiscard]] inline bool has_reached_goal(const HeadPointer& head, const State& goal, double tol) {
    return head.restriction().bundle.total().distance(head.state(), goal) <= tol;
}

}  // namespace fiberdance
