// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Fiber bundles over coordinate-selection projections, and the ladder of
// bundle spaces a multilevel planner climbs.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "fiberdance/state_space.hpp"

namespace fiberdance {

/// (total, base, fiber) with the projection given by a per-coordinate mask of
/// the total space: true marks a base coordinate, false a fiber coordinate.
class Bundle {
public:
    Bundle(StateSpace total, StateSpace base, std::vector<bool> base_mask)
        : total_(std::move(total)), base_(std::move(base)), mask_(std::move(base_mask)) {
        require(mask_.size() == total_.dimension(), "bundle: mask length must equal total dimension");
        const auto base_count = static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
        require(base_count == base_.dimension(), "bundle: base dimension must equal selected coordinates");
        std::vector<bool> fiber_mask(mask_.size());
        std::size_t bi = 0;
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            fiber_mask[i] = !mask_[i];
            if (mask_[i]) {
                require(total_.is_angle(i) == base_.is_angle(bi), "bundle: base coordinate kinds must match total");
                base_index_.push_back(i);
                ++bi;
            } else {
                fiber_index_.push_back(i);
            }
        }
        fiber_ = total_.select(fiber_mask);
    }

    [[nodiscard]] const StateSpace& total() const noexcept { return total_; }
    [[nodiscard]] const StateSpace& base() const noexcept { return base_; }
    [[nodiscard]] const StateSpace& fiber() const noexcept { return fiber_; }
    [[nodiscard]] const std::vector<bool>& mask() const noexcept { return mask_; }

    [[nodiscard]] State project_base(const State& x) const {
        require(x.size() == total_.dimension(), "project_base: dimension mismatch");
        State b(std::vector<double>(base_index_.size()));
        for (std::size_t i = 0; i < base_index_.size(); ++i) b[i] = x[base_index_[i]];
        return b;
    }

    [[nodiscard]] State project_fiber(const State& x) const {
        require(x.size() == total_.dimension(), "project_fiber: dimension mismatch");
        State f(std::vector<double>(fiber_index_.size()));
        for (std::size_t i = 0; i < fiber_index_.size(); ++i) f[i] = x[fiber_index_[i]];
        return f;
    }

    [[nodiscard]] State lift(const State& b, const State& f) const {
        require(b.size() == base_index_.size(), "lift: base dimension mismatch");
        require(f.size() == fiber_index_.size(), "lift: fiber dimension mismatch");
        State x(std::vector<double>(total_.dimension()));
        for (std::size_t i = 0; i < base_index_.size(); ++i) x[base_index_[i]] = b[i];
        for (std::size_t i = 0; i < fiber_index_.size(); ++i) x[fiber_index_[i]] = f[i];
        return x;
    }

private:
    StateSpace total_;
    StateSpace base_;
    StateSpace fiber_;
    std::vector<bool> mask_;
    std::vector<std::size_t> base_index_;
    std::vector<std::size_t> fiber_index_;
};

/// Spaces X_1..X_K (innermost first), the bundle X_{k+1} -> X_k between each
/// adjacent pair, and the constraint of every level.
class BundleLadder {
public:
    BundleLadder() = default;
    BundleLadder(std::vector<StateSpace> spaces, std::vector<std::vector<bool>> masks,
                 std::vector<ValidityChecker> checkers)
        : spaces_(std::move(spaces)), checkers_(std::move(checkers)) {
        require(!spaces_.empty(), "ladder: at least one level");
        require(masks.size() + 1 == spaces_.size(), "ladder: one mask per adjacent pair");
        require(checkers_.size() == spaces_.size(), "ladder: one checker per level");
        for (std::size_t k = 0; k + 1 < spaces_.size(); ++k)
            bundles_.emplace_back(spaces_[k + 1], spaces_[k], std::move(masks[k]));
    }

    [[nodiscard]] std::size_t size() const noexcept { return spaces_.size(); }
    /// Levels are numbered 1..K.
    [[nodiscard]] const StateSpace& space(std::size_t level) const { return spaces_.at(level - 1); }
    [[nodiscard]] const ValidityChecker& checker(std::size_t level) const { return checkers_.at(level - 1); }
    /// Bundle whose total space is X_level and base X_{level-1}; level >= 2.
    [[nodiscard]] const Bundle& bundle(std::size_t level) const {
        require(level >= 2 && level <= spaces_.size(), "ladder: bundle level out of range");
        return bundles_[level - 2];
    }

private:
    std::vector<StateSpace> spaces_;
    std::vector<Bundle> bundles_;
    std::vector<ValidityChecker> checkers_;
};

struct AdmissibilityReport {
    std::size_t violations = 0;
    std::vector<State> witnesses;  // at most 10
};

/// Samples X_{level+1} uniformly and counts states that are valid there while
/// their projection is invalid on X_level.
[[nodiscard]] inline AdmissibilityReport check_admissibility(const BundleLadder& ladder, std::size_t level,
                                                             std::size_t n_samples, RandomSource& rng) {
    AdmissibilityReport report;
    if (ladder.size() < 2) return report;
    require(level >= 1 && level + 1 <= ladder.size(), "check_admissibility: level must be in [1, K-1]");
    const Bundle& bundle = ladder.bundle(level + 1);
    const ValidityChecker& upper = ladder.checker(level + 1);
    const ValidityChecker& lower = ladder.checker(level);
    for (std::size_t i = 0; i < n_samples; ++i) {
        State x = bundle.total().sample_uniform(rng);
        if (!upper(x)) continue;
        if (lower(bundle.project_base(x))) continue;
        ++report.violations;
        if (report.witnesses.size() < 10) report.witnesses.push_back(std::move(x));
    }
    return report;
}

}  // namespace fiberdance
