// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Cooperative deadlines shared by grow loops and section patterns.

#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>

namespace fiberdance {

/// Wall: steady clock. Work: a deterministic clock advanced by charged work
/// units (validity evaluations and nearest-neighbour scans), so that runs
/// with the same seed stop at exactly the same point on every invocation.
enum class ClockKind { Wall, Work };

/// Nominal cost of one work unit, in seconds of the work clock.
inline constexpr double kWorkUnitSeconds = 2.5e-7;

class Budget {
public:
    Budget() : Budget(ClockKind::Wall, std::numeric_limits<double>::infinity()) {}
    Budget(ClockKind clock, double seconds) : clock_(clock), limit_(seconds), start_(std::chrono::steady_clock::now()) {}

    [[nodiscard]] ClockKind clock() const noexcept { return clock_; }
    [[nodiscard]] double limit() const noexcept { return limit_; }

    void charge(std::uint64_t units = 1) noexcept { work_ += units; }
    [[nodiscard]] std::uint64_t work() const noexcept { return work_; }

    [[nodiscard]] double elapsed() const noexcept {
        if (clock_ == ClockKind::Work) return static_cast<double>(work_) * kWorkUnitSeconds;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    [[nodiscard]] bool expired() const noexcept { return elapsed() >= limit_; }

private:
    ClockKind clock_;
    double limit_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t work_ = 0;
};

}  // namespace fiberdance
