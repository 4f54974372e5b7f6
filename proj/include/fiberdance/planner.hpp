// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Multilevel planner: levels are grown in order of importance, and each new
// level first tries to find a section over the solution of the level below.
// Flat RRT/PRM run the same grow steps on the top level alone.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fiberdance/pattern_dance.hpp"

namespace fiberdance {

enum class PlannerKind { QRRT, QMP, RRT, PRM };

[[nodiscard]] inline const char* to_string(PlannerKind k) noexcept {
    switch (k) {
        case PlannerKind::QRRT: return "QRRT";
        case PlannerKind::QMP: return "QMP";
        case PlannerKind::RRT: return "RRT";
        case PlannerKind::PRM: return "PRM";
    }
    return "?";
}

[[nodiscard]] inline std::optional<PlannerKind> parse_planner(const std::string& s) {
    if (s == "QRRT") return PlannerKind::QRRT;
    if (s == "QMP") return PlannerKind::QMP;
    if (s == "RRT") return PlannerKind::RRT;
    if (s == "PRM") return PlannerKind::PRM;
    return std::nullopt;
}

[[nodiscard]] constexpr bool is_multilevel(PlannerKind k) noexcept {
    return k == PlannerKind::QRRT || k == PlannerKind::QMP;
}

/// Global termination condition; satisfied as soon as any set limit is hit.
struct Ptc {
    std::optional<double> time_limit;
    std::optional<std::size_t> iteration_limit;
    std::optional<double> target_cost;
    ClockKind clock = ClockKind::Wall;

    [[nodiscard]] static Ptc seconds(double s, ClockKind clock = ClockKind::Wall) {
        Ptc p;
        p.time_limit = s;
        p.clock = clock;
        return p;
    }
    [[nodiscard]] static Ptc iterations(std::size_t n) {
        Ptc p;
        p.iteration_limit = n;
        return p;
    }
};

struct PlannerConfig {
    double range_fraction = 0.2;  // RRT steering range, fraction of the level extent
    std::size_t k_nearest = 10;
    double goal_bias = 0.05;      // RRT only
    double restriction_bias = 0.8;
    DanceParams dance;
    bool refind_sections = true;  // retry find_section when the base solution improves
    bool shortcut_base_paths = true;  // add straight-line shortcuts to the base graph before extraction
};

/// Problem on a ladder X_1..X_K; start and goal live in X_K.
struct MultilevelProblem {
    BundleLadder ladder;
    State start;
    State goal;
    double goal_tolerance = 0.0;
};

[[nodiscard]] inline double importance(std::size_t vertices, std::size_t dimension) {
    require(dimension >= 1, "importance: dimension >= 1");
    return 1.0 / (std::pow(static_cast<double>(vertices), 1.0 / static_cast<double>(dimension)) + 1.0);
}

[[nodiscard]] inline double importance(const RoadmapGraph& g, std::size_t dimension) {
    return importance(g.vertex_count(), dimension);
}

struct LevelStats {
    std::size_t dimension = 0;
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t grow_steps = 0;
    std::size_t section_attempts = 0;
    std::size_t section_successes = 0;
    std::optional<bool> first_section;  // outcome of the Alg. 1 call; unset for level 1
    PatternStats patterns;
};

struct PlanResult {
    bool solved = false;
    std::vector<State> path;
    double cost = 0.0;
    double wall_time = 0.0;  // seconds on the run's clock
    std::uint64_t work = 0;
    std::size_t iterations = 0;
    std::vector<LevelStats> levels;
    std::vector<RoadmapGraph> graphs;
};

namespace detail {

struct Level {
    std::size_t index = 0;  // 1-based
    StateSpace space;
    ValidityChecker checker;  // charges the run's budget
    State start;
    State goal;
    RoadmapGraph graph;
    double range = 0.0;
    LevelStats stats;

    // Solution of the level below, refreshed as that graph grows.
    std::optional<BasePath> base_solution;
    std::size_t base_checked_at = 0;
    double section_base_cost = std::numeric_limits<double>::infinity();
};

class Run {
public:
    Run(const MultilevelProblem& problem, PlannerKind kind, const PlannerConfig& config, const Ptc& ptc,
        RandomSource& rng, bool flat)
        : problem_(problem), kind_(kind), config_(config), ptc_(ptc), rng_(rng),
          budget_(std::make_unique<Budget>(ptc.clock, ptc.time_limit.value_or(std::numeric_limits<double>::infinity()))) {
        const BundleLadder& ladder = problem.ladder;
        const std::size_t K = ladder.size();
        require(ladder.space(K).dimension() == problem.start.size(), "plan: start must live in the top space");
        require(ladder.space(K).dimension() == problem.goal.size(), "plan: goal must live in the top space");
        first_level_ = flat ? K : 1;
        std::vector<State> starts(K + 1), goals(K + 1);
        starts[K] = problem.start;
        goals[K] = problem.goal;
        for (std::size_t k = K; k >= 2; --k) {
            starts[k - 1] = ladder.bundle(k).project_base(starts[k]);
            goals[k - 1] = ladder.bundle(k).project_base(goals[k]);
        }
        Budget* budget = budget_.get();
        for (std::size_t k = first_level_; k <= K; ++k) {
            Level lv;
            lv.index = k;
            lv.space = ladder.space(k);
            const ValidityChecker& raw = ladder.checker(k);
            lv.checker = ValidityChecker{[inner = raw.predicate, budget](const State& s) {
                                             budget->charge();
                                             return inner(s);
                                         },
                                         raw.resolution};
            lv.start = starts[k];
            lv.goal = goals[k];
            lv.graph = RoadmapGraph(lv.space);
            lv.range = config.range_fraction * lv.space.extent();
            lv.stats.dimension = lv.space.dimension();
            lv.graph.set_start(lv.graph.add_vertex(lv.start));
            if (!is_tree()) {
                const VertexId g = lv.graph.find_or_add_vertex(lv.goal);
                lv.graph.set_goal(g);
            }
            levels_.push_back(std::move(lv));
        }
    }

    PlanResult run() {
        std::vector<std::size_t> queue;  // indices into levels_
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            Level& lv = levels_[i];
            if (i > 0) {
                refresh_base_solution(i, true);
                const bool found = attempt_section(i);
                lv.stats.first_section = found;
            }
            queue.push_back(i);
            while (!level_done(lv)) {
                const std::size_t pick = select(queue);
                grow(pick);
                if (config_.refind_sections && pick + 1 < levels_.size() && pick + 1 <= i) {
                    if (refresh_base_solution(pick + 1, false)) maybe_refind(pick + 1);
                }
            }
        }
        PlanResult result;
        Level& top = levels_.back();
        if (top.graph.solved()) {
            auto path = extract_path(top.graph);
            if (path) {
                result.solved = true;
                result.cost = path_cost(top.space, *path);
                result.path = std::move(*path);
            }
        }
        result.wall_time = budget_->elapsed();
        result.work = budget_->work();
        result.iterations = iterations_;
        for (auto& lv : levels_) {
            lv.stats.vertices = lv.graph.vertex_count();
            lv.stats.edges = lv.graph.edge_count();
            result.levels.push_back(std::move(lv.stats));
            result.graphs.push_back(std::move(lv.graph));
        }
        return result;
    }

private:
    [[nodiscard]] bool is_tree() const { return kind_ == PlannerKind::QRRT || kind_ == PlannerKind::RRT; }

    [[nodiscard]] bool global_limit() const {
        if (ptc_.iteration_limit && iterations_ >= *ptc_.iteration_limit) return true;
        return budget_->expired();
    }

    [[nodiscard]] bool level_done(const Level& lv) const { return lv.graph.solved() || global_limit(); }

    /// Highest importance wins; ties go to the lowest level.
    [[nodiscard]] std::size_t select(const std::vector<std::size_t>& queue) const {
        std::size_t best = queue.front();
        double best_imp = -1.0;
        for (std::size_t i : queue) {
            const double imp = importance(levels_[i].graph, levels_[i].stats.dimension);
            if (imp > best_imp) {
                best_imp = imp;
                best = i;
            }
        }
        return best;
    }

    void sync_goal(Level& lv) {
        if (lv.graph.goal()) return;
        if (auto g = lv.graph.find_vertex(lv.goal)) lv.graph.set_goal(*g);
    }

    /// Re-extracts the solution of level i-1 when forced, or when that graph
    /// grew by at least 10% since the last look. Returns true if the solution
    /// got cheaper than the one the last section attempt used.
    bool refresh_base_solution(std::size_t i, bool force) {
        Level& lv = levels_[i];
        const RoadmapGraph& base = levels_[i - 1].graph;
        const std::size_t n = base.vertex_count();

        if (!force && static_cast<double>(n) < 1.1 * static_cast<double>(lv.base_checked_at)) return false;
        lv.base_checked_at = n;
        if (config_.shortcut_base_paths) add_shortcut_edges(levels_[i - 1].graph, levels_[i - 1].checker);
        auto path = extract_path(base);
        if (!path) return false;
        const Bundle& bundle = problem_.ladder.bundle(lv.index);
        lv.base_solution.emplace(bundle.base(), std::move(*path));
        return lv.base_solution->length() < lv.section_base_cost - 1e-12;
    }

    bool attempt_section(std::size_t i) {
        Level& lv = levels_[i];
        if (!lv.base_solution || lv.graph.solved() || global_limit()) return false;
        lv.section_base_cost = lv.base_solution->length();
        ++lv.stats.section_attempts;
        SectionProblem sp{levels_[i - 1].graph,
                          lv.graph,
                          problem_.ladder.bundle(lv.index),
                          lv.checker,
                          lv.start,
                          lv.goal,
                          lv.index == problem_.ladder.size() ? problem_.goal_tolerance
                                                             : 1e-6 * lv.space.extent()};
        const SectionOutcome out = find_section(sp, config_.dance, rng_, lv.stats.patterns, budget_.get());
        sync_goal(lv);
        if (out.found) ++lv.stats.section_successes;
        return out.found;
    }

    void maybe_refind(std::size_t i) {
        if (levels_[i].graph.solved()) return;
        attempt_section(i);
    }

    /// Restriction sampling: lift a random fiber over the base solution or
    /// over a random base vertex; otherwise sample the level uniformly.
    State sample(std::size_t i) {
        Level& lv = levels_[i];
        if (i == 0 || !rng_.bernoulli(config_.restriction_bias)) return lv.space.sample_uniform(rng_);
        const Bundle& bundle = problem_.ladder.bundle(lv.index);
        const RoadmapGraph& base = levels_[i - 1].graph;
        State b;
        if (lv.base_solution && rng_.bernoulli(0.5)) {
            b = lv.base_solution->at(rng_.uniform(0.0, lv.base_solution->length()));
        } else {
            b = base.state(rng_.index(base.vertex_count()));
        }
        return bundle.lift(b, bundle.fiber().sample_uniform(rng_));
    }

    void grow(std::size_t i) {
        ++iterations_;
        Level& lv = levels_[i];
        ++lv.stats.grow_steps;
        if (is_tree()) grow_rrt(lv, i);
        else grow_prm(lv, i);
    }

    void grow_rrt(Level& lv, std::size_t i) {
        const bool to_goal = rng_.bernoulli(config_.goal_bias);
        const State target = to_goal ? lv.goal : sample(i);
        const VertexId near = *lv.graph.nearest(target, budget_.get());
        const State& from = lv.graph.state(near);
        const double d = lv.space.distance(from, target);
        State next = d > lv.range ? lv.space.interpolate(from, target, lv.range / d) : target;
        if (next == from) return;
        if (!check_motion(lv.checker, lv.space, from, next).reached) return;
        const VertexId v = lv.graph.find_or_add_vertex(next);
        lv.graph.add_edge(near, v, EdgeOrigin::Grow);
        sync_goal(lv);
        if (lv.graph.goal()) return;
        if (lv.space.distance(next, lv.goal) <= lv.range && check_motion(lv.checker, lv.space, next, lv.goal).reached) {
            const VertexId g = lv.graph.find_or_add_vertex(lv.goal);
            lv.graph.add_edge(v, g, EdgeOrigin::Grow);
            lv.graph.set_goal(g);
        }
    }

    void grow_prm(Level& lv, std::size_t i) {
        State x = sample(i);
        if (!lv.checker(x)) return;
        const auto near = lv.graph.k_nearest(x, config_.k_nearest, budget_.get());
        const VertexId v = lv.graph.find_or_add_vertex(x);
        for (VertexId u : near) {
            if (u == v) continue;
            if (check_motion(lv.checker, lv.space, lv.graph.state(u), x).reached)
                lv.graph.add_edge(u, v, EdgeOrigin::Grow);
        }
    }

    const MultilevelProblem& problem_;
    PlannerKind kind_;
    PlannerConfig config_;
    Ptc ptc_;
    RandomSource& rng_;
    std::unique_ptr<Budget> budget_;
    std::size_t first_level_ = 1;
    std::vector<Level> levels_;
    std::size_t iterations_ = 0;
};

}  // namespace detail

/// QRRT or QMP with a pattern dance on every level above the first.
[[nodiscard]] inline PlanResult multilevel_plan(const MultilevelProblem& problem, PlannerKind kind,
                                                const PlannerConfig& config, const Ptc& ptc, RandomSource& rng) {
    require(is_multilevel(kind), "multilevel_plan: planner must be QRRT or QMP");
    return detail::Run(problem, kind, config, ptc, rng, false).run();
}

/// Flat RRT or PRM on the top level only.
[[nodiscard]] inline PlanResult baseline_plan(const MultilevelProblem& problem, PlannerKind kind,
                                              const PlannerConfig& config, const Ptc& ptc, RandomSource& rng) {
    require(!is_multilevel(kind), "baseline_plan: planner must be RRT or PRM");
    return detail::Run(problem, kind, config, ptc, rng, true).run();
}

[[nodiscard]] inline PlanResult plan(const MultilevelProblem& problem, PlannerKind kind, const PlannerConfig& config,
                                     const Ptc& ptc, RandomSource& rng) {
    return is_multilevel(kind) ? multilevel_plan(problem, kind, config, ptc, rng)
                               : baseline_plan(problem, kind, config, ptc, rng);
}

}  // namespace fiberdance
