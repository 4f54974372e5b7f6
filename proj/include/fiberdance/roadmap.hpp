// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Roadmap graph per level: vertices, metric-cost edges, incremental
// connectivity and A* path extraction.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "fiberdance/budget.hpp"
#include "fiberdance/state_space.hpp"

namespace fiberdance {

using VertexId = std::size_t;

/// Who created an edge.
enum class EdgeOrigin : std::uint8_t { Grow, Shortcut, Manhattan, Wriggle, Tunnel, TripleStep };

[[nodiscard]] constexpr bool is_pattern_edge(EdgeOrigin o) noexcept {
    return o != EdgeOrigin::Grow && o != EdgeOrigin::Shortcut;
}

struct Edge {
    VertexId a = 0;
    VertexId b = 0;
    double cost = 0.0;
    EdgeOrigin origin = EdgeOrigin::Grow;
};

namespace detail {

struct StateBitsHash {
    std::size_t operator()(const std::vector<double>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (double d : v) {
            std::uint64_t bits = 0;
            std::memcpy(&bits, &d, sizeof bits);
            h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

class RoadmapGraph {
public:
    RoadmapGraph() = default;
    explicit RoadmapGraph(StateSpace space) : space_(std::move(space)) {}

    [[nodiscard]] const StateSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return states_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] const State& state(VertexId v) const { return states_.at(v); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<std::size_t>& incident(VertexId v) const { return incident_.at(v); }

    VertexId add_vertex(State s) {
        require(s.size() == space_.dimension(), "graph: vertex dimension mismatch");
        const VertexId id = states_.size();
        index_.emplace(s.values, id);
        coords_.insert(coords_.end(), s.values.begin(), s.values.end());
        states_.push_back(std::move(s));
        incident_.emplace_back();
        parent_.push_back(id);
        return id;
    }

    [[nodiscard]] std::optional<VertexId> find_vertex(const State& s) const {
        const auto it = index_.find(s.values);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    VertexId find_or_add_vertex(const State& s) {
        if (auto v = find_vertex(s)) return *v;
        return add_vertex(s);
    }

    /// Caller certifies the motion a-b; cost is the metric distance.
    void add_edge(VertexId a, VertexId b, EdgeOrigin origin = EdgeOrigin::Grow) {
        require(a < states_.size() && b < states_.size(), "graph: edge endpoint missing");
        if (a == b) return;
        edges_.push_back({a, b, space_.distance(states_[a], states_[b]), origin});
        incident_[a].push_back(edges_.size() - 1);
        incident_[b].push_back(edges_.size() - 1);
        unite(a, b);
    }

    /// Adds both endpoints as needed; returns the id of b.
    VertexId add_edge(const State& a, const State& b, EdgeOrigin origin) {
        const VertexId va = find_or_add_vertex(a);
        const VertexId vb = find_or_add_vertex(b);
        add_edge(va, vb, origin);
        return vb;
    }

    void set_start(VertexId v) { start_ = v; }
    void set_goal(VertexId v) { goal_ = v; }
    [[nodiscard]] std::optional<VertexId> start() const noexcept { return start_; }
    [[nodiscard]] std::optional<VertexId> goal() const noexcept { return goal_; }

    [[nodiscard]] bool connected(VertexId a, VertexId b) const { return find(a) == find(b); }
    [[nodiscard]] bool solved() const { return start_ && goal_ && connected(*start_, *goal_); }

    /// Linear scan; charges one work unit per scanned vertex when a budget is given.
    [[nodiscard]] std::optional<VertexId> nearest(const State& s, Budget* budget = nullptr) const {
        auto k = k_nearest(s, 1, budget);
        if (k.empty()) return std::nullopt;
        return k.front();
    }

    [[nodiscard]] std::vector<VertexId> k_nearest(const State& s, std::size_t k, Budget* budget = nullptr) const {
        std::vector<std::pair<double, VertexId>> heap;
        if (k == 0) return {};
        heap.reserve(k + 1);
        for (VertexId v = 0; v < states_.size(); ++v) {
            const double d = space_.distance(s, states_[v]);
            if (heap.size() < k) {
                heap.emplace_back(d, v);
                std::push_heap(heap.begin(), heap.end());
            } else if (d < heap.front().first) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = {d, v};
                std::push_heap(heap.begin(), heap.end());
            }
        }
        if (budget) budget->charge(states_.size() / 8 + 1);
        std::sort_heap(heap.begin(), heap.end());
        std::vector<VertexId> out;
        out.reserve(heap.size());
        for (const auto& [d, v] : heap) out.push_back(v);
        return out;
    }

private:
    [[nodiscard]] VertexId find(VertexId v) const {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    void unite(VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent_[a] = b;
    }

    StateSpace space_;
    std::vector<State> states_;
    std::vector<double> coords_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    std::unordered_map<std::vector<double>, VertexId, detail::StateBitsHash> index_;
    mutable std::vector<VertexId> parent_;
    std::optional<VertexId> start_;
    std::optional<VertexId> goal_;
};

/// Vertex sequence of the cheapest start-goal path (A* with the metric
/// distance to the goal as heuristic), or nullopt when disconnected.
[[nodiscard]] inline std::optional<std::vector<VertexId>> shortest_path_vertices(const RoadmapGraph& g) {
    if (!g.start() || !g.goal()) return std::nullopt;
    const VertexId s = *g.start();
    const VertexId t = *g.goal();
    if (!g.connected(s, t)) return std::nullopt;
    const State& goal = g.state(t);
    const std::size_t n = g.vertex_count();
    std::vector<double> cost(n, std::numeric_limits<double>::infinity());
    std::vector<VertexId> prev(n, n);
    std::vector<char> closed(n, 0);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    cost[s] = 0.0;
    open.emplace(g.space().distance(g.state(s), goal), s);
    while (!open.empty()) {
        const VertexId u = open.top().second;
        open.pop();
        if (closed[u]) continue;
        closed[u] = 1;
        if (u == t) break;
        for (std::size_t ei : g.incident(u)) {
            const Edge& e = g.edges()[ei];
            const VertexId w = e.a == u ? e.b : e.a;
            const double c = cost[u] + e.cost;
            if (c < cost[w]) {
                cost[w] = c;
                prev[w] = u;
                open.emplace(c + g.space().distance(g.state(w), goal), w);
            }
        }
    }
    if (!closed[t]) return std::nullopt;
    std::vector<VertexId> path;
    for (VertexId v = t; v != s; v = prev[v]) path.push_back(v);
    path.push_back(s);
    std::reverse(path.begin(), path.end());
    return path;
}

[[nodiscard]] inline std::optional<std::vector<State>> extract_path(const RoadmapGraph& g) {
    auto vs = shortest_path_vertices(g);
    if (!vs) return std::nullopt;
    std::vector<State> out;
    out.reserve(vs->size());
    for (VertexId v : *vs) out.push_back(g.state(v));
    return out;
}

/// Greedy shortcutting of the current solution: from each waypoint, the
/// farthest later waypoint reachable in a straight motion gets a direct edge.
/// Returns the number of edges added.
inline std::size_t add_shortcut_edges(RoadmapGraph& g, const ValidityChecker& checker) {
    auto vs = shortest_path_vertices(g);
    if (!vs) return 0;
    std::size_t added = 0;
    const auto& path = *vs;
    for (std::size_t i = 0; i + 2 < path.size();) {
        std::size_t next = i + 1;
        for (std::size_t j = path.size() - 1; j > i + 1; --j) {
            if (check_motion(checker, g.space(), g.state(path[i]), g.state(path[j])).reached) {
                g.add_edge(path[i], path[j], EdgeOrigin::Shortcut);
                ++added;
                next = j;
                break;
            }
        }
        i = next;
    }
    return added;
}

[[nodiscard]] inline double path_cost(const StateSpace& space, const std::vector<State>& path) {
    double c = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) c += space.distance(path[i - 1], path[i]);
    return c;
}

}  // namespace fiberdance
