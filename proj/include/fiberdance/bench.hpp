// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026 FiberDance Authors
//
// Benchmark harness: seeded repeated runs with a cutoff, CSV records,
// averaged runtime tables and SVG renderings of solutions.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "fiberdance/scenario.hpp"

namespace fiberdance {

struct BenchConfig {
    std::vector<std::string> scenarios;  // builtin names or file paths
    std::vector<PlannerKind> planners{PlannerKind::QMP, PlannerKind::RRT};
    std::size_t runs = 10;
    double cutoff = 10.0;
    std::uint64_t seed = 0;
    std::string out_dir;  // empty: nothing written
    std::size_t parallel = 1;
    ClockKind clock = ClockKind::Wall;
    PlannerConfig planner;
};

struct BenchRecord {
    std::string scenario;
    std::string planner;
    std::uint64_t seed = 0;
    bool solved = false;
    double wall_time = 0.0;
    double cost = 0.0;
    std::size_t manhattan_calls = 0;
    std::size_t wriggle_calls = 0;
    std::size_t tunnel_calls = 0;
    std::size_t triplestep_calls = 0;
    std::size_t vertices_total = 0;
    std::size_t edges_total = 0;
    std::vector<std::size_t> vertices_per_level;
    std::vector<std::size_t> edges_per_level;
    std::vector<State> path;
    std::string error;  // set when the run threw
};

inline constexpr const char* kCsvHeader =
    "scenario,planner,seed,solved,wall_time_s,cost,manhattan_calls,wriggle_calls,tunnel_calls,triplestep_calls,"
    "vertices_total,edges_total";

/// Loads a builtin by name, otherwise reads the file at that path.
[[nodiscard]] inline Scenario resolve_scenario(const std::string& name_or_path) {
    const auto names = builtin_scenario_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_scenario(name_or_path);
    std::ifstream in(name_or_path);
    if (!in) throw ScenarioError("cannot open scenario '" + name_or_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

/// Dense re-check of a top-level path with unpadded geometry at 10x finer resolution.
[[nodiscard]] inline bool revalidate_path(const Scenario& s, const std::vector<State>& path) {
    if (path.empty()) return false;
    const std::size_t K = s.levels();
    const ValidityChecker oracle = s.exact_checker(K, s.ladder.checker(K).resolution / 10.0);
    if (!check_motion(oracle, s.space(K), std::span<const State>(path)).reached) return false;
    if (path.front() != s.start) return false;
    return s.space(K).distance(path.back(), s.goal) <= s.goal_tolerance;
}

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline void fill_record(BenchRecord& r, const PlanResult& res) {
    for (const auto& lv : res.levels) {
        r.manhattan_calls += lv.patterns.calls_of(PatternKind::Manhattan);
        r.wriggle_calls += lv.patterns.calls_of(PatternKind::Wriggle);
        r.tunnel_calls += lv.patterns.calls_of(PatternKind::Tunnel);
        r.triplestep_calls += lv.patterns.calls_of(PatternKind::TripleStep);
        r.vertices_per_level.push_back(lv.vertices);
        r.edges_per_level.push_back(lv.edges);
        r.vertices_total += lv.vertices;
        r.edges_total += lv.edges;
    }
}

}  // namespace detail

[[nodiscard]] inline std::string csv_row(const BenchRecord& r) {
    std::ostringstream os;
    os << r.scenario << ',' << r.planner << ',' << r.seed << ',' << (r.solved ? 1 : 0) << ','
       << detail::fixed6(r.wall_time) << ',' << detail::fixed6(r.cost) << ',' << r.manhattan_calls << ','
       << r.wriggle_calls << ',' << r.tunnel_calls << ',' << r.triplestep_calls << ',' << r.vertices_total << ','
       << r.edges_total;
    return os.str();
}

/// Header plus one row per record, sorted by (scenario, planner, seed).
[[nodiscard]] inline std::string emit_csv(std::vector<BenchRecord> records) {
    std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        return std::tie(a.scenario, a.planner, a.seed) < std::tie(b.scenario, b.planner, b.seed);
    });
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : records) out += csv_row(r) + "\n";
    return out;
}

[[nodiscard]] inline std::vector<BenchRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
    std::vector<BenchRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 12) throw std::runtime_error("csv: line " + std::to_string(lineno) + " has wrong field count");
        BenchRecord r;
        try {
            r.scenario = f[0];
            r.planner = f[1];
            r.seed = std::stoull(f[2]);
            r.solved = f[3] == "1";
            r.wall_time = std::stod(f[4]);
            r.cost = std::stod(f[5]);
            r.manhattan_calls = std::stoull(f[6]);
            r.wriggle_calls = std::stoull(f[7]);
            r.tunnel_calls = std::stoull(f[8]);
            r.triplestep_calls = std::stoull(f[9]);
            r.vertices_total = std::stoull(f[10]);
            r.edges_total = std::stoull(f[11]);
        } catch (const std::logic_error&) {
            throw std::runtime_error("csv: line " + std::to_string(lineno) + " is malformed");
        }
        out.push_back(std::move(r));
    }
    return out;
}

/// One planner run on one scenario. Unsolved runs report the cutoff as their time.
[[nodiscard]] inline BenchRecord run_single(const Scenario& s, PlannerKind kind, std::uint64_t seed, double cutoff,
                                            ClockKind clock, const PlannerConfig& config) {
    BenchRecord r;
    r.scenario = s.name;
    r.planner = to_string(kind);
    r.seed = seed;
    try {
        RandomSource rng(seed);
        const MultilevelProblem problem = is_multilevel(kind) ? s.problem() : s.flat_problem();
        const PlanResult res = plan(problem, kind, config, Ptc::seconds(cutoff, clock), rng);
        detail::fill_record(r, res);
        r.solved = res.solved && res.wall_time <= cutoff && revalidate_path(s, res.path);
        if (r.solved) {
            r.wall_time = res.wall_time;
            r.cost = res.cost;
            r.path = res.path;
        }
    } catch (const std::exception& e) {
        r.error = e.what();
        r.solved = false;
    }
    if (!r.solved) {
        r.wall_time = cutoff;
        r.cost = 0.0;
    }
    return r;
}

inline void write_path_file(const std::filesystem::path& file, const std::vector<State>& path) {
    std::ofstream out(file);
    for (const auto& x : path) {
        for (std::size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << detail::format_real(x[i]);
        out << "\n";
    }
}

[[nodiscard]] inline std::vector<State> read_path_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open path file '" + file + "'");
    std::vector<State> path;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> v;
        for (double d; ls >> d;) v.push_back(d);
        if (!ls.eof()) throw std::runtime_error("path file: malformed line");
        path.emplace_back(std::move(v));
    }
    return path;
}

/// Runs every (scenario, planner, seed) cell. Records are appended to
/// out_dir/results.partial.csv as cells finish; results.csv is written in
/// sorted order at the end, and solved paths go to out_dir/paths/.
[[nodiscard]] inline std::vector<BenchRecord> run_benchmark(
    const BenchConfig& config, const std::function<void(const BenchRecord&)>& on_record = {}) {
    require(config.runs >= 1, "bench: runs >= 1");
    require(config.cutoff > 0.0, "bench: cutoff > 0");
    std::vector<Scenario> scenarios;
    for (const auto& name : config.scenarios) scenarios.push_back(resolve_scenario(name));

    struct Cell {
        std::size_t scenario;
        PlannerKind planner;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        for (PlannerKind p : config.planners)
            for (std::size_t i = 0; i < config.runs; ++i) cells.push_back({s, p, config.seed + i});

    namespace fs = std::filesystem;
    std::ofstream partial;
    if (!config.out_dir.empty()) {
        fs::create_directories(fs::path(config.out_dir) / "paths");
        partial.open(fs::path(config.out_dir) / "results.partial.csv");
        partial << kCsvHeader << "\n" << std::flush;
    }

    std::vector<BenchRecord> records(cells.size());
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            BenchRecord r = run_single(scenarios[c.scenario], c.planner, c.seed, config.cutoff, config.clock,
                                       config.planner);
            std::lock_guard lock(mu);
            if (partial.is_open()) partial << csv_row(r) << "\n" << std::flush;
            if (!config.out_dir.empty() && r.solved)
                write_path_file(fs::path(config.out_dir) / "paths" /
                                    (r.scenario + "__" + r.planner + "__" + std::to_string(r.seed) + ".txt"),
                                r.path);
            if (on_record) on_record(r);
            records[i] = std::move(r);
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(config.parallel, cells.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!config.out_dir.empty()) {
        std::ofstream(fs::path(config.out_dir) / "results.csv") << emit_csv(records);
        partial.close();
        fs::remove(fs::path(config.out_dir) / "results.partial.csv");
    }
    return records;
}

struct SummaryRow {
    std::string scenario;
    std::string planner;
    std::size_t runs = 0;
    std::size_t solved = 0;
    double mean_time = 0.0;
    bool best = false;
};

[[nodiscard]] inline std::vector<SummaryRow> summary_rows(const std::vector<BenchRecord>& records) {
    std::map<std::pair<std::string, std::string>, SummaryRow> cells;
    for (const auto& r : records) {
        auto& row = cells[{r.scenario, r.planner}];
        row.scenario = r.scenario;
        row.planner = r.planner;
        ++row.runs;
        row.solved += r.solved ? 1 : 0;
        row.mean_time += r.wall_time;  // timeouts already sit at the cutoff
    }
    std::vector<SummaryRow> rows;
    for (auto& [k, row] : cells) {
        row.mean_time /= static_cast<double>(row.runs);
        rows.push_back(row);
    }
    std::map<std::string, std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto it = best.find(rows[i].scenario);
        if (it == best.end() || rows[i].mean_time < rows[it->second].mean_time) best[rows[i].scenario] = i;
    }
    for (const auto& [s, i] : best) rows[i].best = true;
    return rows;
}

/// Fixed-width table of mean time (timeouts at the cutoff) and success rate;
/// '*' marks the fastest planner of each scenario.
[[nodiscard]] inline std::string summarize(const std::vector<BenchRecord>& records) {
    const auto rows = summary_rows(records);
    std::ostringstream os;
    os << std::left << std::setw(20) << "scenario" << std::setw(8) << "planner" << std::right << std::setw(12)
       << "mean_time_s" << std::setw(10) << "solved" << "  best\n";
    for (const auto& r : rows) {
        char solved[32];
        std::snprintf(solved, sizeof solved, "%zu/%zu", r.solved, r.runs);
        char mean[32];
        std::snprintf(mean, sizeof mean, "%.2f", r.mean_time);
        os << std::left << std::setw(20) << r.scenario << std::setw(8) << r.planner << std::right << std::setw(12)
           << mean << std::setw(10) << solved << (r.best ? "  *" : "") << "\n";
    }
    return os.str();
}

// ── SVG ──────────────────────────────────────────────────────────────────────

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    if (std::string(buf) == "-0") return "0";
    return buf;
}

inline std::string svg_points(const std::vector<Vec2>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + svg_num(pts[i].x) + "," + svg_num(pts[i].y);
    return s;
}

inline void svg_robot(std::ostream& os, const RobotModel& robot, const State& x, const std::string& attrs) {
    if (const auto* d = std::get_if<DiskRobot>(&robot)) {
        os << "<circle cx=\"" << svg_num(x[0]) << "\" cy=\"" << svg_num(x[1]) << "\" r=\"" << svg_num(d->radius)
           << "\" " << attrs << "/>";
        return;
    }
    for (const auto& poly : posed_polygons(robot, x))
        os << "<polygon points=\"" << svg_points(poly.vertices()) << "\" " << attrs << "/>";
}

}  // namespace detail

/// Standalone SVG: frame, obstacles, n_ghosts poses evenly spaced by path
/// length, start in green, goal in red, and the reference point trace.
[[nodiscard]] inline std::string emit_svg(const World& world, const std::vector<State>& path, const RobotModel& robot,
                                          std::size_t n_ghosts, const StateSpace* space = nullptr) {
    if (path.empty()) throw std::invalid_argument("emit_svg: path must not be empty");
    using detail::svg_num;
    const double w = world.upper.x - world.lower.x, h = world.upper.y - world.lower.y;
    const double stroke = 0.004 * std::max(w, h);
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_num(world.lower.x) << " "
       << svg_num(-world.upper.y) << " " << svg_num(w) << " " << svg_num(h) << "\" width=\"800\" height=\""
       << svg_num(800.0 * h / w) << "\">\n";
    os << "<g transform=\"scale(1,-1)\">\n";
    os << "<rect class=\"frame\" x=\"" << svg_num(world.lower.x) << "\" y=\"" << svg_num(world.lower.y)
       << "\" width=\"" << svg_num(w) << "\" height=\"" << svg_num(h) << "\" fill=\"white\" stroke=\"black\" stroke-width=\""
       << svg_num(stroke) << "\"/>\n";
    os << "<g class=\"obstacles\" fill=\"#555555\">\n";
    for (const auto& o : world.obstacles) os << "<polygon points=\"" << detail::svg_points(o.vertices()) << "\"/>\n";
    os << "</g>\n";

    // Ghost poses at evenly spaced fractions of the cumulative path length.
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double d = space ? space->distance(path[i - 1], path[i])
                               : std::hypot(path[i][0] - path[i - 1][0], path[i][1] - path[i - 1][1]);
        cum.push_back(cum.back() + d);
    }
    auto at = [&](double f) -> State {
        const double l = f * cum.back();
        if (path.size() == 1 || cum.back() == 0.0) return path.front();
        std::size_t i = 0;
        while (i + 2 < path.size() && cum[i + 1] < l) ++i;
        const double seg = cum[i + 1] - cum[i];
        const double t = seg > 0.0 ? std::clamp((l - cum[i]) / seg, 0.0, 1.0) : 0.0;
        if (space) return space->interpolate(path[i], path[i + 1], t);
        State x = path[i];
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = path[i][k] + t * (path[i + 1][k] - path[i][k]);
        return x;
    };
    for (std::size_t g = 0; g < n_ghosts; ++g) {
        const double f = n_ghosts == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(n_ghosts - 1);
        os << "<g class=\"ghost\" fill=\"#4a7fd4\" fill-opacity=\"0.25\" stroke=\"#1f4e9c\" stroke-width=\""
           << svg_num(stroke * 0.5) << "\">";
        detail::svg_robot(os, robot, at(f), "");
        os << "</g>\n";
    }
    os << "<g class=\"start\" fill=\"#2ca02c\" fill-opacity=\"0.6\">";
    detail::svg_robot(os, robot, path.front(), "");
    os << "</g>\n";
    os << "<g class=\"goal\" fill=\"#d62728\" fill-opacity=\"0.6\">";
    detail::svg_robot(os, robot, path.back(), "");
    os << "</g>\n";
    std::vector<Vec2> trace;
    for (const auto& x : path) trace.push_back({x[0], x[1]});
    os << "<polyline class=\"trace\" fill=\"none\" stroke=\"black\" stroke-width=\"" << svg_num(stroke * 0.5)
       << "\" points=\"" << detail::svg_points(trace) << "\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace fiberdance
