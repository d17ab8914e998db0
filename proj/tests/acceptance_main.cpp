// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Drives the library directly and the CLI binary (via WAYPATH_CLI)
// for the end-to-end determinism check; golden parser inputs come from
// WAYPATH_DATA/gcode_corpus.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "waypath/baselines.hpp"
#include "waypath/bench.hpp"
#include "waypath/clustering.hpp"
#include "waypath/depgraph.hpp"
#include "waypath/mcts.hpp"
#include "waypath/model_io.hpp"
#include "waypath/util.hpp"

using namespace waypath;
namespace fs = std::filesystem;

namespace {

struct CriterionFailure {
    std::string detail;
};

void fail(const std::string& detail) { throw CriterionFailure{detail}; }

void require(bool ok, const std::string& detail) {
    if (!ok) fail(detail);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- exact convergence -------------------------------------------------------

void criterion_exact_convergence() {
    const auto t0 = std::chrono::steady_clock::now();
    int matched = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 4 + static_cast<int>(seed % 5);  // 4..8 contours
        const Model m = generate_random_model(n, 3, seed);
        const DependencyGraph d = build_dependency_graph(m, {2.0, 0.0});
        const ClusteredGraph cg = cluster_dependency_graph(d, {1.5});
        if (cg.cluster_count() != n) fail("singleton clustering was not forced");

        SearchConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = 10000;
        cfg.stagnation_budget = std::chrono::milliseconds(0);
        const SearchResult res = search(m, d, cg, cfg);
        const Toolpath exact = plan_exact(m, d, 9);
        if (std::abs(res.best.travel - exact.travel) <= 1e-9) ++matched;
    }
    const double elapsed = seconds_since(t0);
    require(matched >= 19, "only " + std::to_string(matched) + "/20 matched optimum");
    require(elapsed < 30.0, "took " + std::to_string(elapsed) + "s (budget 30s)");
}

// --- tower benchmark reduction -----------------------------------------------

void criterion_tower_reduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const Model m = generate_towers(4, 20, 40.0, 4.0, 1);  // spacing = 10 x side
    const DependencyGraph d = build_dependency_graph(m, {1.0, 0.0});
    const ClusteredGraph cg = cluster_dependency_graph(d, {0.5});

    const double base = plan_layerwise(m, d).travel;
    SearchConfig cfg;
    cfg.seed = 1;
    cfg.max_iterations = 3000;
    cfg.stagnation_budget = std::chrono::milliseconds(0);
    const SearchResult res = search(m, d, cg, cfg);

    const double reduction = 100.0 * (base - res.best.travel) / base;
    const double elapsed = seconds_since(t0);
    require(reduction >= 50.0,
            "reduction " + format_double(reduction) + "% is below 50%");
    require(elapsed < 60.0, "took " + std::to_string(elapsed) + "s (budget 60s)");
}

// --- reward bounds ------------------------------------------------------------

void criterion_reward_bounds() {
    std::int64_t checked = 0;
    for (std::uint64_t seed = 1; checked < 10000; ++seed) {
        const int n = 2 + static_cast<int>(seed % 11);
        const Model m = generate_random_model(n, 4, seed);
        const DependencyGraph d = build_dependency_graph(m, {2.0, 0.5});
        const ClusteredGraph cg = cluster_dependency_graph(d, {0.5});

        SearchConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = 200;
        cfg.stagnation_budget = std::chrono::milliseconds(0);
        cfg.on_rollout = [&](const Rollout& r) {
            ++checked;
            if (!(r.reward > 0.0 && r.reward <= 1.0))
                fail("reward " + format_double(r.reward) + " outside (0,1]");
            if ((r.reward == 1.0) != (r.travel == 0.0))
                fail("reward 1 must coincide with zero travel (travel " +
                     format_double(r.travel) + ")");
        };
        (void)search(m, d, cg, cfg);
    }
}

// --- feasibility ----------------------------------------------------------------

void criterion_feasibility() {
    int toolpaths = 0;
    int rollouts_checked = 0;
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
        const int n = 3 + static_cast<int>(seed % 10);
        const Model m = generate_random_model(n, 4, seed);
        const DependencyGraph d = build_dependency_graph(m, {2.0, 0.5});
        const ClusteredGraph cg = cluster_dependency_graph(d, {0.5});

        auto check = [&](const Toolpath& t) {
            if (!d.is_feasible_order(t.order))
                fail(t.planner + " emitted an infeasible order on seed " +
                     std::to_string(seed));
            ++toolpaths;
        };
        check(plan_layerwise(m, d));
        check(plan_greedy(m, d));
        check(plan_local_search(m, d, seed, 10));

        SearchConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = 60;
        cfg.stagnation_budget = std::chrono::milliseconds(0);
        if (rollouts_checked < 100) {
            cfg.on_rollout = [&](const Rollout& r) {
                if (rollouts_checked >= 100) return;
                ++rollouts_checked;
                if (!d.is_feasible_order(r.flattened))
                    fail("mcts rollout infeasible on seed " + std::to_string(seed));
            };
        }
        const SearchResult res = search(m, d, cg, cfg);
        Toolpath mcts_path;
        mcts_path.order = res.best.flattened;
        mcts_path.travel = res.best.travel;
        mcts_path.planner = "mcts";
        check(mcts_path);
    }
    require(toolpaths >= 1000, "only " + std::to_string(toolpaths) + " toolpaths");
    require(rollouts_checked >= 100,
            "only " + std::to_string(rollouts_checked) + " rollouts spot-checked");
}

// --- clustering structure -------------------------------------------------------

void criterion_clustering_structure() {
    {  // three independent stacks of 5, 5 and 6 contours
        std::vector<Contour> contours;
        int id = 0;
        const double xs[3] = {0.0, 50.0, 100.0};
        const int heights[3] = {5, 5, 6};
        for (int s = 0; s < 3; ++s) {
            for (int l = 0; l < heights[s]; ++l) {
                Contour c;
                c.id = id++;
                c.closed = true;
                const double x = xs[s], z = 0.3 * (l + 1);
                c.segments = {{{x, 0, z}, {x + 2, 0, z}},
                              {{x + 2, 0, z}, {x + 2, 2, z}},
                              {{x + 2, 2, z}, {x, 2, z}},
                              {{x, 2, z}, {x, 0, z}}};
                contours.push_back(std::move(c));
            }
        }
        Model m;
        m.contours = std::move(contours);
        std::vector<double> z;
        for (const Contour& c : m.contours) z.push_back(c.segments[0].start.z);
        assign_layers(m, z);
        const DependencyGraph d = build_dependency_graph(m, {1.0, 0.0});
        const int count = cluster_dependency_graph(d, {0.5}).cluster_count();
        require(count == 3, "three stacks gave " + std::to_string(count) + " clusters");
    }
    {  // fully dependent two-layer bipartite stack
        const Model m = generate_plate_stack(2, 4, 4.0, 1.0, 1);
        const DependencyGraph d = build_dependency_graph(m, {30.0, 0.0});
        for (int i = 0; i < 4; ++i)
            for (int j = 4; j < 8; ++j)
                require(d.has_edge(i, j), "stack is not complete bipartite");
        const int count = cluster_dependency_graph(d, {0.5}).cluster_count();
        require(count == 1, "bipartite stack gave " + std::to_string(count));
    }
    {  // monotone cluster counts across the gamma grid on 50 random models
        const double grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const int n = 6 + static_cast<int>(seed % 10);
            const Model m = generate_random_model(n, 4, seed);
            const DependencyGraph d = build_dependency_graph(m, {2.0, 0.5});
            int prev = 0;
            for (double gamma : grid) {
                const int count =
                    cluster_dependency_graph(d, {gamma}).cluster_count();
                if (count < prev)
                    fail("cluster count dropped from " + std::to_string(prev) +
                         " to " + std::to_string(count) + " at gamma " +
                         format_double(gamma) + " on seed " + std::to_string(seed));
                prev = count;
            }
        }
    }
}

// --- CLI determinism -------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_determinism() {
    const char* cli = std::getenv("WAYPATH_CLI");
    if (!cli) fail("WAYPATH_CLI is not set");

    const fs::path dir =
        fs::temp_directory_path() / ("waypath_acc_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path model = dir / "model.json";
    {
        std::ofstream out(model, std::ios::binary);
        out << emit_native(generate_random_model(14, 4, 9));
    }

    auto run_once = [&](const std::string& tag) {
        const fs::path gcode = dir / (tag + ".gcode");
        const fs::path trace = dir / (tag + ".csv");
        const fs::path stdout_file = dir / (tag + ".out");
        const std::string cmd = std::string(cli) + " plan " + model.string() +
                                " --planner mcts --seed 42 --iterations 5000" +
                                " --stagnation-ms 0 --gcode " + gcode.string() +
                                " --trace " + trace.string() + " > " +
                                stdout_file.string() + " 2> /dev/null";
        if (std::system(cmd.c_str()) != 0) fail("plan invocation failed");
        return std::tuple<std::string, std::string, std::string>(
            slurp(gcode), slurp(trace), slurp(stdout_file));
    };
    const auto a = run_once("a");
    const auto b = run_once("b");
    require(std::get<0>(a) == std::get<0>(b), "G-code differs between runs");
    require(std::get<1>(a) == std::get<1>(b), "trace CSV differs between runs");
    require(std::get<2>(a) == std::get<2>(b), "summary line differs between runs");
    require(!std::get<0>(a).empty(), "no G-code produced");
    require(std::get<1>(a).rfind("iteration,elapsed_ms,best_travel_mm\n", 0) == 0,
            "trace header wrong");
    fs::remove_all(dir);
}

// --- parser golden corpus ---------------------------------------------------------

void criterion_parser_golden() {
    const char* data = std::getenv("WAYPATH_DATA");
    if (!data) fail("WAYPATH_DATA is not set");
    const fs::path corpus = fs::path(data) / "gcode_corpus";
    if (!fs::exists(corpus)) fail("corpus directory missing: " + corpus.string());

    int checked = 0;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus))
        if (entry.path().extension() == ".gcode") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        fs::path golden = file;
        golden.replace_extension(".json");
        if (!fs::exists(golden)) fail("missing golden for " + file.filename().string());
        const Model m = parse_gcode(slurp(file), file.stem().string());
        const std::string emitted = emit_native(m);
        if (emitted != slurp(golden))
            fail("golden mismatch for " + file.filename().string());
        ++checked;
    }
    require(checked >= 20,
            "corpus has only " + std::to_string(checked) + " files (need 20)");
}

// --- anytime trace -----------------------------------------------------------------

void criterion_anytime_trace() {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int n = 4 + static_cast<int>(seed % 12);
        const Model m = generate_random_model(n, 4, seed);
        const DependencyGraph d = build_dependency_graph(m, {2.0, 0.5});
        const ClusteredGraph cg = cluster_dependency_graph(d, {0.5});
        SearchConfig cfg;
        cfg.seed = seed * 31;
        cfg.max_iterations = 400;
        cfg.stagnation_budget = std::chrono::milliseconds(0);
        const SearchResult res = search(m, d, cg, cfg);
        if (res.trace.empty()) fail("empty trace on seed " + std::to_string(seed));
        for (std::size_t k = 1; k < res.trace.size(); ++k)
            if (res.trace[k].best_travel > res.trace[k - 1].best_travel)
                fail("trace increased on seed " + std::to_string(seed));
        if (std::abs(res.trace.back().best_travel - res.best.travel) > 1e-12)
            fail("trace tail does not match the best rollout");
    }
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {"exact-convergence", criterion_exact_convergence},
        {"tower-benchmark-reduction", criterion_tower_reduction},
        {"reward-bounds", criterion_reward_bounds},
        {"feasibility", criterion_feasibility},
        {"clustering-structure", criterion_clustering_structure},
        {"determinism", criterion_determinism},
        {"parser-golden", criterion_parser_golden},
        {"anytime-trace", criterion_anytime_trace},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run();
            std::printf("[PASS] %s (%.1fs)\n", c.name, seconds_since(t0));
        } catch (const CriterionFailure& f) {
            ++failures;
            std::printf("[FAIL] %s: %s\n", c.name, f.detail.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %s: unexpected error: %s\n", c.name, e.what());
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
