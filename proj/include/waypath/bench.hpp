#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "waypath/depgraph.hpp"
#include "waypath/geometry.hpp"

namespace waypath {

// Per-planner outcome on one model.
struct PlannerStats {
    bool ran = false;
    double travel_mm = 0.0;
    double reduction_pct = 0.0;  // 100 * (layerwise - travel) / layerwise
    std::int64_t iterations = 0; // search iterations (mcts only)
    std::int64_t wall_ms = 0;
    std::string error;  // non-empty when the planner failed on this model
};

struct BenchRow {
    std::string model;
    int contours = 0;
    int clusters = 0;
    std::uint64_t seed = 0;
    std::map<std::string, PlannerStats> planners;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // sorted by model name
    std::map<std::string, double> median_reduction_pct;

    // One row per model x planner:
    // model,planner,contours,clusters,seed,travel_mm,reduction_pct,iterations,wall_ms,error
    std::string to_csv() const;
    std::string to_json() const;
};

struct BenchConfig {
    double gamma = 0.5;
    ExtruderGeometry extruder{};
    std::uint64_t seed = 0;
    std::int64_t mcts_iterations = 20000;
    std::chrono::milliseconds mcts_wall{0};
    std::chrono::milliseconds mcts_stagnation{300000};
    int local_search_passes = 50;
    int exact_limit = 9;
    std::vector<std::string> planners{"layerwise", "greedy", "local", "mcts"};
    int jobs = 1;
};

// k square towers on a grid, one closed perimeter per tower per layer.
// Tower origins get a small seed-dependent jitter so seeds give distinct
// instances. Layer pitch 0.3 mm.
Model generate_towers(int k, int layers, double spacing, double side,
                      std::uint64_t seed);

// n random axis-aligned rectangles at random layers on a 100 mm bed.
Model generate_random_model(int n, int layers, std::uint64_t seed);

// `layers` levels of `per_layer` adjacent plates; with a wide enough
// clearance every lower plate blocks every upper one (fully dependent stack).
Model generate_plate_stack(int layers, int per_layer, double side, double gap,
                           std::uint64_t seed);

// Runs every configured planner on every model and aggregates median
// reductions vs. layerwise. exact runs only when the model fits its limit.
// Planner errors are recorded per row without aborting the batch.
BenchReport run_comparison(const std::vector<Model>& models, const BenchConfig& cfg);

}  // namespace waypath
