#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "waypath/clustering.hpp"
#include "waypath/depgraph.hpp"
#include "waypath/geometry.hpp"

namespace waypath {

// One complete feasible ordering sampled during search.
struct Rollout {
    std::vector<int> order;      // cluster ids, a topological order of the cluster DAG
    std::vector<int> flattened;  // contour ids, feasible for the dependency graph
    double travel = 0.0;         // extrusionless travel of the flattened order, mm
    double reward = 0.0;         // (upper_bound - travel) / upper_bound, in (0, 1]
};

enum class RolloutPolicy { uniform, greedy_biased };

struct SearchConfig {
    double ucb_constant = std::numbers::sqrt2;
    std::uint64_t seed = 0;
    std::int64_t max_iterations = -1;  // < 0 means unlimited
    std::chrono::milliseconds wall_budget{0};            // 0 means unlimited
    std::chrono::milliseconds stagnation_budget{300000}; // stop after 5 min without improvement
    RolloutPolicy rollout_policy = RolloutPolicy::uniform;
    double greedy_bias = 0.0;  // probability of a greedy-nearest step under greedy_biased
    // Test/diagnostic hook, called once per simulated rollout. Does not affect
    // the search when null.
    std::function<void(const Rollout&)> on_rollout;
};

struct TraceEntry {
    std::int64_t iteration = 0;
    std::int64_t elapsed_ms = 0;
    double best_travel = 0.0;
};

struct SearchResult {
    Rollout best;
    std::vector<TraceEntry> trace;  // appended whenever the best rollout improves
    std::int64_t iterations = 0;
    std::int64_t elapsed_ms = 0;
};

// Reward normalizer: the longest single travel hop between any ordered contour
// pair times the contour count. Strictly above any achievable travel, so
// rewards stay in (0, 1]. Defined as 1 when no positive hop exists.
double travel_upper_bound(const Model& m);

// Total extrusionless travel of a contour order: the sum of end-to-start hops
// between consecutive contours. The initial move to the first contour is not
// counted, so the value depends only on the ordering. Throws
// InfeasibleToolpathError when the order violates the dependency graph.
double evaluate_toolpath(const Model& m, const DependencyGraph& d,
                         std::span<const int> order);

// Expands a topological cluster order into a contour order, threading the
// extruder position from each cluster's exit into the next cluster's
// intra-cluster sequencing. The first cluster starts from its own lowest
// entry; the initial hop is never part of the travel sum anyway.
std::vector<int> flatten(const ClusteredGraph& cg, std::span<const int> cluster_order,
                         const Model& m, const DependencyGraph& d);

// Anytime UCB1 tree search over topological orders of the cluster DAG.
// Deterministic for a fixed (model, config, seed). Runs at least one
// iteration; stops on the iteration cap, the wall budget, or when the best
// solution has not improved within the stagnation budget.
SearchResult search(const Model& m, const DependencyGraph& d, const ClusteredGraph& cg,
                    const SearchConfig& cfg);

// CSV rendering of the improvement trace: iteration,elapsed_ms,best_travel_mm.
// elapsed_ms is written as 0 unless include_wallclock is set, keeping the
// default output byte-identical across runs.
std::string trace_csv(const SearchResult& r, bool include_wallclock = false);

}  // namespace waypath
