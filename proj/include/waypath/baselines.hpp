#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "waypath/depgraph.hpp"
#include "waypath/geometry.hpp"

namespace waypath {

// A feasible total order of contours with its extrusionless travel.
struct Toolpath {
    std::vector<int> order;
    double travel = 0.0;
    std::string planner;
};

// Slicer-style plan: layers in ascending order, greedy nearest-neighbor
// within each layer starting from the previous layer's exit point.
Toolpath plan_layerwise(const Model& m, const DependencyGraph& d);

// Repeatedly prints the feasible unprinted contour nearest to the current
// position, starting from contour 0's start point. Ties by lowest id.
Toolpath plan_greedy(const Model& m, const DependencyGraph& d);

// Feasibility-preserving first-improvement descent from the layerwise plan.
// Neighborhood: relocating one contour within its dependency window, and
// reversing a subsequence with no internal dependency edges. Candidates are
// scanned in a seeded random order; stops at a local optimum or after
// max_passes full passes.
Toolpath plan_local_search(const Model& m, const DependencyGraph& d,
                           std::uint64_t seed, int max_passes = 50);

// Exhaustive depth-first enumeration of topological orders with
// branch-and-bound pruning on partial travel. Globally optimal. Throws
// TooLargeError when the model has more than `limit` contours.
Toolpath plan_exact(const Model& m, const DependencyGraph& d, int limit = 9);

}  // namespace waypath
