#pragma once

#include <span>
#include <string>
#include <vector>

#include "waypath/depgraph.hpp"
#include "waypath/geometry.hpp"

namespace waypath {

// A highly dependent subgraph: one block of the contour partition.
struct Cluster {
    int id = -1;
    std::vector<int> members;  // sorted contour ids, non-empty
    int min_depth = 0;
    int max_depth = 0;
};

struct ConnectednessParams {
    // Pairs (and cluster pairs) merge when their degree of connectedness is
    // >= this value. Values above 1 disable merging entirely, leaving one
    // singleton cluster per contour.
    double gamma_threshold = 0.5;
};

// The DAG lifted over clusters. Clusters partition the contours; a cluster
// edge exists iff some contour edge crosses between the two member sets.
class ClusteredGraph {
public:
    int cluster_count() const { return static_cast<int>(clusters_.size()); }
    const Cluster& cluster(int id) const { return clusters_[id]; }
    const std::vector<Cluster>& clusters() const { return clusters_; }

    int cluster_of(int contour) const { return contour_to_cluster_[contour]; }

    const std::vector<int>& direct_dependers(int cluster) const { return out_[cluster]; }
    const std::vector<int>& direct_dependees(int cluster) const { return in_[cluster]; }
    std::size_t edge_count() const { return edges_; }

    // Deterministic topological order over clusters (lowest id first).
    std::vector<int> topological_order() const;

    std::string to_dot() const;
    // {"clusters":[{"id","color","depth_min","depth_max","members"}...]}
    std::string to_json() const;

    // Per-cluster render color, stable across runs.
    std::string color_of(int cluster) const;

    friend ClusteredGraph cluster_dependency_graph(const DependencyGraph& d,
                                                   const ConnectednessParams& p);

private:
    std::vector<Cluster> clusters_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<int> contour_to_cluster_;
    std::size_t edges_ = 0;
};

// Degree of connectedness between two distinct contours: the mean of the
// dependee-side and depender-side sharing ratios, each the min of
// |common| / |own| over the pair. A ratio with empty own set counts as 1
// (nothing to share makes sharing vacuously total). Throws SameContourError.
double degree_of_connectedness(const DependencyGraph& d, int i, int j);
double degree_of_connectedness(const TransitiveClosure& tc, int i, int j);

// True iff every pair of members not joined by a dependency edge that shares
// at least one dependee or depender is highly connected (gamma >= threshold).
bool is_highly_dependent(const DependencyGraph& d, std::span<const int> members,
                         const ConnectednessParams& p);

// Two-phase clustering. Phase 1 groups same-depth contours into connected
// components of the thresholded connectedness graph (pairs must share at
// least one dependee or depender to qualify). Phase 2 repeatedly merges
// dependency-adjacent cluster pairs whose cluster-level connectedness meets
// the threshold, skipping merges that would create a cycle, until fixpoint.
// Cluster-level sets exclude both clusters' own members, so the pair's
// internal dependency never counts against it.
ClusteredGraph cluster_dependency_graph(const DependencyGraph& d,
                                        const ConnectednessParams& p);

// Members ordered by ascending dependency depth; within one depth, greedy
// nearest-neighbor by travel distance starting from `entry`. Feasible for the
// induced subgraph because edges always increase depth.
std::vector<int> intra_cluster_sequence(const Cluster& h, const Model& m,
                                        const DependencyGraph& d, const Point3& entry);

}  // namespace waypath
