#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "waypath/bitset.hpp"
#include "waypath/geometry.hpp"

namespace waypath {

// Conservative frustum around the nozzle tip: a contour below blocks one above
// when their XY clearance is within radius + slope * (height difference).
// slope 0 degenerates to a cylinder.
struct ExtruderGeometry {
    double nozzle_clearance_radius = 1.0;  // mm
    double cone_slope = 0.0;               // extra mm of clearance per mm of height
};

// DAG over contour ids. An edge (dependee -> depender) means the source must
// be printed before the target. Acyclic by construction: edges only go from a
// lower layer to a strictly higher one. Immutable once built; queries are
// read-only and safe to share across threads.
class DependencyGraph {
public:
    DependencyGraph() = default;

    // Direct construction from an explicit edge list (dependee, depender).
    // Throws Error on a cycle. Depths are derived from the structure.
    static DependencyGraph from_edges(int n,
                                      const std::vector<std::pair<int, int>>& edges);

    int contour_count() const { return n_; }
    std::size_t edge_count() const { return edges_; }

    // Direct neighbors only, ascending id.
    const std::vector<int>& direct_dependers(int c) const { return out_[c]; }
    const std::vector<int>& direct_dependees(int c) const { return in_[c]; }

    bool has_edge(int dependee, int depender) const;

    // Longest-path distance from any root (no-dependee) contour; 0 for roots.
    int depth_of(int c) const { return depth_[c]; }
    int max_depth() const { return max_depth_; }

    // Full transitive ancestor / descendant sets, sorted ascending.
    std::vector<int> dependees(int c) const;
    std::vector<int> dependers(int c) const;

    // True iff every edge points forward in `order`. Throws NotAPermutationError
    // unless `order` is a permutation of 0..n-1.
    bool is_feasible_order(std::span<const int> order) const;

    // Deterministic topological order (Kahn, lowest id first).
    std::vector<int> topological_order() const;

    // Graphviz rendering, one rank per dependency depth.
    std::string to_dot() const;

    friend DependencyGraph build_dependency_graph(const Model& m,
                                                  const ExtruderGeometry& g);

private:
    int n_ = 0;
    int max_depth_ = 0;
    std::size_t edges_ = 0;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<int> depth_;
};

// Pairwise reachability rule: for layer(c_i) < layer(c_j), edge c_i -> c_j iff
// footprint_clearance(c_i, c_j) <= radius + slope * (z_j - z_i). Transitive
// edges are kept, not reduced.
DependencyGraph build_dependency_graph(const Model& m, const ExtruderGeometry& g);

// Reachability matrix over the graph: one ancestor and one descendant bitset
// per contour (self excluded). Shared by clustering's set arithmetic.
class TransitiveClosure {
public:
    explicit TransitiveClosure(const DependencyGraph& d);

    const DynamicBitset& ancestors(int c) const { return anc_[c]; }
    const DynamicBitset& descendants(int c) const { return desc_[c]; }

private:
    std::vector<DynamicBitset> anc_;
    std::vector<DynamicBitset> desc_;
};

}  // namespace waypath
