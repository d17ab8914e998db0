#include "waypath/depgraph.hpp"

#include <algorithm>
#include <sstream>

#include "waypath/errors.hpp"

namespace waypath {

DependencyGraph DependencyGraph::from_edges(
    int n, const std::vector<std::pair<int, int>>& edges) {
    DependencyGraph d;
    d.n_ = n;
    d.out_.resize(n);
    d.in_.resize(n);
    d.depth_.assign(n, 0);
    for (const auto& [a, b] : edges) {
        d.out_[a].push_back(b);
        d.in_[b].push_back(a);
        ++d.edges_;
    }
    for (int c = 0; c < n; ++c) {
        std::sort(d.out_[c].begin(), d.out_[c].end());
        d.out_[c].erase(std::unique(d.out_[c].begin(), d.out_[c].end()), d.out_[c].end());
        std::sort(d.in_[c].begin(), d.in_[c].end());
        d.in_[c].erase(std::unique(d.in_[c].begin(), d.in_[c].end()), d.in_[c].end());
    }
    d.edges_ = 0;
    for (int c = 0; c < n; ++c) d.edges_ += d.out_[c].size();

    const std::vector<int> topo = d.topological_order();
    if (static_cast<int>(topo.size()) != n)
        throw Error("edge list contains a cycle");
    for (int c : topo)
        for (int u : d.out_[c]) d.depth_[u] = std::max(d.depth_[u], d.depth_[c] + 1);
    for (int c = 0; c < n; ++c) d.max_depth_ = std::max(d.max_depth_, d.depth_[c]);
    return d;
}

bool DependencyGraph::has_edge(int dependee, int depender) const {
    const std::vector<int>& row = out_[dependee];
    return std::binary_search(row.begin(), row.end(), depender);
}

std::vector<int> DependencyGraph::dependees(int c) const {
    DynamicBitset seen(n_);
    std::vector<int> stack(in_[c]);
    for (int v : stack) seen.set(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : in_[v]) {
            if (!seen.test(u)) {
                seen.set(u);
                stack.push_back(u);
            }
        }
    }
    std::vector<int> out;
    seen.for_each([&out](std::size_t i) { out.push_back(static_cast<int>(i)); });
    return out;
}

std::vector<int> DependencyGraph::dependers(int c) const {
    DynamicBitset seen(n_);
    std::vector<int> stack(out_[c]);
    for (int v : stack) seen.set(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : out_[v]) {
            if (!seen.test(u)) {
                seen.set(u);
                stack.push_back(u);
            }
        }
    }
    std::vector<int> out;
    seen.for_each([&out](std::size_t i) { out.push_back(static_cast<int>(i)); });
    return out;
}

bool DependencyGraph::is_feasible_order(std::span<const int> order) const {
    if (order.size() != static_cast<std::size_t>(n_))
        throw NotAPermutationError("order has " + std::to_string(order.size()) +
                                   " entries, expected " + std::to_string(n_));
    std::vector<int> pos(n_, -1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        int c = order[k];
        if (c < 0 || c >= n_)
            throw NotAPermutationError("id " + std::to_string(c) + " out of range");
        if (pos[c] != -1)
            throw NotAPermutationError("id " + std::to_string(c) + " repeated");
        pos[c] = static_cast<int>(k);
    }
    for (int a = 0; a < n_; ++a)
        for (int b : out_[a])
            if (pos[a] >= pos[b]) return false;
    return true;
}

std::vector<int> DependencyGraph::topological_order() const {
    std::vector<int> indeg(n_);
    for (int c = 0; c < n_; ++c) indeg[c] = static_cast<int>(in_[c].size());
    // Lowest id first among the ready set keeps the order deterministic.
    std::vector<int> ready;
    for (int c = 0; c < n_; ++c)
        if (indeg[c] == 0) ready.push_back(c);
    std::vector<int> order;
    order.reserve(n_);
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), std::greater<>());
        int c = ready.back();
        ready.pop_back();
        order.push_back(c);
        for (int u : out_[c]) {
            if (--indeg[u] == 0) {
                ready.push_back(u);
                std::push_heap(ready.begin(), ready.end(), std::greater<>());
            }
        }
    }
    return order;
}

std::string DependencyGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph dependencies {\n  rankdir=BT;\n";
    for (int depth = 0; depth <= max_depth_; ++depth) {
        os << "  { rank=same;";
        for (int c = 0; c < n_; ++c)
            if (depth_[c] == depth) os << " c" << c << ";";
        os << " }\n";
    }
    for (int c = 0; c < n_; ++c)
        os << "  c" << c << " [label=\"" << c << " (d" << depth_[c] << ")\"];\n";
    for (int a = 0; a < n_; ++a)
        for (int b : out_[a]) os << "  c" << a << " -> c" << b << ";\n";
    os << "}\n";
    return os.str();
}

DependencyGraph build_dependency_graph(const Model& m, const ExtruderGeometry& g) {
    DependencyGraph d;
    d.n_ = static_cast<int>(m.contours.size());
    d.out_.resize(d.n_);
    d.in_.resize(d.n_);
    d.depth_.assign(d.n_, 0);

    for (int i = 0; i < d.n_; ++i) {
        const Contour& ci = m.contours[i];
        for (int j = 0; j < d.n_; ++j) {
            const Contour& cj = m.contours[j];
            if (ci.layer >= cj.layer) continue;
            const double dz = m.layer_heights[cj.layer] - m.layer_heights[ci.layer];
            const double limit = g.nozzle_clearance_radius + g.cone_slope * dz;
            if (footprint_clearance(ci, cj) <= limit + kMmTolerance) {
                d.out_[i].push_back(j);
                d.in_[j].push_back(i);
                ++d.edges_;
            }
        }
    }
    for (int c = 0; c < d.n_; ++c) {
        std::sort(d.out_[c].begin(), d.out_[c].end());
        std::sort(d.in_[c].begin(), d.in_[c].end());
    }

    // Longest path from roots, propagated along a topological order.
    for (int c : d.topological_order())
        for (int u : d.out_[c])
            d.depth_[u] = std::max(d.depth_[u], d.depth_[c] + 1);
    for (int c = 0; c < d.n_; ++c) d.max_depth_ = std::max(d.max_depth_, d.depth_[c]);
    return d;
}

TransitiveClosure::TransitiveClosure(const DependencyGraph& d) {
    const int n = d.contour_count();
    anc_.assign(n, DynamicBitset(n));
    desc_.assign(n, DynamicBitset(n));
    const std::vector<int> topo = d.topological_order();
    for (int c : topo) {
        for (int u : d.direct_dependees(c)) {
            anc_[c] |= anc_[u];
            anc_[c].set(u);
        }
    }
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        for (int u : d.direct_dependers(*it)) {
            desc_[*it] |= desc_[u];
            desc_[*it].set(u);
        }
    }
}

}  // namespace waypath
