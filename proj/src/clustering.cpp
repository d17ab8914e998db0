#include "waypath/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "waypath/errors.hpp"

namespace waypath {

namespace {

double ratio_or_one(std::size_t common, std::size_t own) {
    return own == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(own);
}

double gamma_from_counts(std::size_t common_dep, std::size_t dep_i, std::size_t dep_j,
                         std::size_t common_des, std::size_t des_i, std::size_t des_j) {
    const double dependee_term =
        std::min(ratio_or_one(common_dep, dep_i), ratio_or_one(common_dep, dep_j));
    const double depender_term =
        std::min(ratio_or_one(common_des, des_i), ratio_or_one(common_des, des_j));
    return 0.5 * (dependee_term + depender_term);
}

}  // namespace

double degree_of_connectedness(const TransitiveClosure& tc, int i, int j) {
    if (i == j) throw SameContourError(i);
    const DynamicBitset& ai = tc.ancestors(i);
    const DynamicBitset& aj = tc.ancestors(j);
    const DynamicBitset& di = tc.descendants(i);
    const DynamicBitset& dj = tc.descendants(j);
    return gamma_from_counts(DynamicBitset::intersection_count(ai, aj), ai.count(),
                             aj.count(),
                             DynamicBitset::intersection_count(di, dj), di.count(),
                             dj.count());
}

double degree_of_connectedness(const DependencyGraph& d, int i, int j) {
    TransitiveClosure tc(d);
    return degree_of_connectedness(tc, i, j);
}

bool is_highly_dependent(const DependencyGraph& d, std::span<const int> members,
                         const ConnectednessParams& p) {
    TransitiveClosure tc(d);
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const int i = members[a];
            const int j = members[b];
            if (d.has_edge(i, j) || d.has_edge(j, i)) continue;
            const std::size_t common_dep =
                DynamicBitset::intersection_count(tc.ancestors(i), tc.ancestors(j));
            const std::size_t common_des =
                DynamicBitset::intersection_count(tc.descendants(i), tc.descendants(j));
            if (common_dep == 0 && common_des == 0) continue;
            if (degree_of_connectedness(tc, i, j) < p.gamma_threshold) return false;
        }
    }
    return true;
}

namespace {

// Working cluster during the merge fixpoint.
struct Block {
    bool alive = false;
    DynamicBitset members;   // contour ids
    DynamicBitset raw_anc;   // union of members' ancestor sets
    DynamicBitset raw_desc;  // union of members' descendant sets
    int min_depth = 0;
    int max_depth = 0;
    int min_member = 0;
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Connectedness between two blocks. Both blocks' own members are excluded
// from each side's dependee/depender sets before comparing, so the pair's
// internal dependency does not count against it.
double block_gamma(const Block& x, const Block& y) {
    DynamicBitset dep_x = x.raw_anc;
    dep_x.and_not(x.members);
    dep_x.and_not(y.members);
    DynamicBitset dep_y = y.raw_anc;
    dep_y.and_not(x.members);
    dep_y.and_not(y.members);
    DynamicBitset des_x = x.raw_desc;
    des_x.and_not(x.members);
    des_x.and_not(y.members);
    DynamicBitset des_y = y.raw_desc;
    des_y.and_not(x.members);
    des_y.and_not(y.members);
    return gamma_from_counts(DynamicBitset::intersection_count(dep_x, dep_y),
                             dep_x.count(), dep_y.count(),
                             DynamicBitset::intersection_count(des_x, des_y),
                             des_x.count(), des_y.count());
}

// Block-level adjacency (dependee block -> depender block), deduped.
std::vector<std::vector<int>> block_adjacency(const DependencyGraph& d,
                                              const std::vector<int>& owner,
                                              std::size_t block_count) {
    std::vector<std::vector<int>> out(block_count);
    for (int a = 0; a < d.contour_count(); ++a) {
        for (int b : d.direct_dependers(a)) {
            if (owner[a] != owner[b]) out[owner[a]].push_back(owner[b]);
        }
    }
    for (auto& row : out) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return out;
}

// Merging x and y is safe only if every block-level path between them is the
// direct edge; any longer path would fold into a cycle.
bool merge_creates_cycle(const std::vector<std::vector<int>>& adj, int x, int y) {
    auto reaches = [&adj](int from, int to) {
        std::vector<int> stack;
        std::vector<char> seen(adj.size(), 0);
        for (int u : adj[from]) {
            if (u == to) continue;  // skip the direct edge
            if (!seen[u]) {
                seen[u] = 1;
                stack.push_back(u);
            }
        }
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == to) return true;
            for (int u : adj[v]) {
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        return false;
    };
    return reaches(x, y) || reaches(y, x);
}

}  // namespace

ClusteredGraph cluster_dependency_graph(const DependencyGraph& d,
                                        const ConnectednessParams& p) {
    const int n = d.contour_count();
    const TransitiveClosure tc(d);

    std::vector<std::vector<int>> by_depth(d.max_depth() + 1);
    for (int c = 0; c < n; ++c) by_depth[d.depth_of(c)].push_back(c);

    // Phase 1: same-depth components of the thresholded connectedness graph.
    // A pair qualifies only if it shares at least one dependee or depender.
    std::vector<Block> blocks;
    std::vector<int> owner(n, -1);
    for (const std::vector<int>& group : by_depth) {
        UnionFind uf(group.size());
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                const int i = group[a];
                const int j = group[b];
                const std::size_t common_dep = DynamicBitset::intersection_count(
                    tc.ancestors(i), tc.ancestors(j));
                const std::size_t common_des = DynamicBitset::intersection_count(
                    tc.descendants(i), tc.descendants(j));
                if (common_dep == 0 && common_des == 0) continue;
                if (degree_of_connectedness(tc, i, j) >= p.gamma_threshold)
                    uf.unite(static_cast<int>(a), static_cast<int>(b));
            }
        }
        std::vector<int> rep_to_block(group.size(), -1);
        for (std::size_t a = 0; a < group.size(); ++a) {
            const int rep = uf.find(static_cast<int>(a));
            if (rep_to_block[rep] == -1) {
                rep_to_block[rep] = static_cast<int>(blocks.size());
                Block blk;
                blk.alive = true;
                blk.members = DynamicBitset(n);
                blk.raw_anc = DynamicBitset(n);
                blk.raw_desc = DynamicBitset(n);
                blk.min_depth = d.depth_of(group[a]);
                blk.max_depth = blk.min_depth;
                blk.min_member = group[a];
                blocks.push_back(std::move(blk));
            }
            Block& blk = blocks[rep_to_block[rep]];
            const int c = group[a];
            blk.members.set(c);
            blk.raw_anc |= tc.ancestors(c);
            blk.raw_desc |= tc.descendants(c);
            blk.min_member = std::min(blk.min_member, c);
            owner[c] = rep_to_block[rep];
        }
    }

    // Phase 2: merge dependency-adjacent blocks to fixpoint. After a merge the
    // scan restarts so pairs are always examined in ascending
    // (min depth, block id) order against current membership.
    bool changed = true;
    while (changed) {
        changed = false;
        const auto adj = block_adjacency(d, owner, blocks.size());
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t x = 0; x < blocks.size(); ++x)
            for (int y : adj[x])
                pairs.emplace_back(std::min<int>(static_cast<int>(x), y),
                                   std::max<int>(static_cast<int>(x), y));
        std::sort(pairs.begin(), pairs.end(),
                  [&blocks](const std::pair<int, int>& a, const std::pair<int, int>& b) {
                      const int da = std::min(blocks[a.first].min_depth,
                                              blocks[a.second].min_depth);
                      const int db = std::min(blocks[b.first].min_depth,
                                              blocks[b.second].min_depth);
                      return std::tie(da, a.first, a.second) <
                             std::tie(db, b.first, b.second);
                  });
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (const auto& [x, y] : pairs) {
            if (block_gamma(blocks[x], blocks[y]) < p.gamma_threshold) continue;
            if (merge_creates_cycle(adj, x, y)) continue;
            Block& keep = blocks[x];
            Block& drop = blocks[y];
            keep.members |= drop.members;
            keep.raw_anc |= drop.raw_anc;
            keep.raw_desc |= drop.raw_desc;
            keep.min_depth = std::min(keep.min_depth, drop.min_depth);
            keep.max_depth = std::max(keep.max_depth, drop.max_depth);
            keep.min_member = std::min(keep.min_member, drop.min_member);
            drop.alive = false;
            drop.members.for_each([&owner, x = x](std::size_t c) { owner[c] = x; });
            changed = true;
            break;
        }
    }

    // Final ids: ascending (min depth, lowest member id).
    std::vector<int> alive;
    for (std::size_t k = 0; k < blocks.size(); ++k)
        if (blocks[k].alive) alive.push_back(static_cast<int>(k));
    std::sort(alive.begin(), alive.end(), [&blocks](int a, int b) {
        return std::tie(blocks[a].min_depth, blocks[a].min_member) <
               std::tie(blocks[b].min_depth, blocks[b].min_member);
    });

    ClusteredGraph cg;
    cg.contour_to_cluster_.assign(n, -1);
    for (std::size_t k = 0; k < alive.size(); ++k) {
        const Block& blk = blocks[alive[k]];
        Cluster cl;
        cl.id = static_cast<int>(k);
        cl.min_depth = blk.min_depth;
        cl.max_depth = blk.max_depth;
        blk.members.for_each([&cl](std::size_t c) { cl.members.push_back(static_cast<int>(c)); });
        for (int c : cl.members) cg.contour_to_cluster_[c] = cl.id;
        cg.clusters_.push_back(std::move(cl));
    }
    cg.out_.resize(cg.clusters_.size());
    cg.in_.resize(cg.clusters_.size());
    for (int a = 0; a < n; ++a) {
        for (int b : d.direct_dependers(a)) {
            const int ca = cg.contour_to_cluster_[a];
            const int cb = cg.contour_to_cluster_[b];
            if (ca != cb) cg.out_[ca].push_back(cb);
        }
    }
    for (std::size_t k = 0; k < cg.out_.size(); ++k) {
        auto& row = cg.out_[k];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        for (int b : row) cg.in_[b].push_back(static_cast<int>(k));
        cg.edges_ += row.size();
    }
    for (auto& row : cg.in_) std::sort(row.begin(), row.end());
    return cg;
}

std::vector<int> ClusteredGraph::topological_order() const {
    std::vector<int> indeg(clusters_.size());
    for (std::size_t c = 0; c < clusters_.size(); ++c)
        indeg[c] = static_cast<int>(in_[c].size());
    std::vector<int> ready;
    for (std::size_t c = 0; c < clusters_.size(); ++c)
        if (indeg[c] == 0) ready.push_back(static_cast<int>(c));
    std::make_heap(ready.begin(), ready.end(), std::greater<>());
    std::vector<int> order;
    order.reserve(clusters_.size());
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

std::string ClusteredGraph::color_of(int cluster) const {
    // Golden-angle hue walk keeps neighboring ids visually distinct.
    const int hue = (cluster * 137) % 360;
    return "hsl(" + std::to_string(hue) + ",65%,45%)";
}

std::string ClusteredGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph clusters {\n  rankdir=BT;\n";
    for (const Cluster& cl : clusters_) {
        os << "  h" << cl.id << " [label=\"h" << cl.id << " (" << cl.members.size()
           << " contours, d" << cl.min_depth << ".." << cl.max_depth
           << ")\" style=filled fillcolor=\"" << color_of(cl.id) << "\"];\n";
    }
    for (std::size_t a = 0; a < out_.size(); ++a)
        for (int b : out_[a]) os << "  h" << a << " -> h" << b << ";\n";
    os << "}\n";
    return os.str();
}

std::string ClusteredGraph::to_json() const {
    nlohmann::ordered_json doc;
    doc["clusters"] = nlohmann::ordered_json::array();
    for (const Cluster& cl : clusters_) {
        nlohmann::ordered_json entry;
        entry["id"] = cl.id;
        entry["color"] = color_of(cl.id);
        entry["depth_min"] = cl.min_depth;
        entry["depth_max"] = cl.max_depth;
        entry["members"] = cl.members;
        doc["clusters"].push_back(std::move(entry));
    }
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < out_.size(); ++a)
        for (int b : out_[a]) edges.push_back({static_cast<int>(a), b});
    doc["edges"] = std::move(edges);
    return doc.dump(1);
}

std::vector<int> intra_cluster_sequence(const Cluster& h, const Model& m,
                                        const DependencyGraph& d, const Point3& entry) {
    std::vector<int> members = h.members;
    std::sort(members.begin(), members.end(), [&d](int a, int b) {
        return std::make_pair(d.depth_of(a), a) < std::make_pair(d.depth_of(b), b);
    });

    std::vector<int> result;
    result.reserve(members.size());
    Point3 pos = entry;
    std::size_t k = 0;
    while (k < members.size()) {
        std::size_t end = k + 1;
        while (end < members.size() &&
               d.depth_of(members[end]) == d.depth_of(members[k]))
            ++end;
        std::vector<int> remaining(members.begin() + k, members.begin() + end);
        while (!remaining.empty()) {
            std::size_t best = 0;
            double best_dist = distance(pos, m.contours[remaining[0]].start_point());
            for (std::size_t r = 1; r < remaining.size(); ++r) {
                const double dist = distance(pos, m.contours[remaining[r]].start_point());
                if (dist < best_dist) {  // ties keep the lowest id
                    best_dist = dist;
                    best = r;
                }
            }
            const int c = remaining[best];
            result.push_back(c);
            pos = m.contours[c].end_point();
            remaining.erase(remaining.begin() + best);
        }
        k = end;
    }
    return result;
}

}  // namespace waypath
