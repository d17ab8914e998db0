#include "waypath/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "waypath/errors.hpp"
#include "waypath/util.hpp"

namespace waypath {

double travel_upper_bound(const Model& m) {
    const std::size_t n = m.contours.size();
    double max_hop = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                max_hop = std::max(max_hop, travel_distance(m.contours[i], m.contours[j]));
    const double bound = max_hop * static_cast<double>(n);
    return bound > 0.0 ? bound : 1.0;
}

double evaluate_toolpath(const Model& m, const DependencyGraph& d,
                         std::span<const int> order) {
    if (!d.is_feasible_order(order))
        throw InfeasibleToolpathError("order violates the dependency graph");
    double total = 0.0;
    for (std::size_t k = 1; k < order.size(); ++k)
        total += travel_distance(m.contours[order[k - 1]], m.contours[order[k]]);
    return total;
}

namespace {

Point3 cluster_anchor(const ClusteredGraph& cg, int cluster, const Model& m,
                      const DependencyGraph& d) {
    // Lowest-id member at the cluster's minimum depth.
    const Cluster& cl = cg.cluster(cluster);
    for (int c : cl.members)
        if (d.depth_of(c) == cl.min_depth) return m.contours[c].start_point();
    return m.contours[cl.members.front()].start_point();
}

// Cheapest hop from `pos` into the cluster: nearest start among the members
// that the intra-cluster sequencer could print first.
double entry_distance(const ClusteredGraph& cg, int cluster, const Model& m,
                      const DependencyGraph& d, const Point3& pos) {
    const Cluster& cl = cg.cluster(cluster);
    double best = std::numeric_limits<double>::infinity();
    for (int c : cl.members)
        if (d.depth_of(c) == cl.min_depth)
            best = std::min(best, distance(pos, m.contours[c].start_point()));
    return best;
}

}  // namespace

std::vector<int> flatten(const ClusteredGraph& cg, std::span<const int> cluster_order,
                         const Model& m, const DependencyGraph& d) {
    std::vector<int> flattened;
    flattened.reserve(m.contours.size());
    if (cluster_order.empty()) return flattened;
    Point3 pos = cluster_anchor(cg, cluster_order.front(), m, d);
    for (int cluster : cluster_order) {
        const std::vector<int> seq =
            intra_cluster_sequence(cg.cluster(cluster), m, d, pos);
        flattened.insert(flattened.end(), seq.begin(), seq.end());
        pos = m.contours[seq.back()].end_point();
    }
    return flattened;
}

namespace {

struct Node {
    int action = -1;  // cluster printed on the edge into this node; -1 at root
    int parent = -1;
    std::int64_t visits = 0;
    double total_reward = 0.0;
    std::vector<int> children;    // node indices, in expansion order
    std::vector<int> unexpanded;  // feasible next clusters, ascending
    DynamicBitset printed;
    int printed_count = 0;
};

// Clusters whose direct dependee clusters are all inside `printed`.
std::vector<int> feasible_actions(const ClusteredGraph& cg, const DynamicBitset& printed) {
    std::vector<int> out;
    for (int c = 0; c < cg.cluster_count(); ++c) {
        if (printed.test(c)) continue;
        bool ready = true;
        for (int u : cg.direct_dependees(c)) {
            if (!printed.test(u)) {
                ready = false;
                break;
            }
        }
        if (ready) out.push_back(c);
    }
    return out;
}

}  // namespace

SearchResult search(const Model& m, const DependencyGraph& d, const ClusteredGraph& cg,
                    const SearchConfig& cfg) {
    SearchResult result;
    const int cluster_total = cg.cluster_count();
    if (cluster_total == 0) return result;

    const auto start_time = std::chrono::steady_clock::now();
    auto elapsed_ms = [&start_time] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_time)
            .count();
    };

    const double bound = travel_upper_bound(m);
    Rng rng(cfg.seed);

    std::vector<Node> nodes;
    {
        Node root;
        root.printed = DynamicBitset(cluster_total);
        root.unexpanded = feasible_actions(cg, root.printed);
        nodes.push_back(std::move(root));
    }

    double best_travel = std::numeric_limits<double>::infinity();
    auto last_improvement = start_time;

    std::vector<int> cluster_order;
    cluster_order.reserve(cluster_total);

    while (true) {
        // Selection: descend through fully expanded nodes by UCB1; unvisited
        // children (if any) take priority, lowest cluster id first.
        int node = 0;
        while (nodes[node].unexpanded.empty() && !nodes[node].children.empty()) {
            const Node& nd = nodes[node];
            int chosen = -1;
            int chosen_action = std::numeric_limits<int>::max();
            for (int child : nd.children) {
                if (nodes[child].visits == 0 && nodes[child].action < chosen_action) {
                    chosen = child;
                    chosen_action = nodes[child].action;
                }
            }
            if (chosen == -1) {
                double best_ucb = -std::numeric_limits<double>::infinity();
                for (int child : nd.children) {
                    const Node& ch = nodes[child];
                    const double mean = ch.total_reward / static_cast<double>(ch.visits);
                    const double ucb =
                        mean + cfg.ucb_constant *
                                   std::sqrt(std::log(static_cast<double>(nd.visits)) /
                                             static_cast<double>(ch.visits));
                    if (ucb > best_ucb ||
                        (ucb == best_ucb && ch.action < nodes[chosen].action)) {
                        best_ucb = ucb;
                        chosen = child;
                    }
                }
            }
            node = chosen;
        }

        // Expansion: realize one unexpanded action, chosen uniformly at random.
        if (!nodes[node].unexpanded.empty()) {
            std::vector<int>& open = nodes[node].unexpanded;
            const std::size_t pick = rng.bounded(open.size());
            const int action = open[pick];
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

            Node child;
            child.action = action;
            child.parent = node;
            child.printed = nodes[node].printed;
            child.printed.set(action);
            child.printed_count = nodes[node].printed_count + 1;
            child.unexpanded = feasible_actions(cg, child.printed);
            const int child_index = static_cast<int>(nodes.size());
            nodes.push_back(std::move(child));
            nodes[node].children.push_back(child_index);
            node = child_index;
        }

        // Simulation: complete the order from the tree path, flattening
        // incrementally so the greedy-biased policy can see the tool position.
        cluster_order.clear();
        for (int walk = node; walk != 0; walk = nodes[walk].parent)
            cluster_order.push_back(nodes[walk].action);
        std::reverse(cluster_order.begin(), cluster_order.end());

        std::vector<int> flattened;
        flattened.reserve(m.contours.size());
        Point3 pos{};
        bool have_pos = false;
        auto append_cluster = [&](int cluster) {
            if (!have_pos) {
                pos = cluster_anchor(cg, cluster, m, d);
                have_pos = true;
            }
            const std::vector<int> seq =
                intra_cluster_sequence(cg.cluster(cluster), m, d, pos);
            flattened.insert(flattened.end(), seq.begin(), seq.end());
            pos = m.contours[seq.back()].end_point();
        };
        for (int cluster : cluster_order) append_cluster(cluster);

        DynamicBitset printed = nodes[node].printed;
        std::vector<int> ready = feasible_actions(cg, printed);
        std::vector<int> indeg(cluster_total, 0);
        for (int c = 0; c < cluster_total; ++c)
            for (int u : cg.direct_dependees(c))
                if (!printed.test(u)) ++indeg[c];
        while (!ready.empty()) {
            std::size_t pick;
            if (cfg.rollout_policy == RolloutPolicy::greedy_biased && have_pos &&
                rng.unit() < cfg.greedy_bias) {
                pick = 0;
                double best = entry_distance(cg, ready[0], m, d, pos);
                for (std::size_t r = 1; r < ready.size(); ++r) {
                    const double dist = entry_distance(cg, ready[r], m, d, pos);
                    if (dist < best) {  // ties keep the lowest cluster id
                        best = dist;
                        pick = r;
                    }
                }
            } else {
                pick = rng.bounded(ready.size());
            }
            const int cluster = ready[pick];
            ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
            cluster_order.push_back(cluster);
            append_cluster(cluster);
            printed.set(cluster);
            for (int u : cg.direct_dependers(cluster)) {
                if (--indeg[u] == 0) {
                    ready.insert(std::lower_bound(ready.begin(), ready.end(), u), u);
                }
            }
        }

        const double travel = evaluate_toolpath(m, d, flattened);
        const double reward = (bound - travel) / bound;
        ++result.iterations;

        if (cfg.on_rollout) {
            Rollout sample;
            sample.order = cluster_order;
            sample.flattened = flattened;
            sample.travel = travel;
            sample.reward = reward;
            cfg.on_rollout(sample);
        }

        // Backpropagation of the mean-reward statistics.
        for (int walk = node; walk != -1; walk = nodes[walk].parent) {
            nodes[walk].visits += 1;
            nodes[walk].total_reward += reward;
        }

        if (travel < best_travel) {
            best_travel = travel;
            result.best.order = cluster_order;
            result.best.flattened = std::move(flattened);
            result.best.travel = travel;
            result.best.reward = reward;
            result.trace.push_back({result.iterations, elapsed_ms(), travel});
            last_improvement = std::chrono::steady_clock::now();
        }

        if (cfg.max_iterations >= 0 && result.iterations >= cfg.max_iterations) break;
        const auto now = std::chrono::steady_clock::now();
        if (cfg.wall_budget.count() > 0 && now - start_time >= cfg.wall_budget) break;
        if (cfg.stagnation_budget.count() > 0 &&
            now - last_improvement >= cfg.stagnation_budget)
            break;
    }

    result.elapsed_ms = elapsed_ms();
    return result;
}

std::string trace_csv(const SearchResult& r, bool include_wallclock) {
    std::ostringstream os;
    os << "iteration,elapsed_ms,best_travel_mm\n";
    for (const TraceEntry& e : r.trace) {
        os << e.iteration << ',' << (include_wallclock ? e.elapsed_ms : 0) << ','
           << format_double(e.best_travel) << '\n';
    }
    return os.str();
}

}  // namespace waypath
