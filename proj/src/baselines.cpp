#include "waypath/baselines.hpp"

#include <algorithm>
#include <limits>

#include "waypath/bitset.hpp"
#include "waypath/errors.hpp"
#include "waypath/mcts.hpp"
#include "waypath/util.hpp"

namespace waypath {

namespace {

// Nearest candidate start to `pos`; ties keep the lowest id because
// candidates arrive in ascending order and the comparison is strict.
int nearest_start(const Model& m, const std::vector<int>& candidates, const Point3& pos) {
    int best = candidates.front();
    double best_dist = distance(pos, m.contours[best].start_point());
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        const double dist = distance(pos, m.contours[candidates[k]].start_point());
        if (dist < best_dist) {
            best_dist = dist;
            best = candidates[k];
        }
    }
    return best;
}

Toolpath finish(const Model& m, const DependencyGraph& d, std::vector<int> order,
                std::string planner) {
    Toolpath t;
    t.travel = evaluate_toolpath(m, d, order);
    t.order = std::move(order);
    t.planner = std::move(planner);
    return t;
}

}  // namespace

Toolpath plan_layerwise(const Model& m, const DependencyGraph& d) {
    const int n = static_cast<int>(m.contours.size());
    std::vector<std::vector<int>> by_layer(m.layer_heights.size());
    for (int c = 0; c < n; ++c) by_layer[m.contours[c].layer].push_back(c);

    std::vector<int> order;
    order.reserve(n);
    Point3 pos{};
    bool have_pos = false;
    for (std::vector<int>& layer : by_layer) {
        while (!layer.empty()) {
            if (!have_pos) {
                pos = m.contours[layer.front()].start_point();
                have_pos = true;
            }
            const int c = nearest_start(m, layer, pos);
            layer.erase(std::find(layer.begin(), layer.end(), c));
            order.push_back(c);
            pos = m.contours[c].end_point();
        }
    }
    return finish(m, d, std::move(order), "layerwise");
}

Toolpath plan_greedy(const Model& m, const DependencyGraph& d) {
    const int n = static_cast<int>(m.contours.size());
    if (n == 0) return finish(m, d, {}, "greedy");
    std::vector<int> remaining_deps(n);
    for (int c = 0; c < n; ++c)
        remaining_deps[c] = static_cast<int>(d.direct_dependees(c).size());
    std::vector<int> ready;
    for (int c = 0; c < n; ++c)
        if (remaining_deps[c] == 0) ready.push_back(c);

    Point3 pos = m.contours.front().start_point();
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int c = nearest_start(m, ready, pos);
        ready.erase(std::find(ready.begin(), ready.end(), c));
        order.push_back(c);
        pos = m.contours[c].end_point();
        for (int u : d.direct_dependers(c)) {
            if (--remaining_deps[u] == 0)
                ready.insert(std::lower_bound(ready.begin(), ready.end(), u), u);
        }
    }
    return finish(m, d, std::move(order), "greedy");
}

namespace {

struct Move {
    enum class Kind { relocate, reverse };
    Kind kind;
    int a;  // relocate: source position; reverse: window start
    int b;  // relocate: insertion slot after removal; reverse: window end
};

double hop(const Model& m, const std::vector<int>& order, int from, int to) {
    return travel_distance(m.contours[order[from]], m.contours[order[to]]);
}

// Travel delta of moving order[p] out and reinserting it at slot q of the
// remaining sequence. Negative means improvement.
double relocate_delta(const Model& m, const std::vector<int>& order, int p, int q) {
    const int n = static_cast<int>(order.size());
    const int c = order[p];
    double delta = 0.0;
    if (p > 0) delta -= hop(m, order, p - 1, p);
    if (p + 1 < n) delta -= hop(m, order, p, p + 1);
    if (p > 0 && p + 1 < n) delta += hop(m, order, p - 1, p + 1);

    // Neighbors of slot q in the order with c removed.
    auto at = [&order, p](int idx) { return idx >= p ? order[idx + 1] : order[idx]; };
    const int rem = n - 1;
    if (q > 0)
        delta += travel_distance(m.contours[at(q - 1)], m.contours[c]);
    if (q < rem)
        delta += travel_distance(m.contours[c], m.contours[at(q)]);
    if (q > 0 && q < rem)
        delta -= travel_distance(m.contours[at(q - 1)], m.contours[at(q)]);
    return delta;
}

// Travel delta of reversing order[i..j]. Interior hops flip direction, which
// matters because travel is end-to-start and not symmetric.
double reverse_delta(const Model& m, const std::vector<int>& order, int i, int j) {
    const int n = static_cast<int>(order.size());
    double delta = 0.0;
    if (i > 0) delta += hop(m, order, i - 1, j) - hop(m, order, i - 1, i);
    if (j + 1 < n) delta += hop(m, order, i, j + 1) - hop(m, order, j, j + 1);
    for (int k = i; k < j; ++k)
        delta += travel_distance(m.contours[order[k + 1]], m.contours[order[k]]) -
                 hop(m, order, k, k + 1);
    return delta;
}

}  // namespace

Toolpath plan_local_search(const Model& m, const DependencyGraph& d,
                           std::uint64_t seed, int max_passes) {
    const int n = static_cast<int>(m.contours.size());
    Toolpath current = plan_layerwise(m, d);
    std::vector<int>& order = current.order;
    std::vector<int> pos_of(n);
    auto reindex = [&] {
        for (int k = 0; k < n; ++k) pos_of[order[k]] = k;
    };
    reindex();

    // Direct-neighbor bitsets for O(n/64) window legality checks.
    std::vector<DynamicBitset> adjacent(n, DynamicBitset(n));
    for (int c = 0; c < n; ++c) {
        for (int u : d.direct_dependees(c)) adjacent[c].set(u);
        for (int u : d.direct_dependers(c)) adjacent[c].set(u);
    }

    Rng rng(seed);
    std::vector<Move> moves;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b) moves.push_back({Move::Kind::relocate, a, b});
            if (a < b) moves.push_back({Move::Kind::reverse, a, b});
        }
    }

    for (int pass = 0; pass < max_passes; ++pass) {
        rng.shuffle(moves);
        bool improved = false;
        for (const Move& mv : moves) {
            if (mv.kind == Move::Kind::relocate) {
                const int p = mv.a;
                const int c = order[p];
                // Legal slots keep all dependees before and dependers after.
                int lo = 0;
                int hi = n - 1;  // slots in the sequence with c removed
                for (int u : d.direct_dependees(c)) {
                    const int up = pos_of[u] > p ? pos_of[u] - 1 : pos_of[u];
                    lo = std::max(lo, up + 1);
                }
                for (int u : d.direct_dependers(c)) {
                    const int up = pos_of[u] > p ? pos_of[u] - 1 : pos_of[u];
                    hi = std::min(hi, up);
                }
                const int q = mv.b;
                if (q < lo || q > hi || q == p) continue;
                const double delta = relocate_delta(m, order, p, q);
                if (delta < -1e-12) {
                    order.erase(order.begin() + p);
                    order.insert(order.begin() + q, c);
                    current.travel += delta;
                    reindex();
                    improved = true;
                }
            } else {
                const int i = mv.a;
                const int j = mv.b;
                // Reversal is legal iff no dependency edge joins two members.
                bool legal = true;
                DynamicBitset inside(n);
                for (int k = i; k <= j && legal; ++k) {
                    if (DynamicBitset::intersection_count(adjacent[order[k]], inside) > 0)
                        legal = false;
                    inside.set(order[k]);
                }
                if (!legal) continue;
                const double delta = reverse_delta(m, order, i, j);
                if (delta < -1e-12) {
                    std::reverse(order.begin() + i, order.begin() + j + 1);
                    current.travel += delta;
                    reindex();
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }

    // Recompute travel from scratch; the incremental deltas carry float dust.
    return finish(m, d, std::move(order), "local");
}

namespace {

struct ExactState {
    const Model* m;
    const DependencyGraph* d;
    std::vector<int> chosen;
    std::vector<int> remaining_deps;
    std::vector<char> printed;
    double partial = 0.0;
    double best_travel = std::numeric_limits<double>::infinity();
    std::vector<int> best_order;

    void dfs() {
        const int n = static_cast<int>(m->contours.size());
        if (static_cast<int>(chosen.size()) == n) {
            if (partial < best_travel) {
                best_travel = partial;
                best_order = chosen;
            }
            return;
        }
        for (int c = 0; c < n; ++c) {
            if (printed[c] || remaining_deps[c] != 0) continue;
            const double hop =
                chosen.empty()
                    ? 0.0
                    : travel_distance(m->contours[chosen.back()], m->contours[c]);
            if (partial + hop >= best_travel) continue;  // admissible: travel >= 0
            chosen.push_back(c);
            printed[c] = 1;
            partial += hop;
            for (int u : d->direct_dependers(c)) --remaining_deps[u];
            dfs();
            for (int u : d->direct_dependers(c)) ++remaining_deps[u];
            partial -= hop;
            printed[c] = 0;
            chosen.pop_back();
        }
    }
};

}  // namespace

Toolpath plan_exact(const Model& m, const DependencyGraph& d, int limit) {
    const int n = static_cast<int>(m.contours.size());
    if (n > limit) throw TooLargeError(m.contours.size(), limit);

    ExactState st;
    st.m = &m;
    st.d = &d;
    st.remaining_deps.resize(n);
    for (int c = 0; c < n; ++c)
        st.remaining_deps[c] = static_cast<int>(d.direct_dependees(c).size());
    st.printed.assign(n, 0);

    // Seed the bound with the layerwise plan so pruning bites immediately;
    // a strictly better order replaces it, an equal one keeps it.
    Toolpath seed = plan_layerwise(m, d);
    st.best_travel = seed.travel;
    st.best_order = seed.order;
    st.dfs();

    return finish(m, d, std::move(st.best_order), "exact");
}

}  // namespace waypath
