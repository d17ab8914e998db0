#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "waypath/depgraph.hpp"
#include "waypath/errors.hpp"
#include "waypath/util.hpp"
#include "testutil.hpp"

using namespace waypath;
using namespace waypath::test;

TEST_CASE("stacked squares depend bottom-up") {
    const Model m = make_model({square(0, 0, 0, 1, 0.3), square(1, 0, 0, 1, 0.6)});
    const DependencyGraph d = build_dependency_graph(m, {1.0, 0.0});
    CHECK(d.edge_count() == 1);
    CHECK(d.has_edge(0, 1));
    CHECK_FALSE(d.has_edge(1, 0));
    CHECK(d.depth_of(0) == 0);
    CHECK(d.depth_of(1) == 1);
}

TEST_CASE("distant towers are independent") {
    const Model m = make_model({square(0, 0, 0, 1, 0.3), square(1, 100, 0, 1, 0.3),
                                square(2, 0, 0, 1, 0.6), square(3, 100, 0, 1, 0.6)});
    const DependencyGraph d = build_dependency_graph(m, {1.0, 0.0});
    CHECK(d.has_edge(0, 2));
    CHECK(d.has_edge(1, 3));
    CHECK_FALSE(d.has_edge(0, 3));
    CHECK_FALSE(d.has_edge(1, 2));
    CHECK(d.edge_count() == 2);
}

TEST_CASE("three stacked contours keep transitive edges") {
    const Model m = make_model({square(0, 0, 0, 1, 0.3), square(1, 0, 0, 1, 0.6),
                                square(2, 0, 0, 1, 0.9)});
    const DependencyGraph d = build_dependency_graph(m, {1.0, 0.0});
    CHECK(d.has_edge(0, 1));
    CHECK(d.has_edge(1, 2));
    CHECK(d.has_edge(0, 2));  // not reduced
    CHECK(d.edge_count() == 3);
    CHECK(d.depth_of(2) == 2);
}

TEST_CASE("cone slope widens the blocking radius with height") {
    // Gap 3 between footprints; base radius 1 blocks only when the slope
    // contributes at least 2 over dz = 2.
    const Model m = make_model({square(0, 0, 0, 1, 0.5), square(1, 4, 0, 1, 2.5)});
    CHECK(build_dependency_graph(m, {1.0, 0.0}).edge_count() == 0);
    CHECK(build_dependency_graph(m, {1.0, 1.0}).edge_count() == 1);
}

TEST_CASE("depth is the longest path from roots") {
    SUBCASE("chain") {
        const auto d = DependencyGraph::from_edges(3, {{0, 1}, {1, 2}});
        CHECK(d.depth_of(0) == 0);
        CHECK(d.depth_of(1) == 1);
        CHECK(d.depth_of(2) == 2);
    }
    SUBCASE("diamond") {
        const auto d = DependencyGraph::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
        CHECK(d.depth_of(3) == 2);
    }
    SUBCASE("longest, not shortest") {
        // 0 -> 3 directly and through 1 -> 2.
        const auto d =
            DependencyGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
        CHECK(d.depth_of(3) == 3);
    }
}

TEST_CASE("dependees and dependers are transitive sets") {
    const auto chain = DependencyGraph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(chain.dependees(0).empty());
    CHECK(chain.dependees(2) == std::vector<int>{0, 1});

    const auto diamond = DependencyGraph::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    CHECK(diamond.dependers(0) == std::vector<int>{1, 2, 3});
    CHECK(diamond.dependees(3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("is_feasible_order") {
    const auto d = DependencyGraph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(d.is_feasible_order(std::vector<int>{0, 1, 2}));
    CHECK_FALSE(d.is_feasible_order(std::vector<int>{1, 0, 2}));
    CHECK_THROWS_AS((void)d.is_feasible_order(std::vector<int>{0, 1}),
                    NotAPermutationError);
    CHECK_THROWS_AS((void)d.is_feasible_order(std::vector<int>{0, 0, 2}),
                    NotAPermutationError);
    CHECK_THROWS_AS((void)d.is_feasible_order(std::vector<int>{0, 1, 3}),
                    NotAPermutationError);
}

namespace {

// Independent oracle: walk the order, requiring every direct dependee printed
// before its depender.
bool prefix_simulation(const DependencyGraph& d, const std::vector<int>& order) {
    std::vector<char> printed(d.contour_count(), 0);
    for (int c : order) {
        for (int u : d.direct_dependees(c))
            if (!printed[u]) return false;
        printed[c] = 1;
    }
    return true;
}

DependencyGraph random_dag(Rng& rng, int n, double edge_prob) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.unit() < edge_prob) edges.emplace_back(i, j);
    return DependencyGraph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("property: feasibility agrees with the prefix simulation oracle") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.bounded(8));
        const DependencyGraph d = random_dag(rng, n, 0.35);
        std::vector<int> order(n);
        for (int k = 0; k < n; ++k) order[k] = k;
        rng.shuffle(order);
        CHECK(d.is_feasible_order(order) == prefix_simulation(d, order));
    }
}

TEST_CASE("property: built graphs are acyclic with monotone depth") {
    Rng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Contour> contours;
        const int n = 3 + static_cast<int>(rng.bounded(10));
        for (int i = 0; i < n; ++i) {
            const int layer = static_cast<int>(rng.bounded(4));
            contours.push_back(square(i, rng.range(0, 30), rng.range(0, 30), 2.0,
                                      0.3 * (layer + 1)));
        }
        const Model m = make_model(std::move(contours));
        const DependencyGraph d = build_dependency_graph(m, {2.0, 0.5});

        const std::vector<int> topo = d.topological_order();
        CHECK(topo.size() == static_cast<std::size_t>(d.contour_count()));
        CHECK(d.is_feasible_order(topo));

        for (int a = 0; a < d.contour_count(); ++a) {
            for (int b : d.direct_dependers(a)) {
                CHECK(d.depth_of(a) < d.depth_of(b));
                CHECK(m.contours[a].layer < m.contours[b].layer);
            }
        }
    }
}

TEST_CASE("property: dependees and dependers are mutually consistent") {
    Rng rng(31);
    const DependencyGraph d = random_dag(rng, 10, 0.3);
    for (int a = 0; a < d.contour_count(); ++a) {
        for (int b : d.dependers(a)) {
            const std::vector<int> back = d.dependees(b);
            CHECK(std::binary_search(back.begin(), back.end(), a));
        }
    }
}

TEST_CASE("roots have empty dependees and depth zero") {
    const auto d = DependencyGraph::from_edges(4, {{0, 2}, {1, 2}, {2, 3}});
    for (int c = 0; c < 4; ++c)
        CHECK((d.depth_of(c) == 0) == d.dependees(c).empty());
}

TEST_CASE("from_edges rejects cycles") {
    CHECK_THROWS_AS(DependencyGraph::from_edges(2, {{0, 1}, {1, 0}}), Error);
}

TEST_CASE("dot export names every contour") {
    const auto d = DependencyGraph::from_edges(3, {{0, 1}, {1, 2}});
    const std::string dot = d.to_dot();
    CHECK(dot.find("c0 -> c1") != std::string::npos);
    CHECK(dot.find("c1 -> c2") != std::string::npos);
    CHECK(dot.find("rank=same") != std::string::npos);
}
