#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "geospan/dyn_connectivity.hpp"
#include "test_util.hpp"

using namespace geospan;
using test::Rng;

namespace {

// Recompute-from-scratch oracle.
struct GraphOracle {
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> edges;

    bool connected(std::int64_t u, std::int64_t v) const {
        if (u == v) return true;
        std::map<std::int64_t, std::int64_t> parent;
        std::function<std::int64_t(std::int64_t)> find = [&](std::int64_t x) {
            auto it = parent.find(x);
            if (it == parent.end() || it->second == x) {
                parent[x] = x;
                return x;
            }
            return parent[x] = find(it->second);
        };
        for (const auto& [h, e] : edges) parent[find(e.first)] = find(e.second);
        return find(u) == find(v);
    }
};

}  // namespace

TEST_CASE("triangle minus one edge stays connected; bridge removal disconnects") {
    DynGraph g;
    const auto e1 = g.add_edge(1, 2);
    const auto e2 = g.add_edge(2, 3);
    const auto e3 = g.add_edge(1, 3);
    CHECK(g.connected(1, 3));
    g.remove_edge(e3);
    CHECK(g.connected(1, 3));
    g.remove_edge(e1);
    CHECK_FALSE(g.connected(1, 3));
    CHECK(g.connected(2, 3));
    g.remove_edge(e2);
    CHECK_FALSE(g.connected(2, 3));
}

TEST_CASE("parallel edges and self loops are tolerated") {
    DynGraph g;
    const auto a = g.add_edge(1, 2);
    const auto b = g.add_edge(1, 2);
    const auto loop = g.add_edge(3, 3);
    CHECK(g.connected(1, 2));
    g.remove_edge(a);
    CHECK(g.connected(1, 2));
    g.remove_edge(b);
    CHECK_FALSE(g.connected(1, 2));
    g.remove_edge(loop);
    CHECK(g.connected(3, 3));
}

TEST_CASE("randomized ops match the union-find oracle") {
    DynGraph g;
    GraphOracle oracle;
    Rng rng(64);
    std::int64_t next = 1;
    const std::int64_t vertices = 40;
    for (int step = 0; step < 1200; ++step) {
        const double roll = rng.uniform();
        if (oracle.edges.empty() || roll < 0.55) {
            const std::int64_t u = std::int64_t(rng.below(vertices));
            const std::int64_t v = std::int64_t(rng.below(vertices));
            const auto h = g.add_edge(u, v);
            oracle.edges[h] = {u, v};
            (void)next;
        } else {
            auto it = oracle.edges.begin();
            std::advance(it, std::ptrdiff_t(rng.below(oracle.edges.size())));
            g.remove_edge(it->first);
            oracle.edges.erase(it);
        }
        const std::int64_t u = std::int64_t(rng.below(vertices));
        const std::int64_t v = std::int64_t(rng.below(vertices));
        REQUIRE(g.connected(u, v) == oracle.connected(u, v));
    }
}

TEST_CASE("deletion-heavy chains keep the oracle equivalence") {
    DynGraph g;
    GraphOracle oracle;
    // Path 0-1-2-...-30 plus chords; delete the path edges one by one.
    std::vector<DynGraph::EdgeHandle> path;
    for (int i = 0; i < 30; ++i) {
        const auto h = g.add_edge(i, i + 1);
        oracle.edges[h] = {i, i + 1};
        path.push_back(h);
    }
    std::vector<DynGraph::EdgeHandle> chords;
    for (int i = 0; i + 4 < 30; i += 3) {
        const auto h = g.add_edge(i, i + 4);
        oracle.edges[h] = {i, i + 4};
        chords.push_back(h);
    }
    for (const auto h : path) {
        g.remove_edge(h);
        oracle.edges.erase(h);
        for (int a = 0; a <= 30; a += 5) {
            for (int b = a; b <= 30; b += 7) {
                REQUIRE(g.connected(a, b) == oracle.connected(a, b));
            }
        }
    }
    CHECK(g.max_edge_level() <= 5);  // floor(log2(31))
}
