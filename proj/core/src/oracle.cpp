#include "geospan/oracle.hpp"

#include <algorithm>
#include <queue>

namespace geospan::oracle {

WeightedGraph full_graph(const std::map<ShapeId, Shape>& shapes) {
    WeightedGraph g;
    for (const auto& [id, s] : shapes) {
        g.vertices.push_back(id);
        g.adjacency[id];
    }
    for (auto it = shapes.begin(); it != shapes.end(); ++it) {
        auto jt = it;
        for (++jt; jt != shapes.end(); ++jt) {
            if (intersects(it->second, jt->second)) {
                const double w = edge_weight(it->second, jt->second);
                g.adjacency[it->first].emplace_back(jt->first, w);
                g.adjacency[jt->first].emplace_back(it->first, w);
            }
        }
    }
    return g;
}

WeightedGraph graph_from_edges(const std::map<ShapeId, Shape>& shapes,
                               const std::vector<std::tuple<ShapeId, ShapeId, double>>& edges) {
    WeightedGraph g;
    for (const auto& [id, s] : shapes) {
        g.vertices.push_back(id);
        g.adjacency[id];
    }
    for (const auto& [u, v, w] : edges) {
        g.adjacency[u].emplace_back(v, w);
        g.adjacency[v].emplace_back(u, w);
    }
    return g;
}

std::map<ShapeId, double> dijkstra(const WeightedGraph& g, ShapeId source) {
    std::map<ShapeId, double> dist;
    using Item = std::pair<double, ShapeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0;
    heap.push({0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist.at(u)) continue;
        auto it = g.adjacency.find(u);
        if (it == g.adjacency.end()) continue;
        for (const auto& [v, w] : it->second) {
            const double nd = d + w;
            auto dit = dist.find(v);
            if (dit == dist.end() || nd < dit->second) {
                dist[v] = nd;
                heap.push({nd, v});
            }
        }
    }
    return dist;
}

namespace {

struct UnionFind {
    std::map<ShapeId, ShapeId> parent;

    ShapeId find(ShapeId x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return x;
        }
        if (it->second == x) return x;
        const ShapeId root = find(it->second);
        parent[x] = root;
        return root;
    }

    void unite(ShapeId a, ShapeId b) { parent[find(a)] = find(b); }
};

}  // namespace

std::map<ShapeId, int> components(const WeightedGraph& g) {
    UnionFind uf;
    for (ShapeId v : g.vertices) uf.find(v);
    for (const auto& [u, nbrs] : g.adjacency) {
        for (const auto& [v, w] : nbrs) uf.unite(u, v);
    }
    std::map<ShapeId, int> label;
    std::map<ShapeId, int> roots;
    for (ShapeId v : g.vertices) {
        const ShapeId r = uf.find(v);
        auto [it, fresh] = roots.emplace(r, int(roots.size()));
        label[v] = it->second;
    }
    return label;
}

bool connected(const WeightedGraph& g, ShapeId a, ShapeId b) {
    if (a == b) return true;
    const auto labels = components(g);
    return labels.at(a) == labels.at(b);
}

StretchReport check_stretch(const std::vector<std::tuple<ShapeId, ShapeId, double>>& spanner_edges,
                            const std::map<ShapeId, Shape>& shapes, double eps, double slack,
                            std::size_t exhaustive_limit, std::size_t samples,
                            std::uint64_t seed) {
    StretchReport report;
    if (shapes.size() < 2) return report;

    const WeightedGraph base = full_graph(shapes);
    const WeightedGraph spanner = graph_from_edges(shapes, spanner_edges);

    std::vector<ShapeId> ids;
    ids.reserve(shapes.size());
    for (const auto& [id, s] : shapes) ids.push_back(id);

    auto check_source = [&](ShapeId src) {
        const auto dbase = dijkstra(base, src);
        const auto dspan = dijkstra(spanner, src);
        for (const auto& [dst, d] : dbase) {
            if (dst == src) continue;
            ++report.pairs_checked;
            auto it = dspan.find(dst);
            const double got = it == dspan.end() ? kUnreachable : it->second;
            const double ratio = d == 0 ? (got > slack ? kUnreachable : 1.0) : got / d;
            if (ratio > report.max_ratio) {
                report.max_ratio = ratio;
                report.worst_a = src;
                report.worst_b = dst;
            }
            if (got > (1.0 + eps) * d + slack) report.ok = false;
        }
    };

    if (shapes.size() <= exhaustive_limit) {
        for (ShapeId src : ids) check_source(src);
    } else {
        std::uint64_t state = seed;
        auto next = [&state]() {
            state += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = state;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            return z ^ (z >> 31);
        };
        std::vector<ShapeId> sources;
        for (std::size_t i = 0; i < samples; ++i) sources.push_back(ids[next() % ids.size()]);
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
        for (ShapeId src : sources) check_source(src);
    }
    return report;
}

}  // namespace geospan::oracle
