#ifndef GEOSPAN_ORACLE_HPP
#define GEOSPAN_ORACLE_HPP

#include <limits>
#include <map>
#include <vector>

#include "geospan/geometry.hpp"

namespace geospan::oracle {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Brute-force ground truth: recomputed from scratch on demand, no
// incremental state.
struct WeightedGraph {
    std::vector<ShapeId> vertices;
    std::map<ShapeId, std::vector<std::pair<ShapeId, double>>> adjacency;
};

// All-pairs intersection test over the live shapes, O(n^2).
WeightedGraph full_graph(const std::map<ShapeId, Shape>& shapes);

WeightedGraph graph_from_edges(const std::map<ShapeId, Shape>& shapes,
                               const std::vector<std::tuple<ShapeId, ShapeId, double>>& edges);

std::map<ShapeId, double> dijkstra(const WeightedGraph& g, ShapeId source);

// Union-find connectivity: component label per vertex.
std::map<ShapeId, int> components(const WeightedGraph& g);

bool connected(const WeightedGraph& g, ShapeId a, ShapeId b);

struct StretchReport {
    bool ok = true;
    double max_ratio = 0.0;
    ShapeId worst_a = -1;
    ShapeId worst_b = -1;
    std::size_t pairs_checked = 0;
};

// Max ratio dist_G / dist_D over connected pairs. All pairs when the live
// set has at most `exhaustive_limit` shapes, otherwise `samples` sampled
// pairs (deterministic in `seed`). Fails if a pair connected in D(S) is
// unreachable in the spanner or exceeds (1+eps) + slack.
StretchReport check_stretch(const std::vector<std::tuple<ShapeId, ShapeId, double>>& spanner_edges,
                            const std::map<ShapeId, Shape>& shapes, double eps,
                            double slack = 1e-9, std::size_t exhaustive_limit = 64,
                            std::size_t samples = 200, std::uint64_t seed = 1);

}  // namespace geospan::oracle

#endif
