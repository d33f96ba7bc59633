#ifndef GEOSPAN_POINT_SPANNER_HPP
#define GEOSPAN_POINT_SPANNER_HPP

#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "geospan/geometry.hpp"

namespace geospan {

struct EdgeDelta {
    std::vector<std::pair<ShapeId, ShapeId>> added;
    std::vector<std::pair<ShapeId, ShapeId>> removed;

    bool empty() const { return added.empty() && removed.empty(); }
};

// Dynamic (1+eps)-spanner over a point set: a Yao graph with cone angle
// theta chosen so cos(theta) - sin(theta) >= 1/(1+eps). Each point keeps,
// per nonempty cone, an edge to its closest point in that cone (ties by
// id); coincident points are chained with zero-weight edges and skip each
// other in cone scans. Deterministic given the update sequence.
class PointSpanner {
public:
    PointSpanner(double eps, int dim);

    EdgeDelta insert_point(ShapeId id, const Vec& p);
    EdgeDelta delete_point(ShapeId id);

    std::size_t size() const { return points_.size(); }
    bool contains(ShapeId id) const { return points_.count(id) != 0; }
    const std::map<ShapeId, Vec>& points() const { return points_; }

    // Current undirected edges, sorted by (u, v), with Euclidean weights.
    std::vector<std::tuple<ShapeId, ShapeId, double>> edges() const;
    std::size_t edge_count() const { return edge_refs_.size(); }
    std::size_t max_degree() const;

    // Test oracle: Dijkstra over emitted edges vs straight-line distance.
    bool verify_stretch(double slack = 1e-9) const;

    double theta() const { return theta_; }

private:
    using Pair = std::pair<ShapeId, ShapeId>;

    std::int64_t cone_index(const Vec& from, const Vec& to) const;
    void add_ref(ShapeId a, ShapeId b);
    void del_ref(ShapeId a, ShapeId b);
    bool better(const Vec& from, ShapeId cand, ShapeId incumbent) const;
    void rescan_cone(ShapeId q, std::int64_t cone);
    void refresh_chain(const std::vector<ShapeId>& before, const std::vector<ShapeId>& after);
    EdgeDelta drain_delta();

    double eps_;
    int dim_;
    double theta_;
    int sectors_2d_ = 0;
    double face_cell_ = 0;
    std::int64_t face_grid_ = 0;

    std::map<ShapeId, Vec> points_;
    std::map<ShapeId, std::map<std::int64_t, ShapeId>> winners_;
    std::map<Pair, int> edge_refs_;
    std::map<std::array<double, kMaxDim>, std::set<ShapeId>> buckets_;

    std::set<Pair> touched_;
    std::map<Pair, bool> before_;
};

}  // namespace geospan

#endif
