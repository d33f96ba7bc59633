#ifndef GEOSPAN_CONNECTIVITY_ENGINE_HPP
#define GEOSPAN_CONNECTIVITY_ENGINE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>

#include "geospan/branch_store.hpp"
#include "geospan/dyn_connectivity.hpp"
#include "geospan/pair_matching.hpp"
#include "geospan/quadtree.hpp"

namespace geospan {

struct ConnectivityConfig {
    double psi = 16.0;
    int dim = 2;
    ShapeKind kind = ShapeKind::Disk;
    std::optional<BoxSpec> box;
};

// Connectivity over the intersection graph via the proxy-graph pipeline:
// a sparse quadtree with garrisons, constituent marks with containment
// edges, maximal bichromatic matchings between perimeter-close storing
// cells backed by one branch-persistent garrison index per cell, and an
// HdLT structure over the proxy graph. Queries map each shape to the
// highest marked ancestor-or-self of its storing cell.
class ConnectivityEngine {
public:
    explicit ConnectivityEngine(const ConnectivityConfig& cfg);

    void insert(const Shape& s);
    void delete_shape(ShapeId id);
    bool connected(ShapeId a, ShapeId b) const;

    const QuadTree& tree() const { return tree_; }
    std::size_t size() const { return tree_.size(); }

    struct PairInfo {
        CellId a;
        CellId b;
        int refcount;
        const PairMatching* matching;
    };
    std::vector<PairInfo> active_pairs() const;
    std::size_t matching_total() const;
    std::size_t z_total() const;
    std::size_t rebuild_count() const { return rebuild_count_; }

    // Perimeter and constituents of a live shape, for tests and size checks.
    std::vector<CellId> constituents(const Shape& s) const;
    std::vector<CellId> perimeter_cells(const Shape& s, bool storing_only) const;

    void rebuild();

private:
    using CellPair = std::pair<CellId, CellId>;

    struct PairState {
        CellId a;
        CellId b;
        int refcount = 0;
        BranchLabel label_a = 0;
        BranchLabel label_b = 0;
        std::unique_ptr<PairMatching> matching;
        std::optional<DynGraph::EdgeHandle> proxy_edge;
    };

    BranchStore& store_for(const CellId& c);
    DynGraph::VertexId vertex_of(const CellId& c);
    PairState* find_pair(const CellPair& key);
    PairState& materialize_pair(const CellPair& key);
    void destroy_pair(const CellPair& key);
    void update_proxy_edge(PairState& pair);
    void process_into_pair(PairState& pair, const Shape& s, bool is_a_side);
    void collect_constituents(const CellId& cell, const Shape& s,
                              std::vector<CellId>& out) const;
    bool in_perimeter(const Shape& s, const CellId& c) const;
    void add_containment(ShapeId marker, const CellId& storing, const CellId& target);
    void maybe_rebuild();

    ConnectivityConfig cfg_;
    BoxSpec box_;
    QuadTree tree_;
    DynGraph proxy_;

    std::map<CellId, std::unique_ptr<BranchStore>> stores_;
    std::map<CellId, std::map<CellId, BranchLabel>> labels_;
    std::map<CellId, std::set<BranchLabel>> labels_used_;

    std::map<CellPair, PairState> pairs_;
    std::map<CellId, std::set<CellPair>> pairs_by_cell_;
    // Per shape: cells whose pair refcount this shape currently holds.
    std::map<ShapeId, std::set<CellId>> perimeter_contrib_;

    // Containment edges: marker shape -> (constituent cell -> proxy handle;
    // the self edge at the storing cell carries no handle).
    std::map<ShapeId, std::map<CellId, std::optional<DynGraph::EdgeHandle>>> containment_;
    std::map<CellId, std::set<ShapeId>> containment_by_cell_;

    std::map<CellId, DynGraph::VertexId> vertex_ids_;
    DynGraph::VertexId next_vertex_ = 1;

    std::size_t updates_since_rebuild_ = 0;
    std::size_t rebuild_threshold_ = 1;
    std::size_t rebuild_count_ = 0;
};

}  // namespace geospan

#endif
