#ifndef GEOSPAN_FOCUSED_HPP
#define GEOSPAN_FOCUSED_HPP

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "geospan/dyn_connectivity.hpp"
#include "geospan/spanner_engine.hpp"

namespace geospan {

struct FocusedConfig {
    double eps_user = 0.5;
    double psi = 16.0;
    int dim = 2;
    ShapeKind kind = ShapeKind::Disk;
    SpaceMode mode = SpaceMode::Big;
};

struct FocusedStats {
    std::size_t shapes = 0;
    std::size_t focused_count = 0;
    std::size_t engine_count = 0;
    std::size_t copies_high_water = 0;
    std::size_t rebuild_count = 0;
    std::size_t last_rebuild_size = 0;
};

// Removes the bounding-box assumption: disjoint focal areas (side psi/2)
// with connection areas (side 6 psi); every pair of focused spanners with
// intersecting connection areas shares an engine over a side-18psi box
// centred at the smaller id. A shape belongs to S_G when the psi/2 box
// around its center meets G's focal area, which keeps the union of all
// engines a (1+eps)-spanner of the whole set. Everything is rebuilt from
// scratch after N updates or when |S| reaches N/2 or 2N.
class FocusedDecomposition {
public:
    explicit FocusedDecomposition(const FocusedConfig& cfg);

    void insert(const Shape& s);
    void delete_shape(ShapeId id);

    // Deduplicated union over all engines, sorted by (u, v).
    std::vector<std::tuple<ShapeId, ShapeId, double>> spanner_edges() const;
    bool connected(ShapeId a, ShapeId b) const;

    const std::map<ShapeId, Shape>& shapes() const { return shapes_; }
    FocusedStats stats() const;
    std::size_t rebuild_count() const { return rebuild_count_; }

    // True when the next update will trigger a global rebuild given the
    // current counters; exposed so tests can check the schedule exactly.
    bool rebuild_due() const;

    // Focused spanners a shape belongs to (by focused id), for invariants.
    std::vector<int> memberships(ShapeId id) const;

private:
    using GridKey = std::array<std::int64_t, kMaxDim>;

    struct Focused {
        int id = 0;
        Vec center{};
        std::set<ShapeId> members;
        std::vector<int> copy_engines;  // copy slot -> engine id, -1 when free
    };

    struct EngineRec {
        int id = 0;
        int g1 = 0;
        int g2 = 0;
        std::unique_ptr<SpannerEngine> engine;
    };

    GridKey grid_key(const Vec& p) const;
    std::vector<int> focal_hits(const Vec& center) const;
    std::vector<int> connection_neighbors(const Vec& center) const;
    int take_copy(Focused& g);
    void engine_apply(const std::vector<EdgeEvent>& events);
    void engine_insert(int engine_id, const Shape& s);
    void insert_core(const Shape& s);
    void create_focused(const Shape& seed);
    void maybe_global_rebuild();

    FocusedConfig cfg_;
    std::map<ShapeId, Shape> shapes_;

    std::vector<Focused> focused_;
    std::map<int, EngineRec> engines_;
    std::map<int, std::vector<int>> engines_of_;
    std::map<ShapeId, std::set<int>> shape_engines_;
    std::map<ShapeId, std::set<int>> shape_focused_;

    std::map<GridKey, std::vector<int>> focal_grid_;
    std::map<GridKey, std::vector<ShapeId>> shape_grid_;

    std::map<std::pair<ShapeId, ShapeId>, int> union_refs_;
    std::map<std::pair<ShapeId, ShapeId>, DynGraph::EdgeHandle> union_handles_;
    std::unique_ptr<DynGraph> conn_;

    int next_engine_ = 1;
    std::size_t copies_high_water_ = 0;
    std::size_t ops_since_rebuild_ = 0;
    std::size_t size_at_rebuild_ = 0;
    std::size_t rebuild_count_ = 0;
};

}  // namespace geospan

#endif
