#ifndef GEOSPAN_SPANNER_ENGINE_HPP
#define GEOSPAN_SPANNER_ENGINE_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geospan/branch_store.hpp"
#include "geospan/pair_matching.hpp"
#include "geospan/point_spanner.hpp"
#include "geospan/quadtree.hpp"

namespace geospan {

enum class SpaceMode : std::uint8_t { Big, Small };

struct SpannerConfig {
    double eps_user = 0.5;  // public stretch parameter, in (0,1)
    double psi = 16.0;
    int dim = 2;
    ShapeKind kind = ShapeKind::Disk;
    SpaceMode mode = SpaceMode::Small;
    std::optional<BoxSpec> box;  // default: [0, psi*]^dim with unit cells

    double eps_internal() const { return eps_user / 7.0; }
    int eps_m() const { return int(std::ceil(1.0 / eps_internal())); }
    IndexKind index_kind() const {
        return kind == ShapeKind::Disk ? IndexKind::DiskGrid : IndexKind::CubeIntervalTree;
    }
};

struct EdgeEvent {
    bool added = true;
    ShapeId u = -1;
    ShapeId v = -1;
    double weight = 0.0;
    std::string provenance;
};

struct EngineStats {
    std::size_t n = 0;
    std::size_t edge_count = 0;
    std::size_t type1_count = 0;
    std::size_t type2_count = 0;
    std::size_t matching_total = 0;
    std::size_t z = 0;
    std::uint64_t node_versions = 0;
    std::size_t rebuilds = 0;
    std::size_t active_pairs = 0;
};

// Dynamic (1+eps)-spanner over the intersection graph of shapes inside a
// fixed box. Type-i edges mirror Euclidean point spanners between equal
// size cells within each other's 3*C regions; type-ii edges witness
// maximal bichromatic matchings between eps-cell pairs (E, E') whose cells
// satisfy |C'| = 2^(i-1)|C| and C' meets (2^(i+5)+1)*C. Big mode keeps two
// intersection indexes per pair; small mode keeps one branch-persistent
// store per eps-cell side and one branch per pair, rebuilt every
// K = max(1, N/(2 psi^dim)) updates. Both modes emit identical edge events.
class SpannerEngine {
public:
    explicit SpannerEngine(const SpannerConfig& cfg);

    std::vector<EdgeEvent> insert(const Shape& s);
    std::vector<EdgeEvent> delete_shape(ShapeId id);

    // Current spanner, one entry per shape pair, sorted by (u, v).
    std::vector<std::tuple<ShapeId, ShapeId, double>> edges() const;
    EngineStats stats() const;

    const QuadTree& tree() const { return tree_; }
    const SpannerConfig& config() const { return cfg_; }

    // One line per edge delta: `+|- u v w provenance`.
    void set_event_log(std::ostream* log) { log_ = log; }

    void rebuild();

    struct PairInfo {
        EpsCellId left;
        EpsCellId right;
        const PairMatching* matching;
    };
    std::vector<PairInfo> active_pairs() const;
    std::size_t matching_total() const;
    std::size_t z_total() const;

private:
    using CellPair = std::pair<CellId, CellId>;
    using EpsPair = std::pair<EpsCellId, EpsCellId>;

    struct Instance {
        std::unique_ptr<PointSpanner> spanner;
    };

    struct PairState {
        EpsCellId left;
        EpsCellId right;
        std::unique_ptr<PairMatching> matching;
        std::optional<std::pair<ShapeId, ShapeId>> edge;
        // Big mode: concrete unmatched views.
        std::unique_ptr<IntersectionIndex> view_left;
        std::unique_ptr<IntersectionIndex> view_right;
        // Small mode: branch labels into the side stores.
        BranchLabel label_left = 0;
        BranchLabel label_right = 0;
    };

    BranchStore& gamma_store(const EpsCellId& e);
    BranchStore& pi_store(const EpsCellId& e);
    BranchLabel stable_label(std::map<EpsCellId, BranchLabel>& registry, const EpsCellId& key,
                             std::set<BranchLabel>& used);
    PairState& ensure_pair(const EpsCellId& left, const EpsCellId& right, ShapeId newcomer);
    void update_pair_edge(PairState& pair, std::vector<EdgeEvent>& events);
    void ensure_instance(const CellId& a, const CellId& b, std::vector<EdgeEvent>& events);
    void mirror_instance_delta(const CellPair& key, const EdgeDelta& delta,
                               std::vector<EdgeEvent>& events);
    void add_provenance(ShapeId u, ShapeId v, bool type1, const std::string& prov,
                        std::vector<EdgeEvent>& events);
    void remove_provenance(ShapeId u, ShapeId v, bool type1, const std::string& prov,
                           std::vector<EdgeEvent>& events);
    std::string type1_prov(const CellPair& key) const;
    std::string type2_prov(const EpsPair& key) const;
    void maybe_rebuild();
    void log_events(const std::vector<EdgeEvent>& events) const;

    SpannerConfig cfg_;
    BoxSpec box_;
    QuadTree tree_;

    std::map<CellPair, Instance> instances_;
    std::map<CellId, std::set<CellPair>> instances_by_cell_;

    std::map<EpsPair, PairState> pairs_;
    std::map<EpsCellId, std::set<EpsPair>> pairs_by_left_;
    std::map<EpsCellId, std::set<EpsPair>> pairs_by_right_;

    std::map<EpsCellId, std::unique_ptr<BranchStore>> gamma_stores_;
    std::map<EpsCellId, std::unique_ptr<BranchStore>> pi_stores_;
    std::map<EpsCellId, std::map<EpsCellId, BranchLabel>> gamma_labels_;
    std::map<EpsCellId, std::map<EpsCellId, BranchLabel>> pi_labels_;
    std::map<EpsCellId, std::set<BranchLabel>> gamma_labels_used_;
    std::map<EpsCellId, std::set<BranchLabel>> pi_labels_used_;

    struct GraphEdge {
        double weight = 0;
        int type1_refs = 0;
        int type2_refs = 0;
    };
    std::map<std::pair<ShapeId, ShapeId>, GraphEdge> graph_;

    std::size_t updates_since_rebuild_ = 0;
    std::size_t rebuild_threshold_ = 1;
    std::size_t rebuild_count_ = 0;
    std::ostream* log_ = nullptr;
};

}  // namespace geospan

#endif
