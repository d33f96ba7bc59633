#ifndef GEOSPAN_QUADTREE_HPP
#define GEOSPAN_QUADTREE_HPP

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "geospan/geometry.hpp"

namespace geospan {

enum class TreeMode : std::uint8_t { Spanner, Connectivity };

using EpsGrid = std::array<std::int16_t, kMaxDim>;

// Per eps-cell bookkeeping: subpopulation (storing cell here, center here)
// and population (cell in storing family, center here).
struct EpsRecord {
    std::set<ShapeId> gamma;
    std::set<ShapeId> pi;
};

struct NodeRecord {
    std::set<ShapeId> pi;      // shapes with this cell in their storing family
    std::set<ShapeId> gamma;   // shapes with this cell as storing cell
    int subtree_storing = 0;   // cells with nonempty garrison in subtree (incl. self)
    int child_count = 0;       // present children
    long mark_count = 0;       // constituent marks (maintained by the connectivity engine)
    std::map<EpsGrid, EpsRecord> eps;
};

struct DeltaReport {
    CellId storing;
    std::vector<CellId> family;   // storing family (spanner mode) or {storing}
    std::vector<CellId> created;  // cells added to the tree, root-most first
    std::vector<CellId> removed;  // cells pruned, leaf-most first
    std::vector<EpsCellId> touched_eps;
};

// T(S): the minimum quadtree containing all storing families (spanner mode)
// or all storing cells (connectivity mode), with populations, garrisons,
// subtree storing counts and eps-cell records.
class QuadTree {
public:
    QuadTree(const BoxSpec& box, TreeMode mode, double psi, int eps_m = 1);

    DeltaReport insert_shape(const Shape& s);
    DeltaReport delete_shape(ShapeId id);

    const BoxSpec& box() const { return box_; }
    TreeMode mode() const { return mode_; }
    int eps_m() const { return eps_m_; }
    double psi() const { return psi_; }
    int max_type2_index() const { return max_i_; }

    bool contains_cell(const CellId& c) const { return nodes_.count(c) != 0; }
    const NodeRecord* node(const CellId& c) const;
    NodeRecord* node_mut(const CellId& c);
    const Shape* shape(ShapeId id) const;
    const std::map<ShapeId, Shape>& shapes() const { return shapes_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t size() const { return shapes_.size(); }

    const std::set<CellId>& cells_at_level(int level) const;

    // Present cells of size |c| inside 3*c, including c itself when present.
    std::vector<CellId> type1_partners(const CellId& c) const;
    // For i in [1, ceil(log2 psi)]: present cells of size 2^(i-1)|c|
    // intersecting (2^(i+5)+1)*c.
    std::vector<std::pair<int, CellId>> type2_partners(const CellId& c) const;
    // Inverse direction: present cells C with |c| = 2^(i-1)|C| whose
    // (2^(i+5)+1)*C region intersects c.
    std::vector<std::pair<int, CellId>> type2_partners_inverse(const CellId& c) const;

    void adjust_mark(const CellId& c, long delta);
    long mark_count(const CellId& c) const;

    // One line per present cell: `level coords |pi| |gamma| marks`.
    std::string debug_dump() const;

private:
    void ensure_cell(const CellId& c, DeltaReport& delta);
    void try_prune(CellId c, DeltaReport& delta);
    void adjust_subtree_storing(const CellId& storing, int delta);

    BoxSpec box_;
    TreeMode mode_;
    double psi_;
    int eps_m_;
    int max_i_;
    std::unordered_map<CellId, NodeRecord, CellIdHash> nodes_;
    std::vector<std::set<CellId>> levels_;
    std::map<ShapeId, Shape> shapes_;
};

}  // namespace geospan

#endif
