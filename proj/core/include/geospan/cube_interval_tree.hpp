#ifndef GEOSPAN_CUBE_INTERVAL_TREE_HPP
#define GEOSPAN_CUBE_INTERVAL_TREE_HPP

#include "geospan/intersection_index.hpp"

namespace geospan {

// Multi-level interval structure for d-dimensional hypercube intersection
// queries. Level k (axes 0..d-2) is a binary tree over the point/gap leaves
// of the stored x_k-interval endpoints; an interval is assigned to the
// canonical nodes covering its endpoint range, and additionally to the
// left-endpoint structures of every node on the path to its lower endpoint
// leaf. An overlap query decomposes exactly into the canonical sets along
// the path to the query's lower endpoint (stored intervals containing it)
// plus the canonical subtrees whose point values fall inside the query
// interval (stored intervals starting inside it); both group kinds are pure,
// so each recurses into a (d-1)-level structure. The last axis is a BST
// keyed on (lower endpoint, id) with a subtree-max upper endpoint, searched
// CLRS-style. Everything lives in the node store under branch labels.
class CubeIntervalTree final : public IntersectionIndex {
public:
    explicit CubeIntervalTree(int dim);

    void insert(BranchLabel branch, const Shape& s) override;
    bool remove(BranchLabel branch, ShapeId id) override;
    std::optional<ShapeId> query_min(BranchLabel branch, const Shape& q,
                                     ShapeId exclude = -1) const override;
    std::optional<ShapeId> query_any(BranchLabel branch, const Shape& q,
                                     ShapeId exclude = -1) const override;

    NodeStore& store() override { return store_; }
    const NodeStore& store() const override { return store_; }
    void reset() override;

private:
    struct Ref {
        NodeId node;
        int slot;
    };

    NodeId get(BranchLabel b, Ref r) const;
    void set(BranchLabel b, Ref r, NodeId v);

    NodeId make_gap(BranchLabel b, double lo, double hi);
    NodeId nav_child(BranchLabel b, NodeId node, double v, bool* went_right = nullptr) const;
    NodeId ensure_leaf(BranchLabel b, Ref root, double v);
    void bump_leaf_ref(BranchLabel b, Ref root, double v, int delta);

    void slab_update(BranchLabel b, Ref root, int axis, const Shape& s, bool insert_op);
    void canon_walk(BranchLabel b, NodeId node, int axis, double lo, double hi, const Shape& s,
                    bool insert_op);
    void sub_update(BranchLabel b, Ref sub, int axis, const Shape& s, bool insert_op);

    void base_insert(BranchLabel b, Ref root, double lo, double hi, ShapeId id);
    bool base_remove(BranchLabel b, Ref ref, double lo, ShapeId id);
    bool base_contains(BranchLabel b, Ref root, double lo, ShapeId id) const;
    // mode: true = min-id over all matches, false = first match found.
    bool base_query(BranchLabel b, NodeId node, double qlo, double qhi, ShapeId exclude,
                    bool min_mode, ShapeId& best) const;

    bool slab_query(BranchLabel b, Ref root, int axis, const Shape& q, ShapeId exclude,
                    bool min_mode, ShapeId& best) const;
    bool sub_query(BranchLabel b, Ref sub, int axis, const Shape& q, ShapeId exclude,
                   bool min_mode, ShapeId& best) const;
    bool collect_range(BranchLabel b, NodeId node, int axis, const Shape& q, ShapeId exclude,
                       bool min_mode, ShapeId& best) const;
    bool contains_shape(BranchLabel b, ShapeId id) const;

    double axis_lo(const Shape& s, int axis) const { return s.center[axis] - s.reach(); }
    double axis_hi(const Shape& s, int axis) const { return s.center[axis] + s.reach(); }

    int dim_;
    mutable NodeStore store_;
    NodeId super_ = kNil;  // slot 0: level-0 root
};

}  // namespace geospan

#endif
