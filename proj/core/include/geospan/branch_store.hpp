#ifndef GEOSPAN_BRANCH_STORE_HPP
#define GEOSPAN_BRANCH_STORE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>

#include "geospan/intersection_index.hpp"

namespace geospan {

enum class UpdateOp : std::uint8_t { Insert, Delete };

// Branch-persistent wrapper around an intersection index. The root (label
// 0) stores the current set S; each branch i stores S_i ⊆ S, realized by
// fat-node versions in the index's node store plus a difference tree
// holding S \ S_i. Root-updates run the update on the root and then on
// every branch; rebuilds reconstruct the root by |S| inserts and recreate
// each branch by replaying its difference tree.
class BranchStore {
public:
    BranchStore(IndexKind kind, int dim, double psi);

    void root_update(const Shape& s, UpdateOp op);
    void root_update_delete(ShapeId id);
    // Creates branch `label` with S_label = S; no-op if it exists.
    void branch(BranchLabel label);
    bool has_branch(BranchLabel label) const { return diffs_.count(label) != 0; }
    // Insert requires the shape to be in S; both ops are idempotent.
    void branch_update(BranchLabel label, ShapeId id, UpdateOp op);

    std::optional<ShapeId> query_min(BranchLabel label, const Shape& q,
                                     ShapeId exclude = -1) const;
    std::optional<ShapeId> query_any(BranchLabel label, const Shape& q,
                                     ShapeId exclude = -1) const;

    bool root_contains(ShapeId id) const { return members_.count(id) != 0; }
    bool branch_contains(ShapeId id, BranchLabel label) const;
    const std::map<ShapeId, Shape>& root_set() const { return members_; }
    const std::map<BranchLabel, std::set<ShapeId>>& difference_trees() const { return diffs_; }
    std::size_t branch_count() const { return diffs_.size(); }
    // z contribution: sum over branches of |S \ S_i|.
    std::size_t symmetric_difference() const;

    void rebuild();

    IntersectionIndex& index() { return *index_; }
    const IntersectionIndex& index() const { return *index_; }

private:
    std::unique_ptr<IntersectionIndex> index_;
    std::map<ShapeId, Shape> members_;
    std::map<BranchLabel, std::set<ShapeId>> diffs_;
};

}  // namespace geospan

#endif
