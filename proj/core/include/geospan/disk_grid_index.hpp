#ifndef GEOSPAN_DISK_GRID_INDEX_HPP
#define GEOSPAN_DISK_GRID_INDEX_HPP

#include "geospan/intersection_index.hpp"

namespace geospan {

// Correctness-first disk intersection baseline: a uniform grid with bucket
// side psi. Two disks with diameters <= psi intersect only if their centers
// fall in buckets at Chebyshev distance <= 1, so queries scan the 3^d
// candidate buckets. The directory is a sorted linked list of bucket nodes,
// each holding a linked member list, all inside the node store.
class DiskGridIndex final : public IntersectionIndex {
public:
    DiskGridIndex(int dim, double psi);

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
    SlotValue bucket_key(const Vec& p) const;
    NodeId find_bucket(BranchLabel branch, SlotValue key) const;

    int dim_;
    double psi_;
    mutable NodeStore store_;
    NodeId super_ = kNil;  // slot 0: directory head
};

}  // namespace geospan

#endif
