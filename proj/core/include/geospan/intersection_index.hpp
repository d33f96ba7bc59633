#ifndef GEOSPAN_INTERSECTION_INDEX_HPP
#define GEOSPAN_INTERSECTION_INDEX_HPP

#include <memory>
#include <optional>
#include <unordered_map>

#include "geospan/geometry.hpp"
#include "geospan/node_store.hpp"

namespace geospan {

// Dynamic intersection-query structure over a homogeneous shape set. All
// structural state lives in a NodeStore so fat-node branch persistence can
// intercept mutations; operations take the branch label they act under.
//
// query_min returns the minimum intersecting id (deterministic by set);
// query_any returns some intersecting id via a short-circuit walk.
class IntersectionIndex {
public:
    virtual ~IntersectionIndex() = default;

    virtual void insert(BranchLabel branch, const Shape& s) = 0;
    // Removes if present under the branch view; returns whether it was.
    virtual bool remove(BranchLabel branch, ShapeId id) = 0;
    virtual std::optional<ShapeId> query_min(BranchLabel branch, const Shape& q,
                                             ShapeId exclude = -1) const = 0;
    virtual std::optional<ShapeId> query_any(BranchLabel branch, const Shape& q,
                                             ShapeId exclude = -1) const = 0;

    virtual NodeStore& store() = 0;
    virtual const NodeStore& store() const = 0;
    // Wipe to an empty structure, discarding all fat-node history.
    virtual void reset() = 0;

    const Shape& geometry(ShapeId id) const { return geoms_.at(id); }

protected:
    void remember_geometry(const Shape& s) { geoms_.insert_or_assign(s.id, s); }
    void forget_all_geometry() { geoms_.clear(); }

    // Geometry is immutable per id, so it lives outside the versioned slots.
    std::unordered_map<ShapeId, Shape> geoms_;
};

enum class IndexKind : std::uint8_t { DiskGrid, CubeIntervalTree };

std::unique_ptr<IntersectionIndex> make_index(IndexKind kind, int dim, double psi);

}  // namespace geospan

#endif
