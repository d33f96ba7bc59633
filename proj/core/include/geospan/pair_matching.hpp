#ifndef GEOSPAN_PAIR_MATCHING_HPP
#define GEOSPAN_PAIR_MATCHING_HPP

#include <functional>
#include <map>
#include <optional>

#include "geospan/geometry.hpp"

namespace geospan {

// View backend for one active pair: the two unmatched sets (left side minus
// shapes matched as left, right side minus shapes matched as right). In
// big-space mode these are concrete per-pair intersection indexes; in
// small-space mode they are branches of the two sides' branch-persistent
// stores. remove must be idempotent; insert must be a no-op when the shape
// is already present in the view (as after a small-space root-update).
struct PairViewOps {
    std::function<std::optional<ShapeId>(const Shape&, ShapeId)> query_left;
    std::function<std::optional<ShapeId>(const Shape&, ShapeId)> query_right;
    std::function<void(ShapeId)> remove_left;
    std::function<void(ShapeId)> remove_right;
    std::function<void(ShapeId)> insert_left;
    std::function<void(ShapeId)> insert_right;
    std::function<const Shape&(ShapeId)> geometry;
};

// Maximal bichromatic matching for one pair, maintained greedily by the
// five-step insert/delete procedures. Left and right are roles: a shape in
// both side sets may be matched once per role. Deterministic because view
// queries return minimum-id witnesses.
class PairMatching {
public:
    explicit PairMatching(PairViewOps ops) : ops_(std::move(ops)) {}

    void on_left_insert(const Shape& s);
    void on_right_insert(const Shape& s);
    void on_left_delete(ShapeId id);
    void on_right_delete(ShapeId id);

    bool is_nonempty() const { return !left_to_right_.empty(); }
    std::size_t size() const { return left_to_right_.size(); }
    // Lowest matched edge by (left id, right id).
    std::optional<std::pair<ShapeId, ShapeId>> witness() const;

    bool matched_as_left(ShapeId id) const { return left_to_right_.count(id) != 0; }
    bool matched_as_right(ShapeId id) const { return right_to_left_.count(id) != 0; }
    const std::map<ShapeId, ShapeId>& edges() const { return left_to_right_; }

private:
    PairViewOps ops_;
    std::map<ShapeId, ShapeId> left_to_right_;
    std::map<ShapeId, ShapeId> right_to_left_;
};

}  // namespace geospan

#endif
