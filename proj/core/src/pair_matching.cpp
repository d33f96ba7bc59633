#include "geospan/pair_matching.hpp"

namespace geospan {

void PairMatching::on_left_insert(const Shape& s) {
    const auto partner = ops_.query_right(s, s.id);
    if (partner) {
        left_to_right_[s.id] = *partner;
        right_to_left_[*partner] = s.id;
        ops_.remove_left(s.id);
        ops_.remove_right(*partner);
    } else {
        ops_.insert_left(s.id);
    }
}

void PairMatching::on_right_insert(const Shape& s) {
    const auto partner = ops_.query_left(s, s.id);
    if (partner) {
        left_to_right_[*partner] = s.id;
        right_to_left_[s.id] = *partner;
        ops_.remove_left(*partner);
        ops_.remove_right(s.id);
    } else {
        ops_.insert_right(s.id);
    }
}

void PairMatching::on_left_delete(ShapeId id) {
    auto it = left_to_right_.find(id);
    if (it == left_to_right_.end()) {
        ops_.remove_left(id);
        return;
    }
    const ShapeId orphan = it->second;
    left_to_right_.erase(it);
    right_to_left_.erase(orphan);
    // Re-match the orphan against the unmatched left side.
    const Shape& og = ops_.geometry(orphan);
    const auto partner = ops_.query_left(og, orphan);
    if (partner) {
        left_to_right_[*partner] = orphan;
        right_to_left_[orphan] = *partner;
        ops_.remove_left(*partner);
    } else {
        ops_.insert_right(orphan);
    }
}

void PairMatching::on_right_delete(ShapeId id) {
    auto it = right_to_left_.find(id);
    if (it == right_to_left_.end()) {
        ops_.remove_right(id);
        return;
    }
    const ShapeId orphan = it->second;
    right_to_left_.erase(it);
    left_to_right_.erase(orphan);
    const Shape& og = ops_.geometry(orphan);
    const auto partner = ops_.query_right(og, orphan);
    if (partner) {
        left_to_right_[orphan] = *partner;
        right_to_left_[*partner] = orphan;
        ops_.remove_right(*partner);
    } else {
        ops_.insert_left(orphan);
    }
}

std::optional<std::pair<ShapeId, ShapeId>> PairMatching::witness() const {
    if (left_to_right_.empty()) return std::nullopt;
    const auto& [l, r] = *left_to_right_.begin();
    return std::make_pair(l, r);
}

}  // namespace geospan
