#include "geospan/branch_store.hpp"

#include <stdexcept>

namespace geospan {

BranchStore::BranchStore(IndexKind kind, int dim, double psi)
    : index_(make_index(kind, dim, psi)) {}

void BranchStore::branch(BranchLabel label) {
    if (label == kRootBranch) throw std::invalid_argument("label 0 is the root");
    if (diffs_.count(label)) return;
    diffs_.emplace(label, std::set<ShapeId>{});
    index_->store().register_branch(label);
}

void BranchStore::branch_update(BranchLabel label, ShapeId id, UpdateOp op) {
    auto dit = diffs_.find(label);
    if (dit == diffs_.end()) throw std::invalid_argument("unknown branch label");
    std::set<ShapeId>& diff = dit->second;
    auto mit = members_.find(id);
    if (op == UpdateOp::Insert) {
        if (mit == members_.end()) throw std::invalid_argument("branch insert of non-root shape");
        if (diff.erase(id)) index_->insert(label, mit->second);
    } else {
        if (mit == members_.end()) return;  // not in S, so not in S_i either
        if (!diff.count(id)) {
            index_->remove(label, id);
            diff.insert(id);
        }
    }
}

void BranchStore::root_update(const Shape& s, UpdateOp op) {
    if (op == UpdateOp::Insert) {
        if (members_.count(s.id)) throw std::invalid_argument("duplicate root insert");
        members_.emplace(s.id, s);
        index_->insert(kRootBranch, s);
        for (auto& [label, diff] : diffs_) {
            index_->insert(label, s);
        }
    } else {
        root_update_delete(s.id);
    }
}

void BranchStore::root_update_delete(ShapeId id) {
    auto mit = members_.find(id);
    if (mit == members_.end()) throw std::invalid_argument("unknown root delete");
    index_->remove(kRootBranch, id);
    for (auto& [label, diff] : diffs_) {
        if (!diff.count(id)) index_->remove(label, id);
        diff.erase(id);  // id leaves S, so it is no longer in S \ S_i
    }
    members_.erase(mit);
}

bool BranchStore::branch_contains(ShapeId id, BranchLabel label) const {
    if (!members_.count(id)) return false;
    if (label == kRootBranch) return true;
    auto dit = diffs_.find(label);
    if (dit == diffs_.end()) throw std::invalid_argument("unknown branch label");
    return dit->second.count(id) == 0;
}

std::optional<ShapeId> BranchStore::query_min(BranchLabel label, const Shape& q,
                                              ShapeId exclude) const {
    return index_->query_min(label, q, exclude);
}

std::optional<ShapeId> BranchStore::query_any(BranchLabel label, const Shape& q,
                                              ShapeId exclude) const {
    return index_->query_any(label, q, exclude);
}

std::size_t BranchStore::symmetric_difference() const {
    std::size_t z = 0;
    for (const auto& [label, diff] : diffs_) z += diff.size();
    return z;
}

void BranchStore::rebuild() {
    const std::map<BranchLabel, std::set<ShapeId>> old_diffs = diffs_;
    index_->reset();
    diffs_.clear();
    for (const auto& [id, s] : members_) {
        index_->insert(kRootBranch, s);
    }
    for (const auto& [label, diff] : old_diffs) {
        branch(label);
        for (ShapeId id : diff) {
            branch_update(label, id, UpdateOp::Delete);
        }
    }
}

}  // namespace geospan
