#include "geospan/node_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace geospan {

NodeId NodeStore::alloc(int slots) {
    if (slots < 1 || slots > kMaxSlotsPerNode) throw std::invalid_argument("bad slot count");
    offsets_.push_back(std::uint32_t(roots_.size()));
    roots_.resize(roots_.size() + std::size_t(slots), 0);
    return NodeId(offsets_.size() - 1);
}

SlotValue NodeStore::read(NodeId node, int slot, BranchLabel branch) const {
    ++touches_;
    const SlotValue root = roots_[offsets_[std::size_t(node)] + std::uint32_t(slot)];
    if (branch == kRootBranch || overrides_.empty()) return root;
    auto it = overrides_.find(key_of(node, slot));
    if (it == overrides_.end()) return root;
    ++lookups_;
    const Overrides& ov = it->second;
    auto vit = std::lower_bound(ov.begin(), ov.end(), std::make_pair(branch, SlotValue{}),
                                [](const auto& a, const auto& b) { return a.first < b.first; });
    if (vit != ov.end() && vit->first == branch) return vit->second;
    return root;
}

void NodeStore::write(NodeId node, int slot, SlotValue value, BranchLabel branch) {
    ++writes_;
    SlotValue& root = roots_[offsets_[std::size_t(node)] + std::uint32_t(slot)];
    if (branch == kRootBranch) {
        // Pin the old root value into every branch view lacking a version
        // here, then overwrite in place.
        if (!branches_.empty() && value != root) {
            Overrides& ov = overrides_[key_of(node, slot)];
            auto it = ov.begin();
            Overrides merged;
            merged.reserve(ov.size() + branches_.size());
            for (BranchLabel b : branches_) {
                while (it != ov.end() && it->first < b) merged.push_back(*it++);
                if (it != ov.end() && it->first == b) {
                    merged.push_back(*it++);
                } else {
                    merged.emplace_back(b, root);
                    ++version_entries_;
                }
            }
            while (it != ov.end()) merged.push_back(*it++);
            ov = std::move(merged);
        }
        root = value;
        return;
    }
    Overrides& ov = overrides_[key_of(node, slot)];
    auto it = std::lower_bound(ov.begin(), ov.end(), std::make_pair(branch, SlotValue{}),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != ov.end() && it->first == branch) {
        it->second = value;
    } else {
        ov.insert(it, {branch, value});
        ++version_entries_;
    }
}

void NodeStore::register_branch(BranchLabel label) {
    if (label == kRootBranch) throw std::invalid_argument("label 0 is the root");
    auto it = std::lower_bound(branches_.begin(), branches_.end(), label);
    if (it != branches_.end() && *it == label) return;
    branches_.insert(it, label);
}

void NodeStore::forget_branches() { branches_.clear(); }

void NodeStore::clear() {
    offsets_.clear();
    roots_.clear();
    overrides_.clear();
    branches_.clear();
    version_entries_ = 0;
}

}  // namespace geospan
