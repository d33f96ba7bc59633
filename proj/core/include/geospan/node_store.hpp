#ifndef GEOSPAN_NODE_STORE_HPP
#define GEOSPAN_NODE_STORE_HPP

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace geospan {

using NodeId = std::int32_t;
using BranchLabel = std::int64_t;
using SlotValue = std::int64_t;

inline constexpr NodeId kNil = -1;
inline constexpr BranchLabel kRootBranch = 0;
inline constexpr int kMaxSlotsPerNode = 16;

inline SlotValue pack_double(double v) { return std::bit_cast<SlotValue>(v); }
inline double unpack_double(SlotValue v) { return std::bit_cast<double>(v); }

// Fat-node versioned slot store. Nodes carry a fixed number of slots chosen
// at allocation; root values live in a flat array, per-branch overrides in
// a side table keyed by (node, slot) and sorted by label. Reading under
// branch i yields the override if present, else the root value. A root
// write first pins the old root value into every registered branch lacking
// an override at that slot, so branch views stay frozen while the root
// restructures; root history itself is not kept.
class NodeStore {
public:
    NodeId alloc(int slots);
    SlotValue read(NodeId node, int slot, BranchLabel branch) const;
    void write(NodeId node, int slot, SlotValue value, BranchLabel branch);

    void register_branch(BranchLabel label);
    void forget_branches();
    const std::vector<BranchLabel>& branches() const { return branches_; }

    void clear();

    std::size_t node_count() const { return offsets_.size(); }
    std::uint64_t version_entries() const { return version_entries_; }
    std::uint64_t lookups_total() const { return lookups_; }
    std::uint64_t touches_total() const { return touches_; }
    std::uint64_t writes_total() const { return writes_; }
    void reset_counters() { lookups_ = touches_ = writes_ = 0; }

private:
    using Overrides = std::vector<std::pair<BranchLabel, SlotValue>>;

    static std::uint64_t key_of(NodeId node, int slot) {
        return (std::uint64_t(std::uint32_t(node)) << 4) | std::uint64_t(slot);
    }

    std::vector<std::uint32_t> offsets_;
    std::vector<SlotValue> roots_;
    std::unordered_map<std::uint64_t, Overrides> overrides_;
    std::vector<BranchLabel> branches_;  // sorted, root label excluded
    std::uint64_t version_entries_ = 0;
    mutable std::uint64_t lookups_ = 0;
    mutable std::uint64_t touches_ = 0;
    std::uint64_t writes_ = 0;
};

}  // namespace geospan

#endif
