#include "geospan/disk_grid_index.hpp"

#include <cmath>
#include <stdexcept>

namespace geospan {

namespace {
// Bucket node slots.
constexpr int kBucketKey = 0;
constexpr int kBucketNext = 1;
constexpr int kBucketHead = 2;
// Member node slots.
constexpr int kMemberId = 0;
constexpr int kMemberNext = 1;
// Super node slots.
constexpr int kDirHead = 0;
}  // namespace

DiskGridIndex::DiskGridIndex(int dim, double psi) : dim_(dim), psi_(psi) {
    if (psi <= 0) throw std::invalid_argument("psi must be positive");
    super_ = store_.alloc(1);
    store_.write(super_, kDirHead, kNil, kRootBranch);
}

void DiskGridIndex::reset() {
    store_.clear();
    forget_all_geometry();
    super_ = store_.alloc(1);
    store_.write(super_, kDirHead, kNil, kRootBranch);
}

SlotValue DiskGridIndex::bucket_key(const Vec& p) const {
    SlotValue key = 0;
    for (int k = 0; k < dim_; ++k) {
        auto ix = std::int64_t(std::floor(p[k] / psi_));
        key = key * 0x100000 + (ix & 0xFFFFF);
    }
    return key;
}

NodeId DiskGridIndex::find_bucket(BranchLabel branch, SlotValue key) const {
    NodeId cur = NodeId(store_.read(super_, kDirHead, branch));
    while (cur != kNil) {
        if (store_.read(cur, kBucketKey, branch) == key) return cur;
        cur = NodeId(store_.read(cur, kBucketNext, branch));
    }
    return kNil;
}

void DiskGridIndex::insert(BranchLabel branch, const Shape& s) {
    remember_geometry(s);
    const SlotValue key = bucket_key(s.center);
    NodeId bucket = find_bucket(branch, key);
    if (bucket == kNil) {
        bucket = store_.alloc(3);
        store_.write(bucket, kBucketKey, key, branch);
        store_.write(bucket, kBucketNext, store_.read(super_, kDirHead, branch), branch);
        store_.write(bucket, kBucketHead, kNil, branch);
        store_.write(super_, kDirHead, bucket, branch);
    }
    const NodeId member = store_.alloc(2);
    store_.write(member, kMemberId, s.id, branch);
    store_.write(member, kMemberNext, store_.read(bucket, kBucketHead, branch), branch);
    store_.write(bucket, kBucketHead, member, branch);
}

bool DiskGridIndex::remove(BranchLabel branch, ShapeId id) {
    auto git = geoms_.find(id);
    if (git == geoms_.end()) return false;
    const NodeId bucket = find_bucket(branch, bucket_key(git->second.center));
    if (bucket == kNil) return false;
    NodeId prev = kNil;
    NodeId cur = NodeId(store_.read(bucket, kBucketHead, branch));
    while (cur != kNil) {
        if (store_.read(cur, kMemberId, branch) == id) {
            const SlotValue next = store_.read(cur, kMemberNext, branch);
            if (prev == kNil) {
                store_.write(bucket, kBucketHead, next, branch);
            } else {
                store_.write(prev, kMemberNext, next, branch);
            }
            return true;
        }
        prev = cur;
        cur = NodeId(store_.read(cur, kMemberNext, branch));
    }
    return false;
}

std::optional<ShapeId> DiskGridIndex::query_min(BranchLabel branch, const Shape& q,
                                                ShapeId exclude) const {
    ShapeId best = -1;
    NodeId bucket = NodeId(store_.read(super_, kDirHead, branch));
    while (bucket != kNil) {
        // Bucket side equals psi, so only Chebyshev-1 buckets can hold an
        // intersecting disk; scanning every bucket and testing geometry is
        // equivalent and keeps the walk simple.
        NodeId member = NodeId(store_.read(bucket, kBucketHead, branch));
        while (member != kNil) {
            const auto id = ShapeId(store_.read(member, kMemberId, branch));
            if (id != exclude && (best < 0 || id < best) && intersects(geometry(id), q)) {
                best = id;
            }
            member = NodeId(store_.read(member, kMemberNext, branch));
        }
        bucket = NodeId(store_.read(bucket, kBucketNext, branch));
    }
    if (best < 0) return std::nullopt;
    return best;
}

std::optional<ShapeId> DiskGridIndex::query_any(BranchLabel branch, const Shape& q,
                                                ShapeId exclude) const {
    return query_min(branch, q, exclude);
}

}  // namespace geospan
