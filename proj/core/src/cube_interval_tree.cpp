#include "geospan/cube_interval_tree.hpp"

#include <limits>
#include <stdexcept>

namespace geospan {

namespace {

// Slab node slots.
constexpr int kKind = 0;  // 0 internal, 1 point leaf, 2 gap leaf
constexpr int kCh0 = 1;
constexpr int kCh1 = 2;
constexpr int kSpanLo = 3;
constexpr int kSpanHi = 4;
constexpr int kMinP = 5;  // min/max point value in subtree (+/-inf when none)
constexpr int kMaxP = 6;
constexpr int kCanon = 7;
constexpr int kLeftEnd = 8;
constexpr int kRefCnt = 9;

constexpr SlotValue kInternal = 0;
constexpr SlotValue kPointLeaf = 1;
constexpr SlotValue kGapLeaf = 2;

// Base BST node slots.
constexpr int kBCh0 = 0;
constexpr int kBCh1 = 1;
constexpr int kBLo = 2;
constexpr int kBHi = 3;
constexpr int kBId = 4;
constexpr int kBMaxHi = 5;

constexpr int kSlabSlots = 10;
constexpr int kBaseSlots = 6;

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

CubeIntervalTree::CubeIntervalTree(int dim) : dim_(dim) {
    if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("unsupported dimension");
    super_ = store_.alloc(1);
    store_.write(super_, 0, kNil, kRootBranch);
}

void CubeIntervalTree::reset() {
    store_.clear();
    forget_all_geometry();
    super_ = store_.alloc(1);
    store_.write(super_, 0, kNil, kRootBranch);
}

NodeId CubeIntervalTree::get(BranchLabel b, Ref r) const {
    return NodeId(store_.read(r.node, r.slot, b));
}

void CubeIntervalTree::set(BranchLabel b, Ref r, NodeId v) { store_.write(r.node, r.slot, v, b); }

NodeId CubeIntervalTree::make_gap(BranchLabel b, double lo, double hi) {
    const NodeId n = store_.alloc(kSlabSlots);
    store_.write(n, kKind, kGapLeaf, b);
    store_.write(n, kCh0, kNil, b);
    store_.write(n, kCh1, kNil, b);
    store_.write(n, kSpanLo, pack_double(lo), b);
    store_.write(n, kSpanHi, pack_double(hi), b);
    store_.write(n, kMinP, pack_double(kInf), b);
    store_.write(n, kMaxP, pack_double(-kInf), b);
    store_.write(n, kCanon, kNil, b);
    store_.write(n, kLeftEnd, kNil, b);
    return n;
}

// Child of an internal node whose leaf region contains value v. A point
// leaf's region is closed at its value; gap leaves and internal subtrees
// (whose rightmost leaf is always a gap) end open, so the boundary value
// belongs to the right sibling.
NodeId CubeIntervalTree::nav_child(BranchLabel b, NodeId node, double v, bool* went_right) const {
    const NodeId c0 = NodeId(store_.read(node, kCh0, b));
    const NodeId c1 = NodeId(store_.read(node, kCh1, b));
    const double hi0 = unpack_double(store_.read(c0, kSpanHi, b));
    const bool closed0 = store_.read(c0, kKind, b) == kPointLeaf;
    const bool right = v > hi0 || (v == hi0 && !closed0);
    if (went_right) *went_right = right;
    return right ? c1 : c0;
}

NodeId CubeIntervalTree::ensure_leaf(BranchLabel b, Ref root, double v) {
    NodeId cur = get(b, root);
    if (cur == kNil) {
        cur = make_gap(b, -kInf, kInf);
        set(b, root, cur);
    }
    std::vector<NodeId> path;
    while (store_.read(cur, kKind, b) == kInternal) {
        path.push_back(cur);
        cur = nav_child(b, cur, v);
    }
    if (store_.read(cur, kKind, b) == kPointLeaf) {
        store_.write(cur, kRefCnt, store_.read(cur, kRefCnt, b) + 1, b);
        return cur;
    }
    // Split the gap (a, c) around the new point v. The old gap node keeps
    // the canonical members of the span it used to cover; they move to the
    // replacement internal node, which covers exactly the same span.
    const double a = unpack_double(store_.read(cur, kSpanLo, b));
    const double c = unpack_double(store_.read(cur, kSpanHi, b));
    const NodeId point = store_.alloc(kSlabSlots);
    store_.write(point, kKind, kPointLeaf, b);
    store_.write(point, kCh0, kNil, b);
    store_.write(point, kCh1, kNil, b);
    store_.write(point, kSpanLo, pack_double(v), b);
    store_.write(point, kSpanHi, pack_double(v), b);
    store_.write(point, kMinP, pack_double(v), b);
    store_.write(point, kMaxP, pack_double(v), b);
    store_.write(point, kCanon, kNil, b);
    store_.write(point, kLeftEnd, kNil, b);
    store_.write(point, kRefCnt, 1, b);

    const NodeId right_gap = make_gap(b, v, c);
    const NodeId pair = store_.alloc(kSlabSlots);
    store_.write(pair, kKind, kInternal, b);
    store_.write(pair, kCh0, point, b);
    store_.write(pair, kCh1, right_gap, b);
    store_.write(pair, kSpanLo, pack_double(v), b);
    store_.write(pair, kSpanHi, pack_double(c), b);
    store_.write(pair, kMinP, pack_double(v), b);
    store_.write(pair, kMaxP, pack_double(v), b);
    store_.write(pair, kCanon, kNil, b);
    store_.write(pair, kLeftEnd, kNil, b);

    const NodeId repl = store_.alloc(kSlabSlots);
    store_.write(repl, kKind, kInternal, b);
    store_.write(repl, kCh0, cur, b);
    store_.write(repl, kCh1, pair, b);
    store_.write(repl, kSpanLo, pack_double(a), b);
    store_.write(repl, kSpanHi, pack_double(c), b);
    store_.write(repl, kMinP, pack_double(v), b);
    store_.write(repl, kMaxP, pack_double(v), b);
    store_.write(repl, kCanon, store_.read(cur, kCanon, b), b);
    store_.write(repl, kLeftEnd, kNil, b);

    store_.write(cur, kSpanHi, pack_double(v), b);
    store_.write(cur, kCanon, kNil, b);

    if (path.empty()) {
        set(b, root, repl);
    } else {
        const NodeId parent = path.back();
        if (NodeId(store_.read(parent, kCh0, b)) == cur) {
            store_.write(parent, kCh0, repl, b);
        } else {
            store_.write(parent, kCh1, repl, b);
        }
    }
    for (NodeId anc : path) {
        const double mn = unpack_double(store_.read(anc, kMinP, b));
        const double mx = unpack_double(store_.read(anc, kMaxP, b));
        if (v < mn) store_.write(anc, kMinP, pack_double(v), b);
        if (v > mx) store_.write(anc, kMaxP, pack_double(v), b);
    }
    return point;
}

void CubeIntervalTree::bump_leaf_ref(BranchLabel b, Ref root, double v, int delta) {
    NodeId cur = get(b, root);
    while (store_.read(cur, kKind, b) == kInternal) cur = nav_child(b, cur, v);
    store_.write(cur, kRefCnt, store_.read(cur, kRefCnt, b) + delta, b);
}

void CubeIntervalTree::sub_update(BranchLabel b, Ref sub, int axis, const Shape& s,
                                  bool insert_op) {
    if (axis == dim_ - 1) {
        if (insert_op) {
            base_insert(b, sub, axis_lo(s, axis), axis_hi(s, axis), s.id);
        } else {
            base_remove(b, sub, axis_lo(s, axis), s.id);
        }
    } else {
        slab_update(b, sub, axis, s, insert_op);
    }
}

void CubeIntervalTree::canon_walk(BranchLabel b, NodeId node, int axis, double lo, double hi,
                                  const Shape& s, bool insert_op) {
    if (node == kNil) return;
    const double slo = unpack_double(store_.read(node, kSpanLo, b));
    const double shi = unpack_double(store_.read(node, kSpanHi, b));
    if (hi < slo || lo > shi) return;
    if (lo <= slo && shi <= hi) {
        sub_update(b, Ref{node, kCanon}, axis + 1, s, insert_op);
        return;
    }
    if (store_.read(node, kKind, b) != kInternal) return;
    canon_walk(b, NodeId(store_.read(node, kCh0, b)), axis, lo, hi, s, insert_op);
    canon_walk(b, NodeId(store_.read(node, kCh1, b)), axis, lo, hi, s, insert_op);
}

void CubeIntervalTree::slab_update(BranchLabel b, Ref root, int axis, const Shape& s,
                                   bool insert_op) {
    const double lo = axis_lo(s, axis);
    const double hi = axis_hi(s, axis);
    if (insert_op) {
        ensure_leaf(b, root, lo);
        ensure_leaf(b, root, hi);
    }
    canon_walk(b, get(b, root), axis, lo, hi, s, insert_op);
    // Left-endpoint structures at every node on the path to lo's leaf.
    NodeId cur = get(b, root);
    while (true) {
        sub_update(b, Ref{cur, kLeftEnd}, axis + 1, s, insert_op);
        if (store_.read(cur, kKind, b) != kInternal) break;
        cur = nav_child(b, cur, lo);
    }
    if (!insert_op) {
        bump_leaf_ref(b, root, lo, -1);
        bump_leaf_ref(b, root, hi, -1);
    }
}

void CubeIntervalTree::base_insert(BranchLabel b, Ref ref, double lo, double hi, ShapeId id) {
    const NodeId node = get(b, ref);
    if (node == kNil) {
        const NodeId n = store_.alloc(kBaseSlots);
        store_.write(n, kBCh0, kNil, b);
        store_.write(n, kBCh1, kNil, b);
        store_.write(n, kBLo, pack_double(lo), b);
        store_.write(n, kBHi, pack_double(hi), b);
        store_.write(n, kBId, id, b);
        store_.write(n, kBMaxHi, pack_double(hi), b);
        set(b, ref, n);
        return;
    }
    const double nlo = unpack_double(store_.read(node, kBLo, b));
    const auto nid = ShapeId(store_.read(node, kBId, b));
    if (lo < nlo || (lo == nlo && id < nid)) {
        base_insert(b, Ref{node, kBCh0}, lo, hi, id);
    } else {
        base_insert(b, Ref{node, kBCh1}, lo, hi, id);
    }
    const double mh = unpack_double(store_.read(node, kBMaxHi, b));
    if (hi > mh) store_.write(node, kBMaxHi, pack_double(hi), b);
}

bool CubeIntervalTree::base_remove(BranchLabel b, Ref ref, double lo, ShapeId id) {
    const NodeId node = get(b, ref);
    if (node == kNil) return false;
    const double nlo = unpack_double(store_.read(node, kBLo, b));
    const auto nid = ShapeId(store_.read(node, kBId, b));
    bool removed;
    if (lo == nlo && id == nid) {
        const NodeId c0 = NodeId(store_.read(node, kBCh0, b));
        const NodeId c1 = NodeId(store_.read(node, kBCh1, b));
        if (c0 == kNil || c1 == kNil) {
            set(b, ref, c0 == kNil ? c1 : c0);
            return true;
        }
        // Two children: adopt the successor's payload, then unlink it.
        Ref sref{node, kBCh1};
        NodeId succ = c1;
        for (auto left = NodeId(store_.read(succ, kBCh0, b)); left != kNil;
             left = NodeId(store_.read(succ, kBCh0, b))) {
            sref = Ref{succ, kBCh0};
            succ = left;
        }
        const SlotValue slo = store_.read(succ, kBLo, b);
        const SlotValue shi = store_.read(succ, kBHi, b);
        const SlotValue sid = store_.read(succ, kBId, b);
        set(b, sref, NodeId(store_.read(succ, kBCh1, b)));
        store_.write(node, kBLo, slo, b);
        store_.write(node, kBHi, shi, b);
        store_.write(node, kBId, sid, b);
        removed = true;
    } else if (lo < nlo || (lo == nlo && id < nid)) {
        removed = base_remove(b, Ref{node, kBCh0}, lo, id);
    } else {
        removed = base_remove(b, Ref{node, kBCh1}, lo, id);
    }
    if (removed) {
        double mh = unpack_double(store_.read(node, kBHi, b));
        for (int slot : {kBCh0, kBCh1}) {
            const NodeId c = NodeId(store_.read(node, slot, b));
            if (c != kNil) {
                const double cm = unpack_double(store_.read(c, kBMaxHi, b));
                if (cm > mh) mh = cm;
            }
        }
        store_.write(node, kBMaxHi, pack_double(mh), b);
    }
    return removed;
}

bool CubeIntervalTree::base_contains(BranchLabel b, Ref root, double lo, ShapeId id) const {
    NodeId node = get(b, root);
    while (node != kNil) {
        const double nlo = unpack_double(store_.read(node, kBLo, b));
        const auto nid = ShapeId(store_.read(node, kBId, b));
        if (lo == nlo && id == nid) return true;
        if (lo < nlo || (lo == nlo && id < nid)) {
            node = NodeId(store_.read(node, kBCh0, b));
        } else {
            node = NodeId(store_.read(node, kBCh1, b));
        }
    }
    return false;
}

bool CubeIntervalTree::base_query(BranchLabel b, NodeId node, double qlo, double qhi,
                                  ShapeId exclude, bool min_mode, ShapeId& best) const {
    if (node == kNil) return false;
    if (unpack_double(store_.read(node, kBMaxHi, b)) < qlo) return false;
    bool found = false;
    if (base_query(b, NodeId(store_.read(node, kBCh0, b)), qlo, qhi, exclude, min_mode, best)) {
        if (!min_mode) return true;
        found = true;
    }
    const double nlo = unpack_double(store_.read(node, kBLo, b));
    if (nlo <= qhi) {
        const double nhi = unpack_double(store_.read(node, kBHi, b));
        const auto nid = ShapeId(store_.read(node, kBId, b));
        if (nhi >= qlo && nid != exclude) {
            if (best < 0 || nid < best) best = nid;
            if (!min_mode) return true;
            found = true;
        }
        if (base_query(b, NodeId(store_.read(node, kBCh1, b)), qlo, qhi, exclude, min_mode,
                       best)) {
            if (!min_mode) return true;
            found = true;
        }
    }
    return found;
}

bool CubeIntervalTree::sub_query(BranchLabel b, Ref sub, int axis, const Shape& q,
                                 ShapeId exclude, bool min_mode, ShapeId& best) const {
    if (axis == dim_ - 1) {
        return base_query(b, get(b, sub), axis_lo(q, axis), axis_hi(q, axis), exclude, min_mode,
                          best);
    }
    return slab_query(b, sub, axis, q, exclude, min_mode, best);
}

bool CubeIntervalTree::collect_range(BranchLabel b, NodeId node, int axis, const Shape& q,
                                     ShapeId exclude, bool min_mode, ShapeId& best) const {
    if (node == kNil) return false;
    const double qlo = axis_lo(q, axis);
    const double qhi = axis_hi(q, axis);
    const double mn = unpack_double(store_.read(node, kMinP, b));
    if (mn == kInf) return false;
    const double mx = unpack_double(store_.read(node, kMaxP, b));
    if (mx <= qlo || mn > qhi) return false;
    if (mn > qlo && mx <= qhi) {
        return sub_query(b, Ref{node, kLeftEnd}, axis + 1, q, exclude, min_mode, best);
    }
    if (store_.read(node, kKind, b) != kInternal) return false;
    bool found = false;
    if (collect_range(b, NodeId(store_.read(node, kCh0, b)), axis, q, exclude, min_mode, best)) {
        if (!min_mode) return true;
        found = true;
    }
    if (collect_range(b, NodeId(store_.read(node, kCh1, b)), axis, q, exclude, min_mode, best)) {
        if (!min_mode) return true;
        found = true;
    }
    return found;
}

bool CubeIntervalTree::slab_query(BranchLabel b, Ref root, int axis, const Shape& q,
                                  ShapeId exclude, bool min_mode, ShapeId& best) const {
    const NodeId r = get(b, root);
    if (r == kNil) return false;
    const double qlo = axis_lo(q, axis);
    bool found = false;
    // Stored intervals containing qlo: canonical sets on the path to its leaf.
    NodeId cur = r;
    while (true) {
        if (sub_query(b, Ref{cur, kCanon}, axis + 1, q, exclude, min_mode, best)) {
            if (!min_mode) return true;
            found = true;
        }
        if (store_.read(cur, kKind, b) != kInternal) break;
        cur = nav_child(b, cur, qlo);
    }
    // Stored intervals starting inside (qlo, qhi].
    if (collect_range(b, r, axis, q, exclude, min_mode, best)) {
        if (!min_mode) return true;
        found = true;
    }
    return found;
}

bool CubeIntervalTree::contains_shape(BranchLabel b, ShapeId id) const {
    auto git = geoms_.find(id);
    if (git == geoms_.end()) return false;
    const Shape& s = git->second;
    // The root's left-endpoint structure holds every member, so membership
    // reduces to a chain of root-structure lookups ending in a base find.
    Ref ref{super_, 0};
    for (int axis = 0; axis + 1 < dim_; ++axis) {
        const NodeId r = get(b, ref);
        if (r == kNil) return false;
        ref = Ref{r, kLeftEnd};
    }
    return base_contains(b, ref, axis_lo(s, dim_ - 1), id);
}

void CubeIntervalTree::insert(BranchLabel b, const Shape& s) {
    if (s.kind != ShapeKind::Cube) throw std::invalid_argument("cube index requires cubes");
    if (s.dim != dim_) throw std::invalid_argument("dimension mismatch");
    remember_geometry(s);
    slab_update(b, Ref{super_, 0}, 0, s, true);
}

bool CubeIntervalTree::remove(BranchLabel b, ShapeId id) {
    if (!contains_shape(b, id)) return false;
    slab_update(b, Ref{super_, 0}, 0, geoms_.at(id), false);
    return true;
}

std::optional<ShapeId> CubeIntervalTree::query_min(BranchLabel b, const Shape& q,
                                                   ShapeId exclude) const {
    ShapeId best = -1;
    slab_query(b, Ref{super_, 0}, 0, q, exclude, true, best);
    if (best < 0) return std::nullopt;
    return best;
}

std::optional<ShapeId> CubeIntervalTree::query_any(BranchLabel b, const Shape& q,
                                                   ShapeId exclude) const {
    ShapeId best = -1;
    if (slab_query(b, Ref{super_, 0}, 0, q, exclude, false, best)) return best;
    return std::nullopt;
}

}  // namespace geospan
