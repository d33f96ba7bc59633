#include "geospan/connectivity_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geospan {

namespace {

std::uint64_t fnv_cell(const CellId& c) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(std::uint64_t(std::uint8_t(c.level)));
    for (int k = 0; k < kMaxDim; ++k) mix(std::uint64_t(std::uint32_t(c.ix[k])));
    return h;
}

}  // namespace

ConnectivityEngine::ConnectivityEngine(const ConnectivityConfig& cfg)
    : cfg_(cfg),
      box_(cfg.box ? *cfg.box : BoxSpec::bounding(cfg.psi, cfg.dim)),
      tree_(box_, TreeMode::Connectivity, cfg.psi) {}

BranchStore& ConnectivityEngine::store_for(const CellId& c) {
    auto it = stores_.find(c);
    if (it == stores_.end()) {
        IndexKind kind =
            cfg_.kind == ShapeKind::Disk ? IndexKind::DiskGrid : IndexKind::CubeIntervalTree;
        it = stores_.emplace(c, std::make_unique<BranchStore>(kind, cfg_.dim, cfg_.psi)).first;
    }
    return *it->second;
}

DynGraph::VertexId ConnectivityEngine::vertex_of(const CellId& c) {
    auto it = vertex_ids_.find(c);
    if (it == vertex_ids_.end()) it = vertex_ids_.emplace(c, next_vertex_++).first;
    return it->second;
}

ConnectivityEngine::PairState* ConnectivityEngine::find_pair(const CellPair& key) {
    auto it = pairs_.find(key);
    return it == pairs_.end() ? nullptr : &it->second;
}

ConnectivityEngine::PairState& ConnectivityEngine::materialize_pair(const CellPair& key) {
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;

    PairState state;
    state.a = key.first;
    state.b = key.second;
    it = pairs_.emplace(key, std::move(state)).first;
    PairState& pair = it->second;
    pairs_by_cell_[key.first].insert(key);
    pairs_by_cell_[key.second].insert(key);

    BranchStore* sa = &store_for(key.first);
    BranchStore* sb = &store_for(key.second);
    auto assign_label = [this](const CellId& owner, const CellId& other) {
        auto& registry = labels_[owner];
        auto rit = registry.find(other);
        if (rit != registry.end()) return rit->second;
        auto& used = labels_used_[owner];
        auto label = BranchLabel(fnv_cell(other) & 0x7FFFFFFFFFFFFFFFull);
        while (label == kRootBranch || used.count(label)) ++label;
        registry.emplace(other, label);
        used.insert(label);
        return label;
    };
    pair.label_a = assign_label(key.first, key.second);
    pair.label_b = assign_label(key.second, key.first);
    sa->branch(pair.label_a);
    sb->branch(pair.label_b);

    PairViewOps ops;
    ops.geometry = [this](ShapeId id) -> const Shape& { return *tree_.shape(id); };
    const BranchLabel la = pair.label_a;
    const BranchLabel lb = pair.label_b;
    ops.query_left = [sa, la](const Shape& q, ShapeId excl) { return sa->query_min(la, q, excl); };
    ops.query_right = [sb, lb](const Shape& q, ShapeId excl) { return sb->query_min(lb, q, excl); };
    ops.remove_left = [sa, la](ShapeId id) { sa->branch_update(la, id, UpdateOp::Delete); };
    ops.remove_right = [sb, lb](ShapeId id) { sb->branch_update(lb, id, UpdateOp::Delete); };
    ops.insert_left = [sa, la](ShapeId id) { sa->branch_update(la, id, UpdateOp::Insert); };
    ops.insert_right = [sb, lb](ShapeId id) { sb->branch_update(lb, id, UpdateOp::Insert); };
    pair.matching = std::make_unique<PairMatching>(std::move(ops));

    // Greedy maximal matching over the current garrisons.
    if (const NodeRecord* rec = tree_.node(key.first)) {
        for (ShapeId id : std::set<ShapeId>(rec->gamma)) {
            pair.matching->on_left_insert(*tree_.shape(id));
        }
    }
    update_proxy_edge(pair);
    return pair;
}

void ConnectivityEngine::destroy_pair(const CellPair& key) {
    auto it = pairs_.find(key);
    if (it == pairs_.end()) return;
    PairState& pair = it->second;
    // Dissolve the matching: matched shapes return to their unmatched
    // views so the branch invariants stay exact.
    for (const auto& [l, r] : std::map<ShapeId, ShapeId>(pair.matching->edges())) {
        store_for(pair.a).branch_update(pair.label_a, l, UpdateOp::Insert);
        store_for(pair.b).branch_update(pair.label_b, r, UpdateOp::Insert);
    }
    if (pair.proxy_edge) proxy_.remove_edge(*pair.proxy_edge);
    pairs_by_cell_[key.first].erase(key);
    pairs_by_cell_[key.second].erase(key);
    pairs_.erase(it);
}

void ConnectivityEngine::update_proxy_edge(PairState& pair) {
    const bool want = pair.matching->is_nonempty();
    if (want && !pair.proxy_edge) {
        pair.proxy_edge = proxy_.add_edge(vertex_of(pair.a), vertex_of(pair.b));
    } else if (!want && pair.proxy_edge) {
        proxy_.remove_edge(*pair.proxy_edge);
        pair.proxy_edge.reset();
    }
}

void ConnectivityEngine::process_into_pair(PairState& pair, const Shape& s, bool is_a_side) {
    if (is_a_side) {
        pair.matching->on_left_insert(s);
    } else {
        pair.matching->on_right_insert(s);
    }
    update_proxy_edge(pair);
}

void ConnectivityEngine::collect_constituents(const CellId& cell, const Shape& s,
                                              std::vector<CellId>& out) const {
    if (!tree_.contains_cell(cell)) return;
    const Region region = cell_region(box_, cell);
    if (!shape_intersects_region(s, region)) return;
    if (shape_contains_region(s, region)) {
        out.push_back(cell);
        return;
    }
    if (cell.level == 0) return;
    // Children grid of 2^dim candidates.
    const int dim = box_.dim;
    std::array<std::int32_t, kMaxDim> base{};
    for (int k = 0; k < dim; ++k) base[k] = cell.ix[k] * 2;
    for (int mask = 0; mask < (1 << dim); ++mask) {
        CellId child;
        child.level = std::int8_t(cell.level - 1);
        for (int k = 0; k < dim; ++k) child.ix[k] = base[k] + ((mask >> k) & 1);
        collect_constituents(child, s, out);
    }
}

std::vector<CellId> ConnectivityEngine::constituents(const Shape& s) const {
    std::vector<CellId> out;
    CellId root;
    root.level = box_.levels;
    collect_constituents(root, s, out);
    std::sort(out.begin(), out.end());
    return out;
}

bool ConnectivityEngine::in_perimeter(const Shape& s, const CellId& c) const {
    if (box_.cell_side(c.level) > s.diameter()) return false;
    return region_meets_boundary(s, neighborhood(box_, c, 7));
}

std::vector<CellId> ConnectivityEngine::perimeter_cells(const Shape& s,
                                                        bool storing_only) const {
    std::vector<CellId> out;
    for (int level = 0; level <= box_.levels; ++level) {
        if (box_.cell_side(level) > s.diameter()) break;
        for (const CellId& c : tree_.cells_at_level(level)) {
            if (storing_only) {
                const NodeRecord* rec = tree_.node(c);
                if (!rec || rec->gamma.empty()) continue;
            }
            if (region_meets_boundary(s, neighborhood(box_, c, 7))) out.push_back(c);
        }
    }
    return out;
}

void ConnectivityEngine::add_containment(ShapeId marker, const CellId& storing,
                                         const CellId& target) {
    tree_.adjust_mark(target, +1);
    std::optional<DynGraph::EdgeHandle> handle;
    if (!(target == storing)) {
        handle = proxy_.add_edge(vertex_of(storing), vertex_of(target));
    }
    containment_[marker].emplace(target, handle);
    containment_by_cell_[target].insert(marker);
}

void ConnectivityEngine::insert(const Shape& s) {
    if (s.kind != cfg_.kind || s.dim != cfg_.dim) {
        throw std::invalid_argument("shape kind/dimension mismatch");
    }
    if (s.diameter() < 4.0 || s.diameter() > cfg_.psi) {
        throw std::invalid_argument("shape diameter outside [4, psi]");
    }
    const DeltaReport delta = tree_.insert_shape(s);
    const CellId storing = delta.storing;
    const bool fresh_garrison = tree_.node(storing)->gamma.size() == 1;
    vertex_of(storing);  // queries map isolated shapes to their storing cell

    // Created cells may have become constituents of existing shapes.
    for (const CellId& created : delta.created) {
        for (const auto& [tid, t] : tree_.shapes()) {
            if (tid == s.id) continue;
            const Region region = cell_region(box_, created);
            if (!shape_contains_region(t, region)) continue;
            const CellId up = parent_cell(created);
            if (created.level < box_.levels && shape_contains_region(t, cell_region(box_, up))) {
                continue;  // parent contained too, so not maximal
            }
            add_containment(tid, storing_cell(t, box_), created);
        }
    }

    // The new shape's own constituents: marks plus containment edges.
    for (const CellId& c : constituents(s)) {
        add_containment(s.id, storing, c);
    }

    // Garrison index root update.
    store_for(storing).root_update(s, UpdateOp::Insert);

    // Perimeter pair activations from the new shape.
    std::set<CellPair> fresh;
    auto bump = [&](const CellId& other, ShapeId contributor, const CellId& own) {
        if (other == own) return;
        if (!perimeter_contrib_[contributor].insert(other).second) return;
        const CellPair key = own < other ? CellPair{own, other} : CellPair{other, own};
        PairState* pair = find_pair(key);
        if (!pair) {
            pair = &materialize_pair(key);
            fresh.insert(key);
        }
        pair->refcount += 1;
    };
    for (const CellId& c : perimeter_cells(s, true)) {
        bump(c, s.id, storing);
    }
    // If the storing cell just became garrisoned, existing shapes whose
    // perimeter reaches it contribute too.
    if (fresh_garrison) {
        for (const auto& [tid, t] : tree_.shapes()) {
            if (tid == s.id) continue;
            if (!in_perimeter(t, storing)) continue;
            if (perimeter_contrib_[tid].count(storing)) continue;
            bump(storing, tid, storing_cell(t, box_));
        }
    }

    // Feed the newcomer into every active pair at its cell that predates
    // this update (fresh pairs already greedy-matched over full garrisons).
    auto reg = pairs_by_cell_.find(storing);
    if (reg != pairs_by_cell_.end()) {
        const std::set<CellPair> keys = reg->second;
        for (const CellPair& key : keys) {
            if (fresh.count(key)) continue;
            PairState& pair = pairs_.at(key);
            process_into_pair(pair, s, key.first == storing);
        }
    }

    ++updates_since_rebuild_;
    maybe_rebuild();
}

void ConnectivityEngine::delete_shape(ShapeId id) {
    const Shape* found = tree_.shape(id);
    if (!found) throw std::invalid_argument("unknown shape id");
    const Shape s = *found;
    const CellId storing = storing_cell(s, box_);

    // Drop this shape's constituent marks and containment edges.
    auto cit = containment_.find(id);
    if (cit != containment_.end()) {
        for (const auto& [cell, handle] : cit->second) {
            tree_.adjust_mark(cell, -1);
            if (handle) proxy_.remove_edge(*handle);
            containment_by_cell_[cell].erase(id);
        }
        containment_.erase(cit);
    }

    // Garrison index root delete, then matching repairs.
    store_for(storing).root_update_delete(id);
    auto reg = pairs_by_cell_.find(storing);
    if (reg != pairs_by_cell_.end()) {
        const std::set<CellPair> keys = reg->second;
        for (const CellPair& key : keys) {
            PairState& pair = pairs_.at(key);
            if (key.first == storing) {
                pair.matching->on_left_delete(id);
            } else {
                pair.matching->on_right_delete(id);
            }
            update_proxy_edge(pair);
        }
    }

    // Release perimeter contributions.
    auto pit = perimeter_contrib_.find(id);
    if (pit != perimeter_contrib_.end()) {
        for (const CellId& other : pit->second) {
            const CellPair key = storing < other ? CellPair{storing, other} : CellPair{other, storing};
            PairState* pair = find_pair(key);
            if (!pair) throw std::logic_error("missing pair for contribution");
            if (--pair->refcount == 0) destroy_pair(key);
        }
        perimeter_contrib_.erase(pit);
    }

    // Quadtree update last: removed cells shed their marks and edges.
    const DeltaReport delta = tree_.delete_shape(id);
    for (const CellId& removed : delta.removed) {
        auto rit = containment_by_cell_.find(removed);
        if (rit == containment_by_cell_.end()) continue;
        const std::set<ShapeId> markers = rit->second;
        for (ShapeId marker : markers) {
            auto& cells = containment_.at(marker);
            auto entry = cells.find(removed);
            if (entry->second) proxy_.remove_edge(*entry->second);
            cells.erase(entry);
        }
        containment_by_cell_.erase(rit);
    }

    ++updates_since_rebuild_;
    maybe_rebuild();
}

bool ConnectivityEngine::connected(ShapeId a, ShapeId b) const {
    const Shape* sa = tree_.shape(a);
    const Shape* sb = tree_.shape(b);
    if (!sa || !sb) throw std::invalid_argument("unknown shape id");
    if (a == b) return true;
    auto proxy_vertex = [this](const Shape& s) {
        CellId c = storing_cell(s, box_);
        CellId best = c;  // the storing cell is always marked
        CellId cur = c;
        while (cur.level < box_.levels) {
            cur = parent_cell(cur);
            if (tree_.contains_cell(cur) && tree_.mark_count(cur) > 0) best = cur;
        }
        auto it = vertex_ids_.find(best);
        if (it == vertex_ids_.end()) throw std::logic_error("marked cell without proxy vertex");
        return it->second;
    };
    return proxy_.connected(proxy_vertex(*sa), proxy_vertex(*sb));
}

std::vector<ConnectivityEngine::PairInfo> ConnectivityEngine::active_pairs() const {
    std::vector<PairInfo> out;
    out.reserve(pairs_.size());
    for (const auto& [key, pair] : pairs_) {
        out.push_back({pair.a, pair.b, pair.refcount, pair.matching.get()});
    }
    return out;
}

std::size_t ConnectivityEngine::matching_total() const {
    std::size_t total = 0;
    for (const auto& [key, pair] : pairs_) total += pair.matching->size();
    return total;
}

std::size_t ConnectivityEngine::z_total() const {
    std::size_t z = 0;
    for (const auto& [c, store] : stores_) z += store->symmetric_difference();
    return z;
}

void ConnectivityEngine::maybe_rebuild() {
    if (updates_since_rebuild_ < rebuild_threshold_) return;
    rebuild();
}

void ConnectivityEngine::rebuild() {
    for (auto& [c, store] : stores_) store->rebuild();
    updates_since_rebuild_ = 0;
    const double k = std::floor(double(tree_.size()) * std::log2(std::max(2.0, cfg_.psi)) /
                                (2.0 * std::pow(cfg_.psi, cfg_.dim - 1)));
    rebuild_threshold_ = std::size_t(std::max(1.0, k));
    ++rebuild_count_;
}

}  // namespace geospan
