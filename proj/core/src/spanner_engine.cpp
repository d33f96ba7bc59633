#include "geospan/spanner_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace geospan {

namespace {

std::string cell_str(const CellId& c, int dim) {
    std::ostringstream out;
    out << int(c.level) << ':' << c.ix[0];
    for (int k = 1; k < dim; ++k) out << ',' << c.ix[k];
    return out.str();
}

std::string eps_str(const EpsCellId& e, int dim) {
    std::ostringstream out;
    out << cell_str(e.cell, dim) << ':' << e.grid[0];
    for (int k = 1; k < dim; ++k) out << ',' << e.grid[k];
    return out.str();
}

std::uint64_t fnv_bytes(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

SpannerEngine::SpannerEngine(const SpannerConfig& cfg)
    : cfg_(cfg),
      box_(cfg.box ? *cfg.box : BoxSpec::bounding(cfg.psi, cfg.dim)),
      tree_(box_, TreeMode::Spanner, cfg.psi, cfg.eps_m()) {
    if (cfg_.eps_user <= 0 || cfg_.eps_user >= 1) {
        throw std::invalid_argument("eps_user must be in (0,1)");
    }
    rebuild_threshold_ = 1;
}

BranchStore& SpannerEngine::gamma_store(const EpsCellId& e) {
    auto it = gamma_stores_.find(e);
    if (it == gamma_stores_.end()) {
        it = gamma_stores_
                 .emplace(e, std::make_unique<BranchStore>(cfg_.index_kind(), cfg_.dim, cfg_.psi))
                 .first;
    }
    return *it->second;
}

BranchStore& SpannerEngine::pi_store(const EpsCellId& e) {
    auto it = pi_stores_.find(e);
    if (it == pi_stores_.end()) {
        it = pi_stores_
                 .emplace(e, std::make_unique<BranchStore>(cfg_.index_kind(), cfg_.dim, cfg_.psi))
                 .first;
    }
    return *it->second;
}

BranchLabel SpannerEngine::stable_label(std::map<EpsCellId, BranchLabel>& registry,
                                        const EpsCellId& key, std::set<BranchLabel>& used) {
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    std::uint64_t h = fnv_bytes(&key.cell, sizeof(key.cell), 1469598103934665603ull);
    h = fnv_bytes(key.grid.data(), sizeof(key.grid), h);
    auto label = BranchLabel(h & 0x7FFFFFFFFFFFFFFFull);
    while (label == kRootBranch || used.count(label)) ++label;
    registry.emplace(key, label);
    used.insert(label);
    return label;
}

std::string SpannerEngine::type1_prov(const CellPair& key) const {
    return "t1(" + cell_str(key.first, cfg_.dim) + "|" + cell_str(key.second, cfg_.dim) + ")";
}

std::string SpannerEngine::type2_prov(const EpsPair& key) const {
    return "t2(" + eps_str(key.first, cfg_.dim) + "|" + eps_str(key.second, cfg_.dim) + ")";
}

void SpannerEngine::add_provenance(ShapeId u, ShapeId v, bool type1, const std::string& prov,
                                   std::vector<EdgeEvent>& events) {
    const auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    GraphEdge& rec = graph_[key];
    if (rec.type1_refs + rec.type2_refs == 0) {
        rec.weight = edge_weight(*tree_.shape(key.first), *tree_.shape(key.second));
    }
    (type1 ? rec.type1_refs : rec.type2_refs) += 1;
    events.push_back({true, key.first, key.second, rec.weight, prov});
}

void SpannerEngine::remove_provenance(ShapeId u, ShapeId v, bool type1, const std::string& prov,
                                      std::vector<EdgeEvent>& events) {
    const auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    auto it = graph_.find(key);
    if (it == graph_.end()) throw std::logic_error("removing unknown spanner edge");
    GraphEdge& rec = it->second;
    (type1 ? rec.type1_refs : rec.type2_refs) -= 1;
    events.push_back({false, key.first, key.second, rec.weight, prov});
    if (rec.type1_refs + rec.type2_refs == 0) graph_.erase(it);
}

void SpannerEngine::mirror_instance_delta(const CellPair& key, const EdgeDelta& delta,
                                          std::vector<EdgeEvent>& events) {
    if (delta.empty()) return;
    const std::string prov = type1_prov(key);
    for (const auto& [u, v] : delta.removed) remove_provenance(u, v, true, prov, events);
    for (const auto& [u, v] : delta.added) add_provenance(u, v, true, prov, events);
}

void SpannerEngine::ensure_instance(const CellId& a, const CellId& b,
                                    std::vector<EdgeEvent>& events) {
    const CellPair key = a < b ? CellPair{a, b} : CellPair{b, a};
    if (instances_.count(key)) return;
    Instance inst;
    inst.spanner = std::make_unique<PointSpanner>(cfg_.eps_internal(), cfg_.dim);
    PointSpanner& sp = *inst.spanner;

    std::set<ShapeId> ids;
    if (const NodeRecord* rec = tree_.node(key.first)) {
        ids.insert(rec->pi.begin(), rec->pi.end());
    }
    if (const NodeRecord* rec = tree_.node(key.second)) {
        ids.insert(rec->pi.begin(), rec->pi.end());
    }
    instances_.emplace(key, std::move(inst));
    instances_by_cell_[key.first].insert(key);
    instances_by_cell_[key.second].insert(key);
    for (ShapeId id : ids) {
        mirror_instance_delta(key, sp.insert_point(id, tree_.shape(id)->center), events);
    }
}

SpannerEngine::PairState& SpannerEngine::ensure_pair(const EpsCellId& left,
                                                     const EpsCellId& right, ShapeId newcomer) {
    const EpsPair key{left, right};
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;

    PairState state;
    state.left = left;
    state.right = right;

    it = pairs_.emplace(key, std::move(state)).first;
    PairState& pair = it->second;
    pairs_by_left_[left].insert(key);
    pairs_by_right_[right].insert(key);

    PairViewOps ops;
    ops.geometry = [this](ShapeId id) -> const Shape& { return *tree_.shape(id); };

    if (cfg_.mode == SpaceMode::Small) {
        BranchStore* gs = &gamma_store(left);
        BranchStore* ps = &pi_store(right);
        pair.label_left = stable_label(gamma_labels_[left], right, gamma_labels_used_[left]);
        pair.label_right = stable_label(pi_labels_[right], left, pi_labels_used_[right]);
        gs->branch(pair.label_left);
        ps->branch(pair.label_right);
        const BranchLabel ll = pair.label_left;
        const BranchLabel lr = pair.label_right;
        ops.query_left = [gs, ll](const Shape& q, ShapeId excl) {
            return gs->query_min(ll, q, excl);
        };
        ops.query_right = [ps, lr](const Shape& q, ShapeId excl) {
            return ps->query_min(lr, q, excl);
        };
        ops.remove_left = [gs, ll](ShapeId id) { gs->branch_update(ll, id, UpdateOp::Delete); };
        ops.remove_right = [ps, lr](ShapeId id) { ps->branch_update(lr, id, UpdateOp::Delete); };
        ops.insert_left = [gs, ll](ShapeId id) { gs->branch_update(ll, id, UpdateOp::Insert); };
        ops.insert_right = [ps, lr](ShapeId id) { ps->branch_update(lr, id, UpdateOp::Insert); };
    } else {
        pair.view_left = make_index(cfg_.index_kind(), cfg_.dim, cfg_.psi);
        pair.view_right = make_index(cfg_.index_kind(), cfg_.dim, cfg_.psi);
        if (const NodeRecord* rec = tree_.node(left.cell)) {
            auto eit = rec->eps.find(left.grid);
            if (eit != rec->eps.end()) {
                for (ShapeId id : eit->second.gamma) {
                    if (id != newcomer) pair.view_left->insert(kRootBranch, *tree_.shape(id));
                }
            }
        }
        if (const NodeRecord* rec = tree_.node(right.cell)) {
            auto eit = rec->eps.find(right.grid);
            if (eit != rec->eps.end()) {
                for (ShapeId id : eit->second.pi) {
                    if (id != newcomer) pair.view_right->insert(kRootBranch, *tree_.shape(id));
                }
            }
        }
        IntersectionIndex* vl = pair.view_left.get();
        IntersectionIndex* vr = pair.view_right.get();
        ops.query_left = [vl](const Shape& q, ShapeId excl) {
            return vl->query_min(kRootBranch, q, excl);
        };
        ops.query_right = [vr](const Shape& q, ShapeId excl) {
            return vr->query_min(kRootBranch, q, excl);
        };
        ops.remove_left = [vl](ShapeId id) { vl->remove(kRootBranch, id); };
        ops.remove_right = [vr](ShapeId id) { vr->remove(kRootBranch, id); };
        ops.insert_left = [this, vl](ShapeId id) { vl->insert(kRootBranch, *tree_.shape(id)); };
        ops.insert_right = [this, vr](ShapeId id) { vr->insert(kRootBranch, *tree_.shape(id)); };
    }
    pair.matching = std::make_unique<PairMatching>(std::move(ops));
    return pair;
}

void SpannerEngine::update_pair_edge(PairState& pair, std::vector<EdgeEvent>& events) {
    const auto want = pair.matching->witness();
    if (want == pair.edge) return;
    const std::string prov = type2_prov({pair.left, pair.right});
    if (pair.edge) remove_provenance(pair.edge->first, pair.edge->second, false, prov, events);
    if (want) add_provenance(want->first, want->second, false, prov, events);
    pair.edge = want;
}

std::vector<EdgeEvent> SpannerEngine::insert(const Shape& s) {
    if (s.kind != cfg_.kind || s.dim != cfg_.dim) {
        throw std::invalid_argument("shape kind/dimension mismatch");
    }
    if (s.diameter() < 4.0 || s.diameter() > cfg_.psi) {
        throw std::invalid_argument("shape diameter outside [4, psi]");
    }
    const DeltaReport delta = tree_.insert_shape(s);
    std::vector<EdgeEvent> events;

    // Type-i: mirror the Euclidean spanners of every pair involving a
    // family cell. Instances that already exist receive the new point;
    // fresh pairs are built from the current populations (which include s).
    std::set<CellPair> existing;
    for (const CellId& c : delta.family) {
        auto rit = instances_by_cell_.find(c);
        if (rit != instances_by_cell_.end()) existing.insert(rit->second.begin(), rit->second.end());
    }
    for (const CellId& c : delta.family) {
        for (const CellId& partner : tree_.type1_partners(c)) {
            ensure_instance(c, partner, events);
        }
    }
    for (const CellPair& key : existing) {
        PointSpanner& sp = *instances_.at(key).spanner;
        mirror_instance_delta(key, sp.insert_point(s.id, s.center), events);
    }

    std::set<EpsPair> touched;

    // Type-ii step 3: s joins the subpopulation side of its storing cell's
    // eps-cell. Enumeration materializes newly eligible pairs; the newcomer
    // is then fed into every pair registered at this side, including pairs
    // whose other side is currently empty (their views must track s too).
    const EpsCellId e_gamma = eps_cell_of(box_, delta.storing, cfg_.eps_m(), s.center);
    if (cfg_.mode == SpaceMode::Small) gamma_store(e_gamma).root_update(s, UpdateOp::Insert);
    for (const auto& [i, cprime] : tree_.type2_partners(delta.storing)) {
        const NodeRecord* rec = tree_.node(cprime);
        for (const auto& [grid, erec] : rec->eps) {
            if (erec.pi.empty()) continue;
            ensure_pair(e_gamma, EpsCellId{cprime, grid}, s.id);
        }
    }
    {
        auto pit = pairs_by_left_.find(e_gamma);
        if (pit != pairs_by_left_.end()) {
            const std::set<EpsPair> keys = pit->second;
            for (const EpsPair& key : keys) {
                pairs_.at(key).matching->on_left_insert(s);
                touched.insert(key);
            }
        }
    }

    // Type-ii step 4: s joins the population side of every family cell's
    // eps-cell.
    for (const CellId& cprime : delta.family) {
        const EpsCellId e_pi = eps_cell_of(box_, cprime, cfg_.eps_m(), s.center);
        if (cfg_.mode == SpaceMode::Small) pi_store(e_pi).root_update(s, UpdateOp::Insert);
        for (const auto& [i, c] : tree_.type2_partners_inverse(cprime)) {
            const NodeRecord* rec = tree_.node(c);
            for (const auto& [grid, erec] : rec->eps) {
                if (erec.gamma.empty()) continue;
                ensure_pair(EpsCellId{c, grid}, e_pi, s.id);
            }
        }
        auto pit = pairs_by_right_.find(e_pi);
        if (pit == pairs_by_right_.end()) continue;
        const std::set<EpsPair> keys = pit->second;
        for (const EpsPair& key : keys) {
            pairs_.at(key).matching->on_right_insert(s);
            touched.insert(key);
        }
    }

    // Step 5: refresh the type-ii edges once all matchings settled.
    for (const EpsPair& key : touched) {
        update_pair_edge(pairs_.at(key), events);
    }

    ++updates_since_rebuild_;
    maybe_rebuild();
    log_events(events);
    return events;
}

std::vector<EdgeEvent> SpannerEngine::delete_shape(ShapeId id) {
    const Shape* found = tree_.shape(id);
    if (!found) throw std::invalid_argument("unknown shape id");
    const Shape s = *found;
    const std::vector<CellId> family = storing_family(s, box_);
    const CellId storing = family.front();

    std::vector<EdgeEvent> events;

    // Step 1: populations and counters; cells with zero relevance are
    // pruned now, matching/instance registries are keyed by value and
    // survive.
    tree_.delete_shape(id);

    // Step 2: drop the center from every Euclidean spanner it joined.
    std::set<CellPair> keys;
    for (const CellId& c : family) {
        auto rit = instances_by_cell_.find(c);
        if (rit != instances_by_cell_.end()) keys.insert(rit->second.begin(), rit->second.end());
    }
    for (const CellPair& key : keys) {
        auto iit = instances_.find(key);
        PointSpanner& sp = *iit->second.spanner;
        mirror_instance_delta(key, sp.delete_point(id), events);
        if (sp.size() == 0) {
            instances_by_cell_[key.first].erase(key);
            instances_by_cell_[key.second].erase(key);
            instances_.erase(iit);
        }
    }

    std::set<EpsPair> touched;

    // Step 3: the subpopulation side of the storing cell's eps-cell.
    const EpsCellId e_gamma = eps_cell_of(box_, storing, cfg_.eps_m(), s.center);
    if (cfg_.mode == SpaceMode::Small) gamma_store(e_gamma).root_update_delete(id);
    {
        auto pit = pairs_by_left_.find(e_gamma);
        if (pit != pairs_by_left_.end()) {
            const std::set<EpsPair> list = pit->second;
            for (const EpsPair& key : list) {
                pairs_.at(key).matching->on_left_delete(id);
                touched.insert(key);
            }
        }
    }

    // Step 4: the population side of every family cell's eps-cell.
    for (const CellId& cprime : family) {
        const EpsCellId e_pi = eps_cell_of(box_, cprime, cfg_.eps_m(), s.center);
        if (cfg_.mode == SpaceMode::Small) pi_store(e_pi).root_update_delete(id);
        auto pit = pairs_by_right_.find(e_pi);
        if (pit == pairs_by_right_.end()) continue;
        const std::set<EpsPair> list = pit->second;
        for (const EpsPair& key : list) {
            pairs_.at(key).matching->on_right_delete(id);
            touched.insert(key);
        }
    }

    // Step 5: refresh the type-ii edges once all matchings settled.
    for (const EpsPair& key : touched) {
        update_pair_edge(pairs_.at(key), events);
    }

    // Tear down pairs whose both sides emptied.
    for (const EpsPair& key : touched) {
        auto it = pairs_.find(key);
        if (it == pairs_.end()) continue;
        auto side_empty = [this](const EpsCellId& e, bool gamma_side) {
            const NodeRecord* rec = tree_.node(e.cell);
            if (!rec) return true;
            auto eit = rec->eps.find(e.grid);
            if (eit == rec->eps.end()) return true;
            return gamma_side ? eit->second.gamma.empty() : eit->second.pi.empty();
        };
        if (side_empty(key.first, true) && side_empty(key.second, false)) {
            if (it->second.matching->is_nonempty()) {
                throw std::logic_error("nonempty matching on empty pair sides");
            }
            pairs_by_left_[key.first].erase(key);
            pairs_by_right_[key.second].erase(key);
            pairs_.erase(it);
        }
    }

    ++updates_since_rebuild_;
    maybe_rebuild();
    log_events(events);
    return events;
}

void SpannerEngine::maybe_rebuild() {
    if (cfg_.mode != SpaceMode::Small) return;
    if (updates_since_rebuild_ < rebuild_threshold_) return;
    rebuild();
}

void SpannerEngine::rebuild() {
    for (auto& [e, store] : gamma_stores_) store->rebuild();
    for (auto& [e, store] : pi_stores_) store->rebuild();
    updates_since_rebuild_ = 0;
    const double k = std::floor(double(tree_.size()) / (2.0 * std::pow(cfg_.psi, cfg_.dim)));
    rebuild_threshold_ = std::size_t(std::max(1.0, k));
    ++rebuild_count_;
}

std::vector<std::tuple<ShapeId, ShapeId, double>> SpannerEngine::edges() const {
    std::vector<std::tuple<ShapeId, ShapeId, double>> out;
    out.reserve(graph_.size());
    for (const auto& [key, rec] : graph_) {
        out.emplace_back(key.first, key.second, rec.weight);
    }
    return out;
}

std::size_t SpannerEngine::matching_total() const {
    std::size_t total = 0;
    for (const auto& [key, pair] : pairs_) total += pair.matching->size();
    return total;
}

std::size_t SpannerEngine::z_total() const {
    std::size_t z = 0;
    for (const auto& [e, store] : gamma_stores_) z += store->symmetric_difference();
    for (const auto& [e, store] : pi_stores_) z += store->symmetric_difference();
    return z;
}

EngineStats SpannerEngine::stats() const {
    EngineStats st;
    st.n = tree_.size();
    st.edge_count = graph_.size();
    for (const auto& [key, rec] : graph_) {
        st.type1_count += std::size_t(rec.type1_refs > 0);
        st.type2_count += std::size_t(rec.type2_refs > 0);
    }
    st.matching_total = matching_total();
    st.z = cfg_.mode == SpaceMode::Small ? z_total() : 0;
    if (cfg_.mode == SpaceMode::Small) {
        for (const auto& [e, store] : gamma_stores_) {
            st.node_versions += store->index().store().version_entries();
        }
        for (const auto& [e, store] : pi_stores_) {
            st.node_versions += store->index().store().version_entries();
        }
    }
    st.rebuilds = rebuild_count_;
    st.active_pairs = pairs_.size();
    return st;
}

std::vector<SpannerEngine::PairInfo> SpannerEngine::active_pairs() const {
    std::vector<PairInfo> out;
    out.reserve(pairs_.size());
    for (const auto& [key, pair] : pairs_) {
        out.push_back({pair.left, pair.right, pair.matching.get()});
    }
    return out;
}

void SpannerEngine::log_events(const std::vector<EdgeEvent>& events) const {
    if (!log_) return;
    for (const EdgeEvent& e : events) {
        std::ostringstream line;
        line.precision(17);
        line << (e.added ? '+' : '-') << ' ' << e.u << ' ' << e.v << ' ' << e.weight << ' '
             << e.provenance << '\n';
        *log_ << line.str();
    }
}

}  // namespace geospan
