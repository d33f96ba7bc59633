#include "geospan/focused.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geospan {

FocusedDecomposition::FocusedDecomposition(const FocusedConfig& cfg)
    : cfg_(cfg), conn_(std::make_unique<DynGraph>()) {
    if (cfg.eps_user <= 0 || cfg.eps_user >= 1) {
        throw std::invalid_argument("eps_user must be in (0,1)");
    }
}

FocusedDecomposition::GridKey FocusedDecomposition::grid_key(const Vec& p) const {
    GridKey key{};
    for (int k = 0; k < cfg_.dim; ++k) {
        key[k] = std::int64_t(std::floor(p[k] / cfg_.psi));
    }
    return key;
}

// Focused spanners whose focal area meets the psi/2 box at `center`:
// center distance at most psi/2 per axis, i.e. within one grid cell.
std::vector<int> FocusedDecomposition::focal_hits(const Vec& center) const {
    std::vector<int> out;
    const GridKey base = grid_key(center);
    GridKey probe = base;
    std::array<int, kMaxDim> off{};
    for (int k = 0; k < cfg_.dim; ++k) off[k] = -1;
    while (true) {
        for (int k = 0; k < cfg_.dim; ++k) probe[k] = base[k] + off[k];
        auto it = focal_grid_.find(probe);
        if (it != focal_grid_.end()) {
            for (int gid : it->second) {
                const Focused& g = focused_[std::size_t(gid)];
                bool close = true;
                for (int k = 0; k < cfg_.dim; ++k) {
                    if (std::abs(g.center[k] - center[k]) > cfg_.psi / 2.0) close = false;
                }
                if (close) out.push_back(gid);
            }
        }
        int k = 0;
        for (; k < cfg_.dim; ++k) {
            if (++off[k] <= 1) break;
            off[k] = -1;
        }
        if (k == cfg_.dim) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> FocusedDecomposition::connection_neighbors(const Vec& center) const {
    std::vector<int> out;
    for (const Focused& g : focused_) {
        bool close = true;
        for (int k = 0; k < cfg_.dim; ++k) {
            if (std::abs(g.center[k] - center[k]) > 6.0 * cfg_.psi) close = false;
        }
        if (close) out.push_back(g.id);
    }
    return out;
}

int FocusedDecomposition::take_copy(Focused& g) {
    for (std::size_t k = 0; k < g.copy_engines.size(); ++k) {
        if (g.copy_engines[k] < 0) return int(k);
    }
    g.copy_engines.push_back(-1);
    copies_high_water_ = std::max(copies_high_water_, g.copy_engines.size());
    return int(g.copy_engines.size() - 1);
}

void FocusedDecomposition::engine_apply(const std::vector<EdgeEvent>& events) {
    for (const EdgeEvent& e : events) {
        const auto key = std::make_pair(e.u, e.v);
        if (e.added) {
            if (++union_refs_[key] == 1) {
                union_handles_[key] = conn_->add_edge(e.u, e.v);
            }
        } else {
            auto it = union_refs_.find(key);
            if (it == union_refs_.end()) throw std::logic_error("union refcount underflow");
            if (--it->second == 0) {
                conn_->remove_edge(union_handles_.at(key));
                union_handles_.erase(key);
                union_refs_.erase(it);
            }
        }
    }
}

void FocusedDecomposition::engine_insert(int engine_id, const Shape& s) {
    auto& memberships = shape_engines_[s.id];
    if (!memberships.insert(engine_id).second) return;
    engine_apply(engines_.at(engine_id).engine->insert(s));
}

void FocusedDecomposition::create_focused(const Shape& seed) {
    Focused g;
    g.id = int(focused_.size());
    g.center = seed.center;
    // Members: shapes whose psi/2 box meets the new focal area.
    const GridKey base = grid_key(seed.center);
    GridKey probe = base;
    std::array<int, kMaxDim> off{};
    for (int k = 0; k < cfg_.dim; ++k) off[k] = -1;
    while (true) {
        for (int k = 0; k < cfg_.dim; ++k) probe[k] = base[k] + off[k];
        auto it = shape_grid_.find(probe);
        if (it != shape_grid_.end()) {
            for (ShapeId id : it->second) {
                const Shape& t = shapes_.at(id);
                bool close = true;
                for (int k = 0; k < cfg_.dim; ++k) {
                    if (std::abs(t.center[k] - seed.center[k]) > cfg_.psi / 2.0) close = false;
                }
                if (close) g.members.insert(id);
            }
        }
        int k = 0;
        for (; k < cfg_.dim; ++k) {
            if (++off[k] <= 1) break;
            off[k] = -1;
        }
        if (k == cfg_.dim) break;
    }

    const std::vector<int> neighbors = connection_neighbors(seed.center);
    focused_.push_back(std::move(g));
    focal_grid_[base].push_back(focused_.back().id);
    const int gid = focused_.back().id;
    for (ShapeId id : focused_[std::size_t(gid)].members) shape_focused_[id].insert(gid);

    // One engine per connection neighbor (plus the self engine), boxed at
    // the smaller id's center.
    std::vector<int> partners = neighbors;
    partners.push_back(gid);
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    for (int other : partners) {
        Focused& g1 = focused_[std::size_t(std::min(gid, other))];
        Focused& g2 = focused_[std::size_t(std::max(gid, other))];
        const int c1 = take_copy(g1);
        const int c2 = g1.id == g2.id ? c1 : take_copy(g2);

        SpannerConfig cfg;
        cfg.eps_user = cfg_.eps_user;
        cfg.psi = cfg_.psi;
        cfg.dim = cfg_.dim;
        cfg.kind = cfg_.kind;
        cfg.mode = cfg_.mode;
        Vec origin = g1.center;
        for (int k = 0; k < cfg_.dim; ++k) origin[k] -= 9.0 * cfg_.psi;
        cfg.box = BoxSpec::with_unit_cells(origin, 18.0 * cfg_.psi, cfg_.dim);

        EngineRec rec;
        rec.id = next_engine_++;
        rec.g1 = g1.id;
        rec.g2 = g2.id;
        rec.engine = std::make_unique<SpannerEngine>(cfg);
        g1.copy_engines[std::size_t(c1)] = rec.id;
        if (g1.id != g2.id) g2.copy_engines[std::size_t(c2)] = rec.id;
        engines_of_[g1.id].push_back(rec.id);
        if (g1.id != g2.id) engines_of_[g2.id].push_back(rec.id);

        std::set<ShapeId> population = g1.members;
        population.insert(g2.members.begin(), g2.members.end());
        const int engine_id = rec.id;
        engines_.emplace(engine_id, std::move(rec));
        for (ShapeId id : population) engine_insert(engine_id, shapes_.at(id));
    }
}

void FocusedDecomposition::insert_core(const Shape& s) {
    shape_grid_[grid_key(s.center)].push_back(s.id);
    const std::vector<int> hits = focal_hits(s.center);
    if (hits.empty()) {
        create_focused(s);
        return;
    }
    for (int gid : hits) {
        Focused& g = focused_[std::size_t(gid)];
        g.members.insert(s.id);
        shape_focused_[s.id].insert(gid);
        for (int engine_id : engines_of_[gid]) engine_insert(engine_id, s);
    }
}

void FocusedDecomposition::insert(const Shape& s) {
    if (shapes_.count(s.id)) throw std::invalid_argument("duplicate shape id");
    if (s.diameter() < 4.0 || s.diameter() > cfg_.psi) {
        throw std::invalid_argument("shape diameter outside [4, psi]");
    }
    shapes_.emplace(s.id, s);
    insert_core(s);
    ++ops_since_rebuild_;
    maybe_global_rebuild();
}

void FocusedDecomposition::delete_shape(ShapeId id) {
    auto it = shapes_.find(id);
    if (it == shapes_.end()) throw std::invalid_argument("unknown shape id");
    const Shape s = it->second;

    auto eit = shape_engines_.find(id);
    if (eit != shape_engines_.end()) {
        for (int engine_id : eit->second) {
            engine_apply(engines_.at(engine_id).engine->delete_shape(id));
        }
        shape_engines_.erase(eit);
    }
    auto fit = shape_focused_.find(id);
    if (fit != shape_focused_.end()) {
        for (int gid : fit->second) focused_[std::size_t(gid)].members.erase(id);
        shape_focused_.erase(fit);
    }
    auto& bucket = shape_grid_.at(grid_key(s.center));
    bucket.erase(std::remove(bucket.begin(), bucket.end(), id), bucket.end());
    shapes_.erase(it);

    ++ops_since_rebuild_;
    maybe_global_rebuild();
}

bool FocusedDecomposition::rebuild_due() const {
    if (ops_since_rebuild_ == 0) return false;
    const std::size_t n = shapes_.size();
    if (ops_since_rebuild_ >= std::max<std::size_t>(1, size_at_rebuild_)) return true;
    if (n >= 2 * size_at_rebuild_) return true;
    if (2 * n <= size_at_rebuild_) return true;
    return false;
}

void FocusedDecomposition::maybe_global_rebuild() {
    if (!rebuild_due()) return;
    focused_.clear();
    engines_.clear();
    engines_of_.clear();
    shape_engines_.clear();
    shape_focused_.clear();
    focal_grid_.clear();
    shape_grid_.clear();
    union_refs_.clear();
    union_handles_.clear();
    conn_ = std::make_unique<DynGraph>();
    next_engine_ = 1;
    for (const auto& [id, s] : shapes_) insert_core(s);
    ops_since_rebuild_ = 0;
    size_at_rebuild_ = shapes_.size();
    ++rebuild_count_;
}

std::vector<std::tuple<ShapeId, ShapeId, double>> FocusedDecomposition::spanner_edges() const {
    std::vector<std::tuple<ShapeId, ShapeId, double>> out;
    out.reserve(union_refs_.size());
    for (const auto& [key, refs] : union_refs_) {
        out.emplace_back(key.first, key.second,
                         center_distance(shapes_.at(key.first).center,
                                         shapes_.at(key.second).center, cfg_.dim));
    }
    return out;
}

bool FocusedDecomposition::connected(ShapeId a, ShapeId b) const {
    if (!shapes_.count(a) || !shapes_.count(b)) throw std::invalid_argument("unknown shape id");
    return conn_->connected(a, b);
}

std::vector<int> FocusedDecomposition::memberships(ShapeId id) const {
    auto it = shape_focused_.find(id);
    if (it == shape_focused_.end()) return {};
    return std::vector<int>(it->second.begin(), it->second.end());
}

FocusedStats FocusedDecomposition::stats() const {
    FocusedStats st;
    st.shapes = shapes_.size();
    st.focused_count = focused_.size();
    st.engine_count = engines_.size();
    st.copies_high_water = copies_high_water_;
    st.rebuild_count = rebuild_count_;
    st.last_rebuild_size = size_at_rebuild_;
    return st;
}

}  // namespace geospan
