#include "geospan/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geospan {

QuadTree::QuadTree(const BoxSpec& box, TreeMode mode, double psi, int eps_m)
    : box_(box), mode_(mode), psi_(psi), eps_m_(std::max(1, eps_m)) {
    max_i_ = std::max(1, int(std::ceil(std::log2(std::max(2.0, psi)))));
    levels_.resize(std::size_t(box_.levels) + 1);
}

const NodeRecord* QuadTree::node(const CellId& c) const {
    auto it = nodes_.find(c);
    return it == nodes_.end() ? nullptr : &it->second;
}

NodeRecord* QuadTree::node_mut(const CellId& c) {
    auto it = nodes_.find(c);
    return it == nodes_.end() ? nullptr : &it->second;
}

const Shape* QuadTree::shape(ShapeId id) const {
    auto it = shapes_.find(id);
    return it == shapes_.end() ? nullptr : &it->second;
}

const std::set<CellId>& QuadTree::cells_at_level(int level) const {
    static const std::set<CellId> empty;
    if (level < 0 || level > box_.levels) return empty;
    return levels_[std::size_t(level)];
}

void QuadTree::ensure_cell(const CellId& c, DeltaReport& delta) {
    if (nodes_.count(c)) return;
    if (c.level < box_.levels) {
        ensure_cell(locate_cell(box_, c.level + 1, cell_center(box_, c)), delta);
    }
    nodes_.emplace(c, NodeRecord{});
    levels_[std::size_t(c.level)].insert(c);
    delta.created.push_back(c);
    if (c.level < box_.levels) {
        nodes_[parent_cell(c)].child_count += 1;
    }
}

void QuadTree::try_prune(CellId c, DeltaReport& delta) {
    while (true) {
        auto it = nodes_.find(c);
        if (it == nodes_.end()) return;
        const NodeRecord& rec = it->second;
        const bool keep = rec.child_count > 0 || !rec.pi.empty() || rec.subtree_storing > 0;
        if (keep) return;
        nodes_.erase(it);
        levels_[std::size_t(c.level)].erase(c);
        delta.removed.push_back(c);
        if (c.level >= box_.levels) return;
        const CellId up = parent_cell(c);
        nodes_[up].child_count -= 1;
        c = up;
    }
}

void QuadTree::adjust_subtree_storing(const CellId& storing, int delta) {
    CellId c = storing;
    while (true) {
        auto it = nodes_.find(c);
        if (it != nodes_.end()) it->second.subtree_storing += delta;
        if (c.level >= box_.levels) break;
        c = parent_cell(c);
    }
}

DeltaReport QuadTree::insert_shape(const Shape& s) {
    if (shapes_.count(s.id)) throw std::invalid_argument("duplicate shape id");
    if (s.dim != box_.dim) throw std::invalid_argument("shape dimension mismatch");

    DeltaReport delta;
    delta.storing = storing_cell(s, box_);
    if (mode_ == TreeMode::Spanner) {
        delta.family = storing_family(s, box_);
    } else {
        delta.family = {delta.storing};
    }

    shapes_.emplace(s.id, s);
    for (auto f = delta.family.rbegin(); f != delta.family.rend(); ++f) {
        ensure_cell(*f, delta);
    }
    std::reverse(delta.created.begin(), delta.created.end());

    const bool garrison_was_empty = nodes_[delta.storing].gamma.empty();
    nodes_[delta.storing].gamma.insert(s.id);
    if (garrison_was_empty) adjust_subtree_storing(delta.storing, +1);

    if (mode_ == TreeMode::Spanner) {
        for (const CellId& c : delta.family) {
            NodeRecord& rec = nodes_[c];
            rec.pi.insert(s.id);
            const EpsCellId e = eps_cell_of(box_, c, eps_m_, s.center);
            EpsRecord& er = rec.eps[e.grid];
            er.pi.insert(s.id);
            if (c == delta.storing) er.gamma.insert(s.id);
            delta.touched_eps.push_back(e);
        }
    }
    return delta;
}

DeltaReport QuadTree::delete_shape(ShapeId id) {
    auto sit = shapes_.find(id);
    if (sit == shapes_.end()) throw std::invalid_argument("unknown shape id");
    const Shape s = sit->second;

    DeltaReport delta;
    delta.storing = storing_cell(s, box_);
    if (mode_ == TreeMode::Spanner) {
        delta.family = storing_family(s, box_);
    } else {
        delta.family = {delta.storing};
    }

    if (mode_ == TreeMode::Spanner) {
        for (const CellId& c : delta.family) {
            NodeRecord& rec = nodes_[c];
            rec.pi.erase(id);
            const EpsCellId e = eps_cell_of(box_, c, eps_m_, s.center);
            auto eit = rec.eps.find(e.grid);
            if (eit != rec.eps.end()) {
                eit->second.pi.erase(id);
                if (c == delta.storing) eit->second.gamma.erase(id);
                if (eit->second.pi.empty() && eit->second.gamma.empty()) rec.eps.erase(eit);
            }
            delta.touched_eps.push_back(e);
        }
    }

    NodeRecord& srec = nodes_[delta.storing];
    srec.gamma.erase(id);
    if (srec.gamma.empty()) adjust_subtree_storing(delta.storing, -1);

    shapes_.erase(sit);
    for (const CellId& c : delta.family) {
        try_prune(c, delta);
    }
    return delta;
}

std::vector<CellId> QuadTree::type1_partners(const CellId& c) const {
    std::vector<CellId> out;
    const std::int32_t cells = std::int32_t(std::int64_t(1) << (box_.levels - c.level));
    std::array<std::int32_t, kMaxDim> off{};
    // Equal-size cells contained in 3*c are exactly the index neighbors.
    for (int k = 0; k < box_.dim; ++k) off[k] = -1;
    while (true) {
        CellId cand = c;
        bool ok = true;
        for (int k = 0; k < box_.dim; ++k) {
            cand.ix[k] = c.ix[k] + off[k];
            if (cand.ix[k] < 0 || cand.ix[k] >= cells) ok = false;
        }
        if (ok && nodes_.count(cand)) out.push_back(cand);
        int k = 0;
        for (; k < box_.dim; ++k) {
            if (++off[k] <= 1) break;
            off[k] = -1;
        }
        if (k == box_.dim) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, CellId>> QuadTree::type2_partners(const CellId& c) const {
    std::vector<std::pair<int, CellId>> out;
    for (int i = 1; i <= max_i_; ++i) {
        const int level = c.level + (i - 1);
        if (level > box_.levels) break;
        const Region reg = neighborhood(box_, c, (1 << (i + 5)) + 1);
        for (const CellId& cand : levels_[std::size_t(level)]) {
            if (region_intersects_cell(box_, reg, cand)) out.emplace_back(i, cand);
        }
    }
    return out;
}

std::vector<std::pair<int, CellId>> QuadTree::type2_partners_inverse(const CellId& c) const {
    std::vector<std::pair<int, CellId>> out;
    const Region cr = cell_region(box_, c);
    for (int i = 1; i <= max_i_; ++i) {
        const int level = c.level - (i - 1);
        if (level < 0) break;
        for (const CellId& cand : levels_[std::size_t(level)]) {
            const Region reg = neighborhood(box_, cand, (1 << (i + 5)) + 1);
            if (region_intersects_region(reg, cr)) out.emplace_back(i, cand);
        }
    }
    return out;
}

void QuadTree::adjust_mark(const CellId& c, long delta) {
    auto it = nodes_.find(c);
    if (it == nodes_.end()) throw std::logic_error("mark on absent cell");
    it->second.mark_count += delta;
    if (it->second.mark_count < 0) throw std::logic_error("negative mark count");
}

long QuadTree::mark_count(const CellId& c) const {
    auto it = nodes_.find(c);
    return it == nodes_.end() ? 0 : it->second.mark_count;
}

std::string QuadTree::debug_dump() const {
    std::ostringstream out;
    for (int level = box_.levels; level >= 0; --level) {
        for (const CellId& c : levels_[std::size_t(level)]) {
            const NodeRecord& rec = nodes_.at(c);
            out << int(c.level);
            for (int k = 0; k < box_.dim; ++k) out << ' ' << c.ix[k];
            out << ' ' << rec.pi.size() << ' ' << rec.gamma.size() << ' ' << rec.mark_count << '\n';
        }
    }
    return out.str();
}

}  // namespace geospan
