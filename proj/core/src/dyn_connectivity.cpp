#include "geospan/dyn_connectivity.hpp"

#include <cassert>
#include <stdexcept>

namespace geospan {

namespace {
constexpr std::uint8_t kHasNonTree = 1;
constexpr std::uint8_t kHasTreeHere = 2;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace

struct DynGraph::Node {
    Node* left = nullptr;
    Node* right = nullptr;
    Node* parent = nullptr;
    std::uint64_t pri = 0;
    int count = 1;  // items in subtree
    VertexId a = 0;
    VertexId b = 0;
    int self_count = 0;  // self items (a == b) in subtree
    std::uint8_t flags = 0;
    std::uint8_t subtree_flags = 0;

    bool is_self() const { return a == b; }
};

// Euler tour forest over treaps: each tree's tour is a sequence of arc
// items, with one self item (v,v) per vertex carrying the level flags.
class DynGraph::Ett {
public:
    ~Ett() {
        std::set<Node*> roots;
        for (auto& [key, node] : selves_) roots.insert(root_of(node));
        for (Node* root : roots) free_rec(root);
    }

    void ensure_vertex(VertexId v) {
        if (!selves_.count(v)) selves_[v] = make(v, v);
    }
    bool has_vertex(VertexId v) const { return selves_.count(v) != 0; }

    bool connected(VertexId u, VertexId v) const {
        auto iu = selves_.find(u);
        auto iv = selves_.find(v);
        if (iu == selves_.end() || iv == selves_.end()) return false;
        return root_of(iu->second) == root_of(iv->second);
    }

    void link(VertexId u, VertexId v) {
        Node* tu = reroot(u);
        Node* tv = reroot(v);
        Node* arc_uv = make(u, v);
        Node* arc_vu = make(v, u);
        arcs_[{u, v}] = arc_uv;
        arcs_[{v, u}] = arc_vu;
        merge(merge(merge(tu, arc_uv), tv), arc_vu);
    }

    void cut(VertexId u, VertexId v) {
        Node* arc1 = arcs_.at({u, v});
        Node* arc2 = arcs_.at({v, u});
        arcs_.erase({u, v});
        arcs_.erase({v, u});
        int i1 = index_of(arc1);
        int i2 = index_of(arc2);
        if (i1 > i2) {
            std::swap(arc1, arc2);
            std::swap(i1, i2);
        }
        Node* root = root_of(arc1);
        auto [a, rest1] = split(root, i1);
        auto [lo, rest2] = split(rest1, 1);
        auto [mid, rest3] = split(rest2, i2 - i1 - 1);
        auto [hi, tail] = split(rest3, 1);
        assert(lo == arc1 && hi == arc2);
        delete arc1;
        delete arc2;
        merge(a, tail);
        (void)mid;
    }

    int component_size(VertexId v) const { return root_of(selves_.at(v))->self_count; }

    void set_flag(VertexId v, std::uint8_t bit, bool on) {
        Node* n = selves_.at(v);
        const std::uint8_t before = n->flags;
        if (on) {
            n->flags |= bit;
        } else {
            n->flags &= std::uint8_t(~bit);
        }
        if (n->flags != before) {
            for (Node* cur = n; cur; cur = cur->parent) pull_flags(cur);
        }
    }

    // Any vertex in v's component whose flags contain `bit`, or -1.
    VertexId find_flagged(VertexId v, std::uint8_t bit) const {
        Node* cur = root_of(selves_.at(v));
        if (!(cur->subtree_flags & bit)) return -1;
        while (true) {
            if (cur->flags & bit) return cur->a;
            if (cur->left && (cur->left->subtree_flags & bit)) {
                cur = cur->left;
            } else {
                cur = cur->right;
            }
        }
    }

private:
    static int count(const Node* n) { return n ? n->count : 0; }

    static void pull(Node* n) {
        n->count = 1 + count(n->left) + count(n->right);
        n->self_count = (n->is_self() ? 1 : 0) + (n->left ? n->left->self_count : 0) +
                        (n->right ? n->right->self_count : 0);
        n->subtree_flags = n->flags;
        if (n->left) n->subtree_flags |= n->left->subtree_flags;
        if (n->right) n->subtree_flags |= n->right->subtree_flags;
        if (n->left) n->left->parent = n;
        if (n->right) n->right->parent = n;
    }

    static void pull_flags(Node* n) {
        n->subtree_flags = n->flags;
        if (n->left) n->subtree_flags |= n->left->subtree_flags;
        if (n->right) n->subtree_flags |= n->right->subtree_flags;
    }

    Node* make(VertexId a, VertexId b) {
        Node* n = new Node();
        n->pri = mix64(seed_++);
        n->a = a;
        n->b = b;
        n->self_count = a == b ? 1 : 0;
        return n;
    }

    static Node* root_of(Node* n) {
        while (n->parent) n = n->parent;
        return n;
    }

    static int index_of(Node* n) {
        int idx = count(n->left);
        for (Node* cur = n; cur->parent; cur = cur->parent) {
            if (cur->parent->right == cur) idx += count(cur->parent->left) + 1;
        }
        return idx;
    }

    static Node* merge(Node* a, Node* b) {
        if (!a) {
            if (b) b->parent = nullptr;
            return b;
        }
        if (!b) {
            a->parent = nullptr;
            return a;
        }
        a->parent = b->parent = nullptr;
        if (a->pri > b->pri) {
            a->right = merge(a->right, b);
            pull(a);
            a->parent = nullptr;
            return a;
        }
        b->left = merge(a, b->left);
        pull(b);
        b->parent = nullptr;
        return b;
    }

    // First k items in `first`, rest in `second`.
    static std::pair<Node*, Node*> split(Node* n, int k) {
        if (!n) return {nullptr, nullptr};
        n->parent = nullptr;
        if (count(n->left) >= k) {
            auto [a, b] = split(n->left, k);
            n->left = b;
            pull(n);
            n->parent = nullptr;
            if (a) a->parent = nullptr;
            return {a, n};
        }
        auto [a, b] = split(n->right, k - count(n->left) - 1);
        n->right = a;
        pull(n);
        n->parent = nullptr;
        if (b) b->parent = nullptr;
        return {n, b};
    }

    // Rotate the tour so v's self item comes first; returns the tree root.
    Node* reroot(VertexId v) {
        Node* self = selves_.at(v);
        Node* root = root_of(self);
        const int i = index_of(self);
        if (i == 0) return root;
        auto [a, b] = split(root, i);
        return merge(b, a);
    }

    void free_rec(Node* n) {
        if (!n) return;
        free_rec(n->left);
        free_rec(n->right);
        delete n;
    }

    std::map<VertexId, Node*> selves_;
    std::map<std::pair<VertexId, VertexId>, Node*> arcs_;
    std::uint64_t seed_ = 0x9e3779b97f4a7c15ull;
};

DynGraph::DynGraph() = default;
DynGraph::~DynGraph() = default;

DynGraph::Ett& DynGraph::forest(int level) const {
    while (int(forests_.size()) <= level) forests_.push_back(std::make_unique<Ett>());
    return *forests_[std::size_t(level)];
}

DynGraph::VertexRec& DynGraph::vertex(VertexId v) {
    VertexRec& rec = vertices_[v];
    return rec;
}

void DynGraph::set_vertex_flags(VertexId v, int level) {
    VertexRec& rec = vertices_.at(v);
    Ett& f = forest(level);
    f.ensure_vertex(v);
    const bool has_nontree =
        int(rec.nontree.size()) > level && !rec.nontree[std::size_t(level)].empty();
    const bool has_tree =
        int(rec.tree_here.size()) > level && !rec.tree_here[std::size_t(level)].empty();
    f.set_flag(v, kHasNonTree, has_nontree);
    f.set_flag(v, kHasTreeHere, has_tree);
}

DynGraph::EdgeHandle DynGraph::add_edge(VertexId u, VertexId v) {
    const EdgeHandle h = next_handle_++;
    EdgeRec rec{u, v, 0, false, u == v};
    if (rec.loop) {
        edges_.emplace(h, rec);
        return h;
    }
    vertex(u);
    vertex(v);
    Ett& f0 = forest(0);
    f0.ensure_vertex(u);
    f0.ensure_vertex(v);
    if (!f0.connected(u, v)) {
        rec.tree = true;
        edges_.emplace(h, rec);
        add_tree_edge(h, 0);
    } else {
        edges_.emplace(h, rec);
        auto grow = [this](VertexRec& r) {
            if (r.nontree.empty()) r.nontree.resize(1);
        };
        grow(vertices_.at(u));
        grow(vertices_.at(v));
        vertices_.at(u).nontree[0].insert(h);
        vertices_.at(v).nontree[0].insert(h);
        set_vertex_flags(u, 0);
        set_vertex_flags(v, 0);
    }
    return h;
}

void DynGraph::add_tree_edge(EdgeHandle h, int level) {
    EdgeRec& rec = edges_.at(h);
    rec.tree = true;
    rec.level = level;
    for (int i = 0; i <= level; ++i) {
        Ett& f = forest(i);
        f.ensure_vertex(rec.u);
        f.ensure_vertex(rec.v);
        f.link(rec.u, rec.v);
    }
    auto grow = [level](VertexRec& r) {
        if (int(r.tree_here.size()) <= level) r.tree_here.resize(std::size_t(level) + 1);
    };
    grow(vertices_.at(rec.u));
    grow(vertices_.at(rec.v));
    vertices_.at(rec.u).tree_here[std::size_t(level)].insert(h);
    vertices_.at(rec.v).tree_here[std::size_t(level)].insert(h);
    set_vertex_flags(rec.u, level);
    set_vertex_flags(rec.v, level);
}

void DynGraph::remove_edge(EdgeHandle h) {
    auto it = edges_.find(h);
    if (it == edges_.end()) throw std::invalid_argument("unknown edge handle");
    const EdgeRec rec = it->second;
    edges_.erase(it);
    if (rec.loop) return;

    if (!rec.tree) {
        vertices_.at(rec.u).nontree[std::size_t(rec.level)].erase(h);
        vertices_.at(rec.v).nontree[std::size_t(rec.level)].erase(h);
        set_vertex_flags(rec.u, rec.level);
        set_vertex_flags(rec.v, rec.level);
        return;
    }

    vertices_.at(rec.u).tree_here[std::size_t(rec.level)].erase(h);
    vertices_.at(rec.v).tree_here[std::size_t(rec.level)].erase(h);
    set_vertex_flags(rec.u, rec.level);
    set_vertex_flags(rec.v, rec.level);
    for (int i = rec.level; i >= 0; --i) forest(i).cut(rec.u, rec.v);
    for (int i = rec.level; i >= 0; --i) {
        if (replace(rec.u, rec.v, i)) break;
    }
}

bool DynGraph::replace(VertexId u, VertexId v, int level) {
    Ett& f = forest(level);
    VertexId small_side = u;
    if (f.component_size(u) > f.component_size(v)) small_side = v;

    // Promote the smaller component's level-`level` tree edges.
    while (true) {
        const VertexId x = f.find_flagged(small_side, kHasTreeHere);
        if (x < 0) break;
        auto& here = vertices_.at(x).tree_here[std::size_t(level)];
        while (!here.empty()) {
            const EdgeHandle h = *here.begin();
            EdgeRec& rec = edges_.at(h);
            vertices_.at(rec.u).tree_here[std::size_t(level)].erase(h);
            vertices_.at(rec.v).tree_here[std::size_t(level)].erase(h);
            set_vertex_flags(rec.u, level);
            set_vertex_flags(rec.v, level);
            rec.level = level + 1;
            Ett& up = forest(level + 1);
            up.ensure_vertex(rec.u);
            up.ensure_vertex(rec.v);
            up.link(rec.u, rec.v);
            auto grow = [&](VertexRec& r) {
                if (int(r.tree_here.size()) <= level + 1) {
                    r.tree_here.resize(std::size_t(level) + 2);
                }
            };
            grow(vertices_.at(rec.u));
            grow(vertices_.at(rec.v));
            vertices_.at(rec.u).tree_here[std::size_t(level) + 1].insert(h);
            vertices_.at(rec.v).tree_here[std::size_t(level) + 1].insert(h);
            set_vertex_flags(rec.u, level + 1);
            set_vertex_flags(rec.v, level + 1);
        }
    }

    // Scan level-`level` non-tree edges incident to the smaller component.
    while (true) {
        const VertexId x = f.find_flagged(small_side, kHasNonTree);
        if (x < 0) break;
        auto& incident = vertices_.at(x).nontree[std::size_t(level)];
        while (!incident.empty()) {
            const EdgeHandle h = *incident.begin();
            EdgeRec& rec = edges_.at(h);
            const VertexId y = rec.u == x ? rec.v : rec.u;
            vertices_.at(rec.u).nontree[std::size_t(level)].erase(h);
            vertices_.at(rec.v).nontree[std::size_t(level)].erase(h);
            set_vertex_flags(rec.u, level);
            set_vertex_flags(rec.v, level);
            if (f.connected(x, y)) {
                // Internal to the smaller side: promote.
                rec.level = level + 1;
                auto grow = [&](VertexRec& r) {
                    if (int(r.nontree.size()) <= level + 1) {
                        r.nontree.resize(std::size_t(level) + 2);
                    }
                };
                grow(vertices_.at(rec.u));
                grow(vertices_.at(rec.v));
                vertices_.at(rec.u).nontree[std::size_t(level) + 1].insert(h);
                vertices_.at(rec.v).nontree[std::size_t(level) + 1].insert(h);
                forest(level + 1).ensure_vertex(rec.u);
                forest(level + 1).ensure_vertex(rec.v);
                set_vertex_flags(rec.u, level + 1);
                set_vertex_flags(rec.v, level + 1);
            } else {
                // Reconnects the split: becomes a tree edge at this level.
                add_tree_edge(h, level);
                return true;
            }
        }
    }
    return false;
}

bool DynGraph::connected(VertexId u, VertexId v) const {
    if (u == v) return true;
    if (forests_.empty()) return false;
    return forest(0).connected(u, v);
}

int DynGraph::max_edge_level() const {
    int best = 0;
    for (const auto& [h, rec] : edges_) best = std::max(best, rec.level);
    return best;
}

}  // namespace geospan
