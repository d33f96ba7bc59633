#ifndef GEOSPAN_DYN_CONNECTIVITY_HPP
#define GEOSPAN_DYN_CONNECTIVITY_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <vector>

namespace geospan {

// Fully dynamic connectivity over an abstract multigraph: the
// Holm-de Lichtenberg-Thorup hierarchy with Euler tour trees over treaps.
// Edges carry levels; forest F_i spans the subgraph of level >= i edges;
// deleting a tree edge searches the smaller side for a replacement,
// promoting scanned edges one level. Parallel edges are kept (handles
// distinguish them) and self-loops are tolerated and ignored.
class DynGraph {
public:
    using VertexId = std::int64_t;
    using EdgeHandle = std::int64_t;

    DynGraph();
    ~DynGraph();
    DynGraph(const DynGraph&) = delete;
    DynGraph& operator=(const DynGraph&) = delete;

    EdgeHandle add_edge(VertexId u, VertexId v);
    void remove_edge(EdgeHandle handle);
    bool connected(VertexId u, VertexId v) const;

    std::size_t edge_count() const { return edges_.size(); }
    int max_edge_level() const;

private:
    struct Node;
    class Ett;

    struct EdgeRec {
        VertexId u;
        VertexId v;
        int level = 0;
        bool tree = false;
        bool loop = false;
    };

    struct VertexRec {
        // Per level: handles of non-tree edges and of tree edges whose
        // level is exactly that level.
        std::vector<std::set<EdgeHandle>> nontree;
        std::vector<std::set<EdgeHandle>> tree_here;
    };

    Ett& forest(int level) const;
    VertexRec& vertex(VertexId v);
    void set_vertex_flags(VertexId v, int level);
    void add_tree_edge(EdgeHandle h, int level);
    bool replace(VertexId u, VertexId v, int level);

    mutable std::vector<std::unique_ptr<Ett>> forests_;
    std::map<EdgeHandle, EdgeRec> edges_;
    std::map<VertexId, VertexRec> vertices_;
    EdgeHandle next_handle_ = 1;
};

}  // namespace geospan

#endif
