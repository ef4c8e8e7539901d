#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treespec/errors.hpp"

namespace treespec {

enum class VertexCondition { Neumann, Dirichlet };

struct Edge {
    int id;  // torus coordinate index of this edge (z_id)
    int src;
    int dst;
};

// A metric tree, combinatorially: oriented edges with ids (the ids index the
// torus coordinates) and a Neumann/Dirichlet condition per vertex. Dirichlet
// vertices belong to the combinatorial graph but not to the underlying space:
// the space is the edge set glued along Neumann vertices.
//
// Immutable after construction. Top-level graphs have edge ids 1..n; graphs
// produced by component_graph keep the ids of their parent (a subset of 1..N
// for the ambient variable count N).
class TreeGraph {
public:
    TreeGraph(std::vector<Edge> edges, std::map<int, VertexCondition> vertices, bool require_contiguous_ids)
        : edges_(std::move(edges)), vertices_(std::move(vertices)) {
        validate(require_contiguous_ids);
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
        for (const Edge& e : edges_) {
            incident_[e.src].push_back(e.id);
            incident_[e.dst].push_back(e.id);
        }
        for (auto& [v, ids] : incident_) std::sort(ids.begin(), ids.end());
    }

    int n() const { return int(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    const Edge& edge(int id) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                                   [](const Edge& e, int key) { return e.id < key; });
        if (it == edges_.end() || it->id != id) fail(Errc::UnknownEdge, "edge " + std::to_string(id));
        return *it;
    }

    bool has_edge(int id) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                                   [](const Edge& e, int key) { return e.id < key; });
        return it != edges_.end() && it->id == id;
    }

    bool has_vertex(int v) const { return vertices_.count(v) != 0; }

    VertexCondition condition(int v) const {
        auto it = vertices_.find(v);
        if (it == vertices_.end()) fail(Errc::UnknownVertex, "vertex " + std::to_string(v));
        return it->second;
    }

    bool is_dirichlet(int v) const { return condition(v) == VertexCondition::Dirichlet; }

    // vertex id -> condition, ascending by id
    const std::map<int, VertexCondition>& vertices() const { return vertices_; }

    std::vector<int> vertex_ids() const {
        std::vector<int> ids;
        ids.reserve(vertices_.size());
        for (auto& [v, c] : vertices_) ids.push_back(v);
        return ids;
    }

    std::vector<int> neumann_vertices() const {
        std::vector<int> ids;
        for (auto& [v, c] : vertices_)
            if (c == VertexCondition::Neumann) ids.push_back(v);
        return ids;
    }

    // incident edge ids, ascending
    const std::vector<int>& incident(int v) const {
        auto it = incident_.find(v);
        if (it == incident_.end()) fail(Errc::UnknownVertex, "vertex " + std::to_string(v));
        return it->second;
    }

    int degree(int v) const { return int(incident(v).size()); }

    bool is_endpoint(int v) const { return degree(v) == 1; }

    // the other endpoint of edge `id` as seen from v
    int opposite(int id, int v) const {
        const Edge& e = edge(id);
        return e.src == v ? e.dst : e.src;
    }

    bool operator==(const TreeGraph& o) const {
        if (vertices_ != o.vertices_ || edges_.size() != o.edges_.size()) return false;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].id != o.edges_[i].id || edges_[i].src != o.edges_[i].src || edges_[i].dst != o.edges_[i].dst)
                return false;
        return true;
    }

private:
    void validate(bool require_contiguous_ids) {
        if (edges_.empty()) fail(Errc::InvalidComponent, "graph has no edges");
        std::set<int> ids;
        std::set<std::pair<int, int>> undirected;
        for (const Edge& e : edges_) {
            if (e.id < 1) fail(Errc::UnknownEdge, "edge id " + std::to_string(e.id) + " must be positive");
            if (!ids.insert(e.id).second) fail(Errc::DuplicateEdge, "edge id " + std::to_string(e.id) + " repeated");
            if (e.src == e.dst) fail(Errc::SelfLoop, "edge " + std::to_string(e.id) + " at vertex " + std::to_string(e.src));
            auto key = std::minmax(e.src, e.dst);
            if (!undirected.insert({key.first, key.second}).second)
                fail(Errc::DuplicateEdge, "parallel edge " + std::to_string(e.id) + " between " +
                                              std::to_string(key.first) + " and " + std::to_string(key.second));
            if (!vertices_.count(e.src)) vertices_.emplace(e.src, VertexCondition::Neumann);
            if (!vertices_.count(e.dst)) vertices_.emplace(e.dst, VertexCondition::Neumann);
        }
        if (require_contiguous_ids && (*ids.begin() != 1 || *ids.rbegin() != int(ids.size())))
            fail(Errc::UnknownEdge, "edge ids must be exactly 1.." + std::to_string(ids.size()));
        for (auto& [v, c] : vertices_)
            if (!incident_count(v)) fail(Errc::UnknownVertex, "isolated vertex " + std::to_string(v));
        // connected + |V| = n+1  <=>  tree
        if (vertices_.size() > edges_.size() + 1) fail(Errc::Disconnected, "graph is disconnected");
        std::map<int, std::vector<int>> adj;
        for (const Edge& e : edges_) {
            adj[e.src].push_back(e.dst);
            adj[e.dst].push_back(e.src);
        }
        std::set<int> seen;
        std::vector<int> stack{edges_.front().src};
        seen.insert(stack.back());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (seen.insert(w).second) stack.push_back(w);
        }
        if (seen.size() != vertices_.size()) fail(Errc::Disconnected, "graph is disconnected");
        if (vertices_.size() != edges_.size() + 1) fail(Errc::CycleDetected, "graph contains a cycle");
    }

    bool incident_count(int v) const {
        for (const Edge& e : edges_)
            if (e.src == v || e.dst == v) return true;
        return false;
    }

    std::vector<Edge> edges_;
    std::map<int, VertexCondition> vertices_;
    std::map<int, std::vector<int>> incident_;
};

inline TreeGraph build_graph(const std::vector<std::pair<int, int>>& edge_list, const std::set<int>& dirichlet) {
    if (edge_list.empty()) fail(Errc::InvalidComponent, "edge list is empty");
    std::vector<Edge> edges;
    edges.reserve(edge_list.size());
    int id = 1;
    for (auto& [s, t] : edge_list) edges.push_back({id++, s, t});
    std::map<int, VertexCondition> vertices;
    for (const Edge& e : edges) {
        vertices.emplace(e.src, VertexCondition::Neumann);
        vertices.emplace(e.dst, VertexCondition::Neumann);
    }
    for (int v : dirichlet) {
        auto it = vertices.find(v);
        if (it == vertices.end()) fail(Errc::UnknownVertex, "dirichlet vertex " + std::to_string(v));
        it->second = VertexCondition::Dirichlet;
    }
    return TreeGraph(std::move(edges), std::move(vertices), /*require_contiguous_ids=*/true);
}

// Connected components of the underlying space minus `deleted`, as sets of
// edge ids. Dirichlet vertices never glue edges (they are not part of the
// space), so an edge whose endpoints are all deleted or Dirichlet is a
// singleton component. Components are sorted by their smallest edge id.
inline std::vector<std::vector<int>> components_after_deletion(const TreeGraph& g, const std::set<int>& deleted) {
    for (int v : deleted)
        if (!g.has_vertex(v)) fail(Errc::UnknownVertex, "vertex " + std::to_string(v));
    const auto glues = [&](int v) {
        return !g.is_dirichlet(v) && deleted.count(v) == 0;
    };
    // union-find over edges, merging edges that share a gluing vertex
    std::map<int, int> parent;
    for (const Edge& e : g.edges()) parent[e.id] = e.id;
    const auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& [v, c] : g.vertices()) {
        if (!glues(v)) continue;
        const auto& inc = g.incident(v);
        for (std::size_t i = 1; i < inc.size(); ++i) {
            int a = find(inc[0]), b = find(inc[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (const Edge& e : g.edges()) groups[find(e.id)].push_back(e.id);
    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [root, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// An open subgraph H: a deletion set D of Neumann vertices together with a
// selection of connected components of G minus D. The boundary is the part of
// D still adjacent to H, and type_m = beta0(H) - |boundary| is the quantity
// that stratifies the singular locus.
struct OpenSubgraph {
    std::vector<int> deleted;                  // ascending
    std::vector<std::vector<int>> kept;        // each ascending; list sorted
    std::vector<int> boundary;                 // ascending subset of deleted
    int beta0 = 0;
    int type_m = 0;

    std::vector<int> kept_edges() const {
        std::vector<int> all;
        for (const auto& k : kept) all.insert(all.end(), k.begin(), k.end());
        std::sort(all.begin(), all.end());
        return all;
    }

    bool operator==(const OpenSubgraph& o) const { return deleted == o.deleted && kept == o.kept; }
    bool operator<(const OpenSubgraph& o) const {
        if (deleted != o.deleted) return deleted < o.deleted;
        return kept < o.kept;
    }
};

namespace detail {

inline OpenSubgraph make_open_subgraph(const TreeGraph& g, const std::set<int>& deleted,
                                       std::vector<std::vector<int>> kept, bool enforce_endpoint_rule) {
    for (int v : deleted) {
        if (!g.has_vertex(v)) fail(Errc::UnknownVertex, "vertex " + std::to_string(v));
        if (g.is_dirichlet(v))
            fail(Errc::DirichletDeleted, "vertex " + std::to_string(v) + " is Dirichlet and already absent");
    }
    std::sort(kept.begin(), kept.end());
    std::set<int> kept_edge_set;
    for (const auto& comp : kept) {
        if (comp.empty()) fail(Errc::InvalidComponent, "empty component");
        for (int e : comp)
            if (!kept_edge_set.insert(e).second)
                fail(Errc::InvalidComponent, "edge " + std::to_string(e) + " appears in two components");
    }
    OpenSubgraph h;
    h.deleted.assign(deleted.begin(), deleted.end());
    h.kept = std::move(kept);
    h.beta0 = int(h.kept.size());
    for (int v : deleted) {
        bool adjacent = false;
        for (int e : g.incident(v))
            if (kept_edge_set.count(e)) { adjacent = true; break; }
        if (adjacent) h.boundary.push_back(v);
    }
    h.type_m = h.beta0 - int(h.boundary.size());
    if (enforce_endpoint_rule) {
        for (int v : h.boundary) {
            int touching = 0;
            for (int e : g.incident(v))
                if (kept_edge_set.count(e)) ++touching;
            if (touching < 2)
                fail(Errc::EndpointRuleViolated,
                     "boundary vertex " + std::to_string(v) + " touches only one kept edge");
        }
    }
    return h;
}

} // namespace detail

// Validates that every kept set is a component of G minus `deleted`, computes
// the boundary and type, and rejects subgraphs with an endpoint at a deleted
// vertex (those can never be the support of a secular-manifold point).
inline OpenSubgraph boundary_and_type(const TreeGraph& g, const std::set<int>& deleted,
                                      const std::vector<std::vector<int>>& kept) {
    auto comps = components_after_deletion(g, deleted);
    std::set<std::vector<int>> comp_set(comps.begin(), comps.end());
    for (auto comp : kept) {
        std::sort(comp.begin(), comp.end());
        if (!comp_set.count(comp)) fail(Errc::InvalidComponent, "kept set is not a component of G minus deleted");
    }
    std::vector<std::vector<int>> kept_sorted = kept;
    for (auto& c : kept_sorted) std::sort(c.begin(), c.end());
    return detail::make_open_subgraph(g, deleted, std::move(kept_sorted), /*enforce_endpoint_rule=*/true);
}

// All open subgraphs of type exactly m (m >= 2), deduplicated up to the
// canonical deletion set (deleted vertices not adjacent to a kept edge are
// dropped), in lexicographic (deleted, kept) order.
inline std::vector<OpenSubgraph> enumerate_type_m(const TreeGraph& g, int m) {
    if (m < 2) fail(Errc::InvalidComponent, "type must be >= 2");
    const std::vector<int> neumann = g.neumann_vertices();
    if (neumann.size() > 20) fail(Errc::InvalidComponent, "graph too large for exhaustive enumeration");
    std::set<OpenSubgraph> found;
    const std::size_t vmask_end = std::size_t(1) << neumann.size();
    for (std::size_t vmask = 0; vmask < vmask_end; ++vmask) {
        std::set<int> deleted;
        for (std::size_t i = 0; i < neumann.size(); ++i)
            if (vmask & (std::size_t(1) << i)) deleted.insert(neumann[i]);
        const auto comps = components_after_deletion(g, deleted);
        const std::size_t cmask_end = std::size_t(1) << comps.size();
        for (std::size_t cmask = 1; cmask < cmask_end; ++cmask) {
            std::vector<std::vector<int>> kept;
            for (std::size_t i = 0; i < comps.size(); ++i)
                if (cmask & (std::size_t(1) << i)) kept.push_back(comps[i]);
            OpenSubgraph h;
            try {
                h = detail::make_open_subgraph(g, deleted, kept, /*enforce_endpoint_rule=*/true);
            } catch (const Error& e) {
                if (e.code() == Errc::EndpointRuleViolated) continue;
                throw;
            }
            if (h.type_m != m) continue;
            // canonical deletion set: boundary only
            if (int(h.deleted.size()) != int(h.boundary.size())) {
                std::set<int> canon(h.boundary.begin(), h.boundary.end());
                h = detail::make_open_subgraph(g, canon, h.kept, /*enforce_endpoint_rule=*/true);
            }
            found.insert(std::move(h));
        }
    }
    return {found.begin(), found.end()};
}

} // namespace treespec
