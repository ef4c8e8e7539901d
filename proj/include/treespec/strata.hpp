#pragma once

#include <set>
#include <vector>

#include "treespec/eigenspace.hpp"
#include "treespec/errors.hpp"
#include "treespec/multipoly.hpp"
#include "treespec/scattering.hpp"
#include "treespec/tree_graph.hpp"

namespace treespec {

// One stratum of the singular locus: an open subgraph H of type m together
// with the secular systems of its components, all expressed in the ambient
// n-variable ring. Z(H) = {z : every system vanishes} has codimension beta0.
struct Stratum {
    OpenSubgraph h;
    std::vector<MultiPoly> systems; // one per kept component, same order
    int codim = 0;
    int m = 0;
};

// The tree carried by one kept component of an open subgraph. Edge ids are
// preserved; boundary conditions are inherited, except that deleted vertices
// adjacent to the component become Dirichlet.
inline TreeGraph component_graph(const TreeGraph& g, const OpenSubgraph& h, const std::vector<int>& comp) {
    bool found = false;
    for (const auto& k : h.kept)
        if (k == comp) { found = true; break; }
    if (!found) fail(Errc::InvalidComponent, "edge set is not a kept component");
    const std::set<int> in_deleted(h.deleted.begin(), h.deleted.end());
    std::vector<Edge> edges;
    std::map<int, VertexCondition> vertices;
    for (int eid : comp) {
        const Edge& e = g.edge(eid);
        edges.push_back(e);
        for (int v : {e.src, e.dst}) {
            VertexCondition c = g.condition(v);
            if (in_deleted.count(v)) c = VertexCondition::Dirichlet;
            vertices[v] = c;
        }
    }
    return TreeGraph(std::move(edges), std::move(vertices), /*require_contiguous_ids=*/false);
}

inline Stratum build_stratum(const TreeGraph& g, const OpenSubgraph& h) {
    Stratum s;
    s.h = h;
    s.m = h.type_m;
    s.codim = h.beta0;
    const int ambient = ambient_vars(g);
    s.systems.reserve(h.kept.size());
    for (const auto& comp : h.kept) s.systems.push_back(secular_polynomial(component_graph(g, h, comp), ambient));
    return s;
}

// Every stratum of the singular locus: all type-m subgraphs for m = 2, 3, ...
// until two consecutive m yield nothing. Sorted by codimension, then by the
// enumeration order of the subgraphs.
inline std::vector<Stratum> singular_components(const TreeGraph& g) {
    std::vector<Stratum> out;
    int empty_streak = 0;
    for (int m = 2; empty_streak < 2; ++m) {
        const auto subs = enumerate_type_m(g, m);
        if (subs.empty()) {
            ++empty_streak;
            continue;
        }
        empty_streak = 0;
        for (const auto& h : subs) out.push_back(build_stratum(g, h));
    }
    std::stable_sort(out.begin(), out.end(), [](const Stratum& a, const Stratum& b) { return a.codim < b.codim; });
    return out;
}

// Multiplicity predicted by the support topology: beta0(supp) - |boundary|.
inline int predicted_multiplicity(const TreeGraph& g, const TorusPoint& z, double tol_rank = kTolRank) {
    const SupportInfo info = support_of_point(g, z, tol_rank);
    return info.supp.beta0 - int(info.supp.boundary.size());
}

struct MultiplicityCheck {
    int numeric = 0;
    int predicted = 0;
    bool agree = false;
};

inline MultiplicityCheck verify_multiplicity(const TreeGraph& g, const TorusPoint& z, double tol_rank = kTolRank) {
    const SupportInfo info = support_of_point(g, z, tol_rank);
    MultiplicityCheck c;
    c.numeric = info.space.dim;
    c.predicted = info.supp.beta0 - int(info.supp.boundary.size());
    c.agree = c.numeric == c.predicted;
    return c;
}

} // namespace treespec
