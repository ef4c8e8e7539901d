#pragma once

#include <vector>

#include "treespec/errors.hpp"
#include "treespec/multipoly.hpp"
#include "treespec/poly_matrix.hpp"
#include "treespec/tree_graph.hpp"

namespace treespec {

// Column layout of a scattering matrix: (a_{j1}, b_{j1}, ..., a_{jn}, b_{jn})
// with edge ids j1 < ... < jn. For a top-level graph this is a_1,b_1,...,a_n,b_n.
struct ColumnLayout {
    std::vector<int> edge_ids; // ascending

    int column_of_a(int edge_id) const { return 2 * position(edge_id); }
    int column_of_b(int edge_id) const { return 2 * position(edge_id) + 1; }

    int position(int edge_id) const {
        auto it = std::lower_bound(edge_ids.begin(), edge_ids.end(), edge_id);
        if (it == edge_ids.end() || *it != edge_id) fail(Errc::UnknownEdge, "edge " + std::to_string(edge_id));
        return int(it - edge_ids.begin());
    }
};

inline ColumnLayout column_layout(const TreeGraph& g) {
    ColumnLayout cl;
    for (const Edge& e : g.edges()) cl.edge_ids.push_back(e.id);
    return cl;
}

inline int ambient_vars(const TreeGraph& g) { return g.edges().back().id; }

// Boundary-value and derivative expressions of the wave ansatz on edge j at
// one of its endpoints, with exp(ik l_j) replaced by the variable z_j and the
// ik factor of the derivative divided out:
//   value at source  a + b z      derivative at source  a - b z
//   value at target  a z + b      derivative at target  a z - b
namespace detail {

inline void add_value_expr(PolyMatrix& mat, int row, const ColumnLayout& cl, const Edge& e, int v, long long sgn) {
    const int var = e.id;
    const MultiPoly z = MultiPoly::variable(mat.nvars(), var);
    const MultiPoly one = MultiPoly::constant(mat.nvars(), sgn);
    if (v == e.src) {
        mat.at(row, cl.column_of_a(e.id)) += one;
        mat.at(row, cl.column_of_b(e.id)) += z.scaled(sgn);
    } else {
        mat.at(row, cl.column_of_a(e.id)) += z.scaled(sgn);
        mat.at(row, cl.column_of_b(e.id)) += one;
    }
}

inline void add_deriv_expr(PolyMatrix& mat, int row, const ColumnLayout& cl, const Edge& e, int v, long long sgn) {
    const MultiPoly z = MultiPoly::variable(mat.nvars(), e.id);
    const MultiPoly one = MultiPoly::constant(mat.nvars(), sgn);
    if (v == e.src) {
        mat.at(row, cl.column_of_a(e.id)) += one;
        mat.at(row, cl.column_of_b(e.id)) += z.scaled(-sgn);
    } else {
        mat.at(row, cl.column_of_a(e.id)) += z.scaled(sgn);
        mat.at(row, cl.column_of_b(e.id)) += one.scaled(-1);
    }
}

} // namespace detail

// The edge scattering matrix S_G(z), built row by row from the vertex
// conditions. Rows are grouped by vertex in ascending id order; at a Neumann
// vertex of degree d there are d-1 continuity rows (consecutive incident
// edges, ascending ids) followed by one current-conservation row
// (sum over incoming derivatives minus sum over outgoing); at a Dirichlet
// vertex each incident edge contributes one vanishing-value row. The total
// row count is sum of degrees = 2n.
//
// `ambient` sets the polynomial variable count; 0 means the largest edge id,
// which for a top-level graph is n.
inline PolyMatrix scattering_matrix(const TreeGraph& g, int ambient = 0) {
    const int nvars = ambient == 0 ? ambient_vars(g) : ambient;
    if (nvars < ambient_vars(g)) fail(Errc::MismatchedRank, "ambient variable count below largest edge id");
    const ColumnLayout cl = column_layout(g);
    const int dim = 2 * g.n();
    PolyMatrix mat(dim, nvars);
    int row = 0;
    for (auto& [v, cond] : g.vertices()) {
        const auto& inc = g.incident(v);
        if (cond == VertexCondition::Dirichlet) {
            for (int eid : inc) detail::add_value_expr(mat, row++, cl, g.edge(eid), v, +1);
        } else {
            for (std::size_t i = 0; i + 1 < inc.size(); ++i) {
                detail::add_value_expr(mat, row, cl, g.edge(inc[i]), v, +1);
                detail::add_value_expr(mat, row, cl, g.edge(inc[i + 1]), v, -1);
                ++row;
            }
            for (int eid : inc) {
                const Edge& e = g.edge(eid);
                detail::add_deriv_expr(mat, row, cl, e, v, e.dst == v ? +1 : -1);
            }
            ++row;
        }
    }
    if (row != dim) fail(Errc::CrossCheckFailed, "row count mismatch in scattering construction");
    return mat;
}

// Canonical secular polynomial P_G = det S_G, exact in the ambient variable
// ring. Degree is exactly 2 in every variable of an edge of g and 0 in the
// others.
inline MultiPoly secular_polynomial(const TreeGraph& g, int ambient = 0) {
    const PolyMatrix s = scattering_matrix(g, ambient);
    MultiPoly det = determinant_cofactor(s);
    if (det.is_zero()) fail(Errc::DegenerateSystem, "secular determinant is identically zero");
    return det.canonicalized();
}

} // namespace treespec
