#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "treespec/eigenspace.hpp"
#include "treespec/errors.hpp"
#include "treespec/tree_graph.hpp"

namespace treespec {

// Vertices from which the propagation can be seeded: at most one incident
// edge leads away from an endpoint. Only Neumann vertices qualify (the seed
// fixes a nonzero boundary value). Every tree has at least one.
inline std::vector<int> special_vertices(const TreeGraph& g) {
    std::vector<int> out;
    for (auto& [v, cond] : g.vertices()) {
        if (cond != VertexCondition::Neumann) continue;
        int interior_branches = 0;
        for (int eid : g.incident(v))
            if (!g.is_endpoint(g.opposite(eid, v))) ++interior_branches;
        if (interior_branches <= 1) out.push_back(v);
    }
    return out;
}

namespace detail {

struct Propagation {
    const TreeGraph& g;
    const TorusPoint& z;
    ColumnLayout layout;
    CoeffVector psi;

    Propagation(const TreeGraph& g_, const TorusPoint& z_)
        : g(g_), z(z_), layout(column_layout(g_)), psi(CoeffVector::Zero(2 * g_.n())) {}

    void set_pair(int eid, Complex a, Complex b) {
        psi(layout.column_of_a(eid)) = a;
        psi(layout.column_of_b(eid)) = b;
    }

    Complex value_at(int eid, int v) const {
        const Edge& e = g.edge(eid);
        const Complex a = psi(layout.column_of_a(eid)), b = psi(layout.column_of_b(eid));
        return v == e.src ? a + b * z.z(eid) : a * z.z(eid) + b;
    }

    Complex signed_deriv_at(int eid, int v) const {
        const Edge& e = g.edge(eid);
        const Complex a = psi(layout.column_of_a(eid)), b = psi(layout.column_of_b(eid));
        // contribution to the current balance: incoming minus outgoing
        return v == e.dst ? a * z.z(eid) - b : -(a - b * z.z(eid));
    }

    // rows (value | derivative) of edge eid as seen from vertex v
    void side_rows(int eid, int v, Complex& va, Complex& vb, Complex& da, Complex& db) const {
        const Edge& e = g.edge(eid);
        const Complex zz = z.z(eid);
        if (v == e.src) { va = 1.0; vb = zz; da = 1.0; db = -zz; }
        else { va = zz; vb = 1.0; da = zz; db = -1.0; }
    }

    void scale_branch(const std::vector<int>& edge_ids, Complex s) {
        for (int eid : edge_ids) {
            psi(layout.column_of_a(eid)) *= s;
            psi(layout.column_of_b(eid)) *= s;
        }
    }

    std::vector<int> branch_edges(int v, int via_edge) const {
        std::vector<int> out{via_edge};
        std::vector<std::pair<int, int>> stack{{g.opposite(via_edge, v), via_edge}};
        while (!stack.empty()) {
            auto [w, up] = stack.back();
            stack.pop_back();
            for (int eid : g.incident(w)) {
                if (eid == up) continue;
                out.push_back(eid);
                stack.push_back({g.opposite(eid, w), eid});
            }
        }
        return out;
    }

    // Fills every edge strictly below w (away from up_edge) so that the
    // boundary value at w equals 1. up_edge = 0 at the seed vertex.
    void fill(int w, int up_edge) {
        if (g.is_dirichlet(w))
            fail(Errc::VanishingVertex, "vertex " + std::to_string(w) + " is Dirichlet");
        for (int eid : g.incident(w)) {
            if (eid == up_edge) continue;
            const int c = g.opposite(eid, w);
            Complex va, vb, da, db;
            if (g.is_endpoint(c)) {
                // leaf condition at c plus unit value at w
                Complex r1a, r1b;
                Complex dummy_a, dummy_b;
                if (g.is_dirichlet(c)) side_rows(eid, c, r1a, r1b, dummy_a, dummy_b);
                else side_rows(eid, c, dummy_a, dummy_b, r1a, r1b);
                side_rows(eid, w, va, vb, da, db);
                const Complex det = r1a * vb - r1b * va;
                if (std::abs(det) < 1e-9)
                    fail(Errc::VanishingVertex, "vertex " + std::to_string(w) + ": leaf system is singular");
                // [r1a r1b; va vb] (a,b)^T = (0,1)^T
                set_pair(eid, -r1b / det, r1a / det);
            } else {
                fill(c, eid);
                // continuity (value 1) and current balance at c determine (a,b)
                Complex known = 0.0;
                for (int other : g.incident(c))
                    if (other != eid) known += signed_deriv_at(other, c);
                const Edge& e = g.edge(eid);
                const double sgn = (c == e.dst) ? 1.0 : -1.0;
                side_rows(eid, c, va, vb, da, db);
                const Complex det = va * db - vb * da; // magnitude 2 on the torus
                // [va vb; da db](a,b)^T = (1, rhs2)^T, rhs2 from the current balance
                const Complex rhs2 = -known * sgn;
                set_pair(eid, (db - vb * rhs2) / det, (va * rhs2 - da) / det);
            }
            const Complex val_w = value_at(eid, w);
            if (std::abs(val_w) < 1e-9)
                fail(Errc::VanishingVertex, "vertex " + std::to_string(w) + ": propagated value vanishes");
            scale_branch(branch_edges(w, eid), 1.0 / val_w);
        }
    }
};

} // namespace detail

// Rebuilds the (unique up to scale) z-eigenvector of a tree whose boundary
// values vanish nowhere, by seeding a unit value at the least special vertex
// and propagating through the leaf conditions and junction balances. The
// result is unit-norm with a deterministic phase and matches the numeric
// kernel up to a unimodular scalar.
inline CoeffVector reconstruct_eigenvector(const TreeGraph& g, const TorusPoint& z, double tol_rank = kTolRank) {
    const Eigenspace es = eigenspace(g, z, tol_rank);
    if (es.dim < 1) fail(Errc::NotOnSecularManifold, "z-eigenspace is trivial");
    for (int v : g.neumann_vertices()) {
        double maxval = 0.0;
        for (const CoeffVector& phi : es.basis) maxval = std::max(maxval, std::abs(eval_vertex(g, z, v, phi)));
        if (maxval < 1e-6)
            fail(Errc::VanishingVertex, "vertex " + std::to_string(v) + ": kernel vector vanishes there");
    }

    CoeffVector psi;
    if (g.n() == 1) {
        // single edge: kernel direction of the 2x2 system via the adjugate
        const Eigen::MatrixXcd m = eval_matrix(scattering_matrix(g), z);
        Eigen::Vector2cd k1(-m(0, 1), m(0, 0)), k2(-m(1, 1), m(1, 0));
        psi = (k1.norm() >= k2.norm()) ? CoeffVector(k1) : CoeffVector(k2);
        if (psi.norm() < 1e-12) fail(Errc::DegenerateSystem, "evaluated matrix is zero");
    } else {
        const std::vector<int> seeds = special_vertices(g);
        if (seeds.empty()) fail(Errc::VanishingVertex, "no Neumann special vertex to seed from");
        detail::Propagation prop(g, z);
        prop.fill(seeds.front(), 0);
        psi = prop.psi;
    }

    const Eigen::MatrixXcd m = eval_matrix(scattering_matrix(g), z);
    const double residual = (m * psi).norm() / psi.norm();
    if (residual > 1e-7)
        fail(Errc::CrossCheckFailed, "reconstructed vector residual " + std::to_string(residual));

    psi.normalize();
    Eigen::Index imax = 0;
    psi.cwiseAbs().maxCoeff(&imax);
    const Complex ph = psi(imax) / std::abs(psi(imax));
    psi *= std::conj(ph);
    return psi;
}

// Smallest-angle alignment of y onto x: the unimodular c maximizing the real
// overlap of x with c*y.
inline double aligned_distance(const CoeffVector& x, const CoeffVector& y) {
    const Complex ip = y.dot(x); // conj(y) . x
    const Complex c = std::abs(ip) > 0 ? ip / std::abs(ip) : Complex(1.0, 0.0);
    return (x - c * y).norm();
}

} // namespace treespec
