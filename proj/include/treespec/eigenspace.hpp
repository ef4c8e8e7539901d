#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <vector>

#include "treespec/errors.hpp"
#include "treespec/scattering.hpp"
#include "treespec/tree_graph.hpp"

namespace treespec {

// Default tolerances. tol_rank is relative to the largest singular value;
// the residual bound is what every numeric kernel vector must satisfy.
constexpr double kTolTorus = 1e-9;
constexpr double kTolRank = 1e-8;
constexpr double kTolResidual = 1e-10;

using Complex = std::complex<double>;
using CoeffVector = Eigen::VectorXcd;

// A point of the n-torus: coordinates indexed by edge id (z_j = coords[j-1]).
struct TorusPoint {
    std::vector<Complex> coords;

    explicit TorusPoint(std::vector<Complex> c, double tol = kTolTorus) : coords(std::move(c)) {
        for (std::size_t j = 0; j < coords.size(); ++j)
            if (std::abs(std::abs(coords[j]) - 1.0) > tol)
                fail(Errc::OffTorus, "|z" + std::to_string(j + 1) + "| = " + std::to_string(std::abs(coords[j])));
    }

    static TorusPoint from_angles(const std::vector<double>& theta) {
        std::vector<Complex> c;
        c.reserve(theta.size());
        for (double t : theta) c.emplace_back(std::cos(t), std::sin(t));
        return TorusPoint(std::move(c));
    }

    int n() const { return int(coords.size()); }
    Complex z(int edge_id) const {
        if (edge_id < 1 || edge_id > n()) fail(Errc::UnknownEdge, "no coordinate for edge " + std::to_string(edge_id));
        return coords[std::size_t(edge_id - 1)];
    }
};

inline Eigen::MatrixXcd eval_matrix(const PolyMatrix& m, const TorusPoint& z) {
    if (z.n() < m.nvars()) fail(Errc::MismatchedRank, "torus point has too few coordinates");
    Eigen::MatrixXcd out(m.dim(), m.dim());
    const std::span<const Complex> zs(z.coords.data(), std::size_t(m.nvars()));
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) out(r, c) = m.at(r, c).eval(zs);
    return out;
}

struct Eigenspace {
    int dim = 0;
    std::vector<CoeffVector> basis;    // orthonormal, kernel side
    double sigma_max = 0.0;
    std::vector<double> singular_values; // descending
};

// Numeric kernel of an evaluated scattering matrix: singular vectors whose
// singular values fall below tol_rank * sigma_max.
inline Eigenspace kernel_of(const Eigen::MatrixXcd& m, double tol_rank = kTolRank) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    Eigenspace es;
    es.singular_values.assign(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    es.sigma_max = es.singular_values.empty() ? 0.0 : es.singular_values.front();
    const double cut = tol_rank * (es.sigma_max > 0 ? es.sigma_max : 1.0);
    const int dim = int(es.singular_values.size());
    for (int i = 0; i < dim; ++i)
        if (es.singular_values[std::size_t(i)] < cut) ++es.dim;
    for (int i = dim - es.dim; i < dim; ++i) es.basis.push_back(svd.matrixV().col(i));
    return es;
}

inline Eigenspace eigenspace(const TreeGraph& g, const TorusPoint& z, double tol_rank = kTolRank) {
    return kernel_of(eval_matrix(scattering_matrix(g), z), tol_rank);
}

// Coefficient pair (a_j, b_j) of phi on the edge with the given id.
inline std::pair<Complex, Complex> edge_pair(const TreeGraph& g, const CoeffVector& phi, int edge_id) {
    const ColumnLayout cl = column_layout(g);
    return {phi(cl.column_of_a(edge_id)), phi(cl.column_of_b(edge_id))};
}

// Sub-tuple of (a_j, b_j) for j in `edge_ids` (ascending), i.e. the projection
// rho_H of the total space onto the edges of a subgraph.
inline CoeffVector project_coefficients(const TreeGraph& g, const std::vector<int>& edge_ids, const CoeffVector& phi) {
    const ColumnLayout cl = column_layout(g);
    if (phi.size() != 2 * g.n()) fail(Errc::MismatchedRank, "coefficient vector has wrong length");
    std::vector<int> ids = edge_ids;
    std::sort(ids.begin(), ids.end());
    CoeffVector out(2 * ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out(2 * Eigen::Index(i)) = phi(cl.column_of_a(ids[i]));
        out(2 * Eigen::Index(i) + 1) = phi(cl.column_of_b(ids[i]));
    }
    return out;
}

namespace detail {

inline Complex value_at(const TreeGraph& g, const TorusPoint& z, int v, int edge_id, const CoeffVector& phi) {
    const Edge& e = g.edge(edge_id);
    auto [a, b] = edge_pair(g, phi, edge_id);
    const Complex zz = z.z(edge_id);
    return v == e.src ? a + b * zz : a * zz + b;
}

inline Complex deriv_at(const TreeGraph& g, const TorusPoint& z, int v, int edge_id, const CoeffVector& phi) {
    const Edge& e = g.edge(edge_id);
    auto [a, b] = edge_pair(g, phi, edge_id);
    const Complex zz = z.z(edge_id);
    return v == e.src ? a - b * zz : a * zz - b;
}

} // namespace detail

// Boundary value of phi at a vertex, evaluated on the least-id incident edge.
// For an eigenvector the incident-edge expressions agree; a disagreement
// beyond 1e-8 (relative to the largest expression, floored at the vector
// scale) means phi is not in T_z G.
inline Complex eval_vertex(const TreeGraph& g, const TorusPoint& z, int v, const CoeffVector& phi) {
    const auto& inc = g.incident(v);
    const Complex first = detail::value_at(g, z, v, inc.front(), phi);
    double maxabs = std::abs(first);
    for (std::size_t i = 1; i < inc.size(); ++i)
        maxabs = std::max(maxabs, std::abs(detail::value_at(g, z, v, inc[i], phi)));
    const double tol = 1e-8 * std::max(maxabs, phi.norm());
    for (std::size_t i = 1; i < inc.size(); ++i) {
        const Complex other = detail::value_at(g, z, v, inc[i], phi);
        if (std::abs(other - first) > tol)
            fail(Errc::ContinuityViolated, "vertex " + std::to_string(v) + ": incident edge values disagree");
    }
    return first;
}

// The support of a point z in Sigma_G, together with the vanishing data that
// defines it: vertices where every kernel vector evaluates to ~0 and edges
// where every kernel vector projects to ~0. The support is the open subgraph
// spanned by the components of G minus the vanishing vertices that still
// carry a nonvanishing edge.
struct SupportInfo {
    OpenSubgraph supp;
    std::vector<int> vanishing_vertices; // Neumann, ascending
    std::vector<int> vanishing_edges;    // ascending
    Eigenspace space;
};

inline SupportInfo support_of_point(const TreeGraph& g, const TorusPoint& z, double tol_rank = kTolRank) {
    SupportInfo info;
    info.space = eigenspace(g, z, tol_rank);
    if (info.space.dim < 1) fail(Errc::NotOnSecularManifold, "z-eigenspace is trivial");

    for (int v : g.neumann_vertices()) {
        double maxval = 0.0;
        for (const CoeffVector& phi : info.space.basis)
            maxval = std::max(maxval, std::abs(eval_vertex(g, z, v, phi)));
        if (maxval < tol_rank) info.vanishing_vertices.push_back(v);
    }
    std::set<int> vanishing_edge_set;
    for (const Edge& e : g.edges()) {
        double maxnorm = 0.0;
        for (const CoeffVector& phi : info.space.basis) {
            auto [a, b] = edge_pair(g, phi, e.id);
            maxnorm = std::max(maxnorm, std::hypot(std::abs(a), std::abs(b)));
        }
        if (maxnorm < tol_rank) {
            info.vanishing_edges.push_back(e.id);
            vanishing_edge_set.insert(e.id);
        }
    }
    const std::set<int> deleted(info.vanishing_vertices.begin(), info.vanishing_vertices.end());
    std::vector<std::vector<int>> kept;
    for (auto& comp : components_after_deletion(g, deleted)) {
        bool alive = false;
        for (int e : comp)
            if (!vanishing_edge_set.count(e)) { alive = true; break; }
        if (alive) kept.push_back(comp);
    }
    // supports are reported as-is; the endpoint rule is an enumeration-side
    // hygiene constraint, not a constraint on observed numerics
    info.supp = detail::make_open_subgraph(g, deleted, std::move(kept), /*enforce_endpoint_rule=*/false);
    return info;
}

} // namespace treespec
