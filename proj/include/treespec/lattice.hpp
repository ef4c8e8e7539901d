#pragma once

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "treespec/errors.hpp"
#include "treespec/exterior.hpp"

namespace treespec {

// An integer lattice of dependence relations A.l = 0 among the edge lengths,
// stored as a row basis. `saturated()` returns a primitive basis of the same
// rational row space: the closure of gamma_l is the connected subtorus cut
// out by the saturation, and an unsaturated basis would scale its cohomology
// class by the lattice index.
class RelationLattice {
public:
    RelationLattice(int n, std::vector<std::vector<long long>> rows) : n_(n), rows_(std::move(rows)) {
        for (const auto& r : rows_) {
            if (int(r.size()) != n_) fail(Errc::MismatchedRank, "relation row has wrong length");
            bool all_zero = true;
            for (long long x : r)
                if (x != 0) { all_zero = false; break; }
            if (all_zero) fail(Errc::ZeroRow, "zero dependence relation");
        }
    }

    int n() const { return n_; }
    const std::vector<std::vector<long long>>& rows() const { return rows_; }

    // Primitive basis of the saturation (rational row space intersected with
    // Z^n), via Smith reduction: S = U A V with U, V unimodular; the first
    // rank rows of V^{-1} span the saturation.
    RelationLattice saturated() const {
        if (rows_.empty()) return *this;
        const int m = int(rows_.size());
        std::vector<std::vector<long long>> a = rows_;
        std::vector<std::vector<long long>> w(std::size_t(n_), std::vector<long long>(std::size_t(n_), 0));
        for (int i = 0; i < n_; ++i) w[std::size_t(i)][std::size_t(i)] = 1;

        // column op on a <-> inverse row op on w, so w tracks V^{-1}
        const auto col_swap = [&](int i, int j) {
            for (int r = 0; r < m; ++r) std::swap(a[std::size_t(r)][std::size_t(i)], a[std::size_t(r)][std::size_t(j)]);
            std::swap(w[std::size_t(i)], w[std::size_t(j)]);
        };
        const auto col_addmul = [&](int dst, int src, long long k) {
            // a.col(dst) += k * a.col(src);  w.row(src) -= k * w.row(dst)
            for (int r = 0; r < m; ++r)
                a[std::size_t(r)][std::size_t(dst)] =
                    checked_add(a[std::size_t(r)][std::size_t(dst)], checked_mul(k, a[std::size_t(r)][std::size_t(src)]));
            for (int c = 0; c < n_; ++c)
                w[std::size_t(src)][std::size_t(c)] =
                    checked_add(w[std::size_t(src)][std::size_t(c)], checked_mul(-k, w[std::size_t(dst)][std::size_t(c)]));
        };
        const auto row_swap = [&](int i, int j) { std::swap(a[std::size_t(i)], a[std::size_t(j)]); };
        const auto row_addmul = [&](int dst, int src, long long k) {
            for (int c = 0; c < n_; ++c)
                a[std::size_t(dst)][std::size_t(c)] =
                    checked_add(a[std::size_t(dst)][std::size_t(c)], checked_mul(k, a[std::size_t(src)][std::size_t(c)]));
        };

        int rank = 0;
        while (rank < m && rank < n_) {
            int pr = -1, pc = -1;
            long long best = 0;
            for (int r = rank; r < m; ++r)
                for (int c = rank; c < n_; ++c) {
                    const long long v = std::abs(a[std::size_t(r)][std::size_t(c)]);
                    if (v != 0 && (pr < 0 || v < best)) { pr = r; pc = c; best = v; }
                }
            if (pr < 0) break;
            if (pr != rank) row_swap(pr, rank);
            if (pc != rank) col_swap(pc, rank);
            for (;;) {
                const long long p = a[std::size_t(rank)][std::size_t(rank)];
                bool dirty = false;
                for (int r = rank + 1; r < m; ++r) {
                    const long long q = a[std::size_t(r)][std::size_t(rank)] / p;
                    if (q != 0) row_addmul(r, rank, -q);
                    if (a[std::size_t(r)][std::size_t(rank)] != 0) dirty = true;
                }
                for (int c = rank + 1; c < n_; ++c) {
                    const long long q = a[std::size_t(rank)][std::size_t(c)] / p;
                    if (q != 0) col_addmul(c, rank, -q);
                    if (a[std::size_t(rank)][std::size_t(c)] != 0) dirty = true;
                }
                if (!dirty) break;
                // a division remainder (smaller than |p|) survives in the
                // pivot row or column; promote the smallest one and repeat
                pr = rank;
                pc = rank;
                best = std::abs(p);
                for (int r = rank + 1; r < m; ++r) {
                    const long long v = std::abs(a[std::size_t(r)][std::size_t(rank)]);
                    if (v != 0 && v < best) { pr = r; pc = rank; best = v; }
                }
                for (int c = rank + 1; c < n_; ++c) {
                    const long long v = std::abs(a[std::size_t(rank)][std::size_t(c)]);
                    if (v != 0 && v < best) { pr = rank; pc = c; best = v; }
                }
                if (pr != rank) row_swap(pr, rank);
                else if (pc != rank) col_swap(pc, rank);
            }
            ++rank;
        }
        std::vector<std::vector<long long>> basis(w.begin(), w.begin() + rank);
        // normalize each basis row's sign deterministically
        for (auto& row : basis) {
            for (long long x : row) {
                if (x == 0) continue;
                if (x < 0)
                    for (auto& y : row) y = -y;
                break;
            }
        }
        return RelationLattice(n_, std::move(basis));
    }

    int rank() const { return int(saturated().rows().size()); }

private:
    int n_;
    std::vector<std::vector<long long>> rows_;
};

// Cohomology class of the closure of gamma_l for lengths satisfying the
// relations: the wedge over saturated rows of sum_j A_j alpha_j.
inline ExteriorClass closure_class(const RelationLattice& rel) {
    const RelationLattice sat = rel.saturated();
    ExteriorClass acc = ExteriorClass::unit(rel.n());
    for (const auto& row : sat.rows()) {
        ExteriorClass form(rel.n());
        for (int j = 0; j < rel.n(); ++j)
            if (row[std::size_t(j)] != 0) form += ExteriorClass::generator(rel.n(), j + 1).scaled(row[std::size_t(j)]);
        acc = wedge(acc, form);
    }
    return acc;
}

} // namespace treespec
