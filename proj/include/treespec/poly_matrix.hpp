#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "treespec/errors.hpp"
#include "treespec/multipoly.hpp"

namespace treespec {

// Dense square matrix over MultiPoly. Rows/columns are the boundary
// conditions / total-space coordinates of a scattering matrix, but the type
// itself is generic.
class PolyMatrix {
public:
    PolyMatrix(int dim, int nvars) : dim_(dim), nvars_(nvars), entries_(std::size_t(dim) * dim, MultiPoly(nvars)) {}

    int dim() const { return dim_; }
    int nvars() const { return nvars_; }

    MultiPoly& at(int r, int c) { return entries_[std::size_t(r) * dim_ + c]; }
    const MultiPoly& at(int r, int c) const { return entries_[std::size_t(r) * dim_ + c]; }

private:
    int dim_;
    int nvars_;
    std::vector<MultiPoly> entries_;
};

// Laplace expansion along rows with memoization on the set of still-unused
// columns. Exponential in dim, fine for the 2n <= 16 desk scale.
inline MultiPoly determinant_cofactor(const PolyMatrix& m) {
    const int dim = m.dim();
    if (dim == 0) return MultiPoly::constant(m.nvars(), 1);
    if (dim > 30) fail(Errc::TooManyVariables, "matrix too large for cofactor expansion");
    std::unordered_map<std::uint32_t, MultiPoly> memo;
    const std::uint32_t full = (dim == 32) ? ~0u : ((1u << dim) - 1u);

    auto rec = [&](auto&& self, std::uint32_t cols) -> const MultiPoly& {
        auto it = memo.find(cols);
        if (it != memo.end()) return it->second;
        const int row = dim - __builtin_popcount(cols);
        MultiPoly acc(m.nvars());
        int sign = 1;
        for (int c = 0; c < dim; ++c) {
            if (!(cols & (1u << c))) continue;
            const MultiPoly& entry = m.at(row, c);
            if (!entry.is_zero()) {
                const MultiPoly& sub = self(self, cols & ~(1u << c));
                MultiPoly term = entry * sub;
                if (sign < 0) term = -term;
                acc += term;
            }
            sign = -sign;
        }
        return memo.emplace(cols, std::move(acc)).first->second;
    };
    memo.emplace(0u, MultiPoly::constant(m.nvars(), 1));
    return rec(rec, full);
}

// Fraction-free (Bareiss) elimination with exact polynomial division.
// Independent of the cofactor route; the two must agree exactly.
inline MultiPoly determinant_bareiss(const PolyMatrix& m) {
    const int dim = m.dim();
    if (dim == 0) return MultiPoly::constant(m.nvars(), 1);
    std::vector<std::vector<MultiPoly>> a;
    a.resize(std::size_t(dim));
    for (int r = 0; r < dim; ++r) {
        a[std::size_t(r)].reserve(std::size_t(dim));
        for (int c = 0; c < dim; ++c) a[std::size_t(r)].push_back(m.at(r, c));
    }
    int sign = 1;
    MultiPoly prev = MultiPoly::constant(m.nvars(), 1);
    for (int k = 0; k + 1 < dim; ++k) {
        // pivot: nonzero entry in column k with the fewest terms
        int pivot = -1;
        for (int r = k; r < dim; ++r) {
            if (a[std::size_t(r)][std::size_t(k)].is_zero()) continue;
            if (pivot < 0 || a[std::size_t(r)][std::size_t(k)].term_count() <
                                 a[std::size_t(pivot)][std::size_t(k)].term_count())
                pivot = r;
        }
        if (pivot < 0) return MultiPoly::zero(m.nvars());
        if (pivot != k) {
            std::swap(a[std::size_t(pivot)], a[std::size_t(k)]);
            sign = -sign;
        }
        const MultiPoly& pkk = a[std::size_t(k)][std::size_t(k)];
        for (int i = k + 1; i < dim; ++i) {
            for (int j = k + 1; j < dim; ++j) {
                MultiPoly num = pkk * a[std::size_t(i)][std::size_t(j)] -
                                a[std::size_t(i)][std::size_t(k)] * a[std::size_t(k)][std::size_t(j)];
                a[std::size_t(i)][std::size_t(j)] = num.divided_exact(prev);
            }
            a[std::size_t(i)][std::size_t(k)] = MultiPoly::zero(m.nvars());
        }
        prev = pkk;
    }
    MultiPoly det = a[std::size_t(dim - 1)][std::size_t(dim - 1)];
    return sign < 0 ? -det : det;
}

} // namespace treespec
