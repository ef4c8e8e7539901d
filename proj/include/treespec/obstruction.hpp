#pragma once

#include <optional>
#include <vector>

#include "treespec/exterior.hpp"
#include "treespec/lattice.hpp"
#include "treespec/strata.hpp"

namespace treespec {

// Cohomology class of Z(H): wedge over the kept components of the class of
// each component's zero locus. Component edge sets are disjoint for genuine
// strata; anything else is rejected.
inline ExteriorClass stratum_class(const Stratum& s, int n) {
    std::uint64_t seen = 0;
    ExteriorClass acc = ExteriorClass::unit(n);
    for (const auto& comp : s.h.kept) {
        for (int j : comp) {
            const std::uint64_t bit = std::uint64_t(1) << (j - 1);
            if (seen & bit) fail(Errc::OverlappingVariables, "edge " + std::to_string(j) + " in two components");
            seen |= bit;
        }
        acc = wedge(acc, zero_locus_class(comp, n));
    }
    return acc;
}

enum class Verdict { Obstructed, Inconclusive };

struct StratumProduct {
    Stratum stratum;
    ExteriorClass cls;
    bool complementary = false;          // degrees pair up to the top form
    std::optional<long long> product;    // set iff complementary
};

struct ObstructionReport {
    std::vector<StratumProduct> products;
    ExteriorClass closure;
    int lattice_rank = 0;
    Verdict verdict = Verdict::Inconclusive;
};

// Intersection-product test for uniform discreteness: a nonzero product of
// the closure class of the length relations with any singular-stratum class
// forces the closure of gamma_l to meet the singular locus, so the mingap of
// every metric in the family is zero. All-zero products are inconclusive
// (the test is necessary, not sufficient).
inline ObstructionReport discreteness_obstruction(const TreeGraph& g, const RelationLattice& rel) {
    const int n = ambient_vars(g);
    if (rel.n() != n) fail(Errc::MismatchedRank, "relation lattice over wrong edge count");
    ObstructionReport rep{.products = {}, .closure = closure_class(rel), .lattice_rank = 0,
                          .verdict = Verdict::Inconclusive};
    rep.lattice_rank = int(rel.saturated().rows().size());
    for (const Stratum& s : singular_components(g)) {
        StratumProduct sp{.stratum = s, .cls = stratum_class(s, n), .complementary = false, .product = {}};
        if (s.codim + rep.lattice_rank == n) {
            sp.complementary = true;
            sp.product = intersection_number(sp.cls, rep.closure);
            if (*sp.product != 0) rep.verdict = Verdict::Obstructed;
        }
        rep.products.push_back(std::move(sp));
    }
    return rep;
}

} // namespace treespec
