#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "treespec/eigenspace.hpp"
#include "treespec/errors.hpp"
#include "treespec/lattice.hpp"
#include "treespec/sampling.hpp"
#include "treespec/scattering.hpp"
#include "treespec/tree_graph.hpp"

namespace treespec {

struct SpectrumOptions {
    double dk = 0.0;          // grid step; 0 = pi / (8 * total length)
    double tol_root = 1e-10;  // refinement target |k_hat - k*|
    double tol_rank = kTolRank;
    double accept = 1e-6;     // sigma_min acceptance, relative to sigma_max at the root
};

struct EigenvalueHit {
    double k = 0.0;
    int multiplicity = 1;
    double residual = 0.0; // |P_G(exp(ik l))| / max over the scan grid
};

struct SpectrumReport {
    std::vector<EigenvalueHit> eigenvalues; // strictly increasing k
    double k_min = 0.0;
    double k_max = 0.0;
    double dk_used = 0.0;
    double mingap_estimate = 0.0; // min consecutive gap; 0 if fewer than 2 hits
};

namespace detail {

struct PathEvaluator {
    const TreeGraph& g;
    std::vector<double> lengths; // by edge position
    PolyMatrix sym;
    MultiPoly secular;
    double total_length = 0.0;

    PathEvaluator(const TreeGraph& g_, const std::vector<double>& lens)
        : g(g_), lengths(lens), sym(scattering_matrix(g_)), secular(secular_polynomial(g_)) {
        if (int(lengths.size()) != g.n()) fail(Errc::NonPositiveLength, "need one length per edge");
        for (double l : lengths) {
            if (!(l > 0.0)) fail(Errc::NonPositiveLength, "edge lengths must be positive");
            total_length += l;
        }
    }

    std::vector<Complex> point(double k) const {
        std::vector<Complex> z(lengths.size());
        for (std::size_t j = 0; j < lengths.size(); ++j)
            z[j] = Complex(std::cos(k * lengths[j]), std::sin(k * lengths[j]));
        return z;
    }

    Eigen::MatrixXcd matrix(double k) const {
        const auto z = point(k);
        Eigen::MatrixXcd out(sym.dim(), sym.dim());
        const std::span<const Complex> zs(z.data(), z.size());
        for (int r = 0; r < sym.dim(); ++r)
            for (int c = 0; c < sym.dim(); ++c) out(r, c) = sym.at(r, c).eval(zs);
        return out;
    }

    std::pair<double, double> sigma_min_max(double k) const {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix(k));
        const auto& s = svd.singularValues();
        return {s(s.size() - 1), s(0)};
    }

    double sigma_min(double k) const { return sigma_min_max(k).first; }

    Complex secular_value(double k) const {
        const auto z = point(k);
        return secular.eval(std::span<const Complex>(z.data(), z.size()));
    }

    // P_G along the path times the half-degree phase: a toral polynomial of a
    // tree has degree 2 per variable, so exp(-ik sum l) * P(exp(ikl)) runs
    // along a fixed line through the origin; its signed coordinate flips sign
    // at odd-order crossings.
    Complex aligned_secular(double k) const {
        const Complex ph(std::cos(k * total_length), std::sin(k * total_length));
        return secular_value(k) / ph;
    }
};

inline double golden_minimize_fn(const std::function<double(double)>& f, double a, double b, double xtol) {
    constexpr double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

// Scan sigma_min(S_G(exp(ikl))) over (0, k_max]: bracket grid minima, refine
// by golden section (with sign-bisection of the phase-aligned secular value
// as fallback), classify multiplicity by rank deficiency, merge clusters
// closer than 10*tol_root. Two surviving roots within one grid step mean the
// grid cannot separate eigenvalues and the scan refuses the result.
inline SpectrumReport compute_spectrum(const TreeGraph& g, const std::vector<double>& lengths, double k_max,
                                       const SpectrumOptions& opts = {}) {
    if (!(k_max > 0.0)) fail(Errc::EmptyWindow, "k_max must be positive");
    detail::PathEvaluator ev(g, lengths);
    const double dk = opts.dk > 0.0 ? opts.dk : std::numbers::pi / (8.0 * ev.total_length);

    const int steps = int(std::ceil(k_max / dk));
    std::vector<double> ks(std::size_t(steps), 0.0);
    std::vector<double> fs(std::size_t(steps), 0.0);
    double p_scale = 0.0;
    for (int i = 0; i < steps; ++i) {
        ks[std::size_t(i)] = std::min((i + 1) * dk, k_max);
        fs[std::size_t(i)] = ev.sigma_min(ks[std::size_t(i)]);
        p_scale = std::max(p_scale, std::abs(ev.secular_value(ks[std::size_t(i)])));
    }
    if (p_scale == 0.0) fail(Errc::DegenerateSystem, "secular polynomial vanishes along the whole grid");

    const auto f = [&](double k) { return ev.sigma_min(k); };
    const auto bisect_secular = [&](double a, double b) -> std::optional<double> {
        const Complex ua = ev.aligned_secular(a), ub = ev.aligned_secular(b);
        const bool use_re = std::max(std::abs(ua.real()), std::abs(ub.real())) >=
                            std::max(std::abs(ua.imag()), std::abs(ub.imag()));
        const auto comp = [&](double k) {
            const Complex u = ev.aligned_secular(k);
            return use_re ? u.real() : u.imag();
        };
        double fa = comp(a), fb = comp(b);
        if (fa * fb >= 0.0) return std::nullopt;
        while (b - a > std::min(opts.tol_root, 1e-10)) {
            const double mid = 0.5 * (a + b);
            const double fm = comp(mid);
            if (fa * fm <= 0.0) { b = mid; fb = fm; }
            else { a = mid; fa = fm; }
        }
        return 0.5 * (a + b);
    };

    std::vector<double> roots;
    for (int i = 0; i < steps; ++i) {
        const bool left_ok = i == 0 || fs[std::size_t(i)] <= fs[std::size_t(i - 1)];
        const bool right_ok = i + 1 == steps || fs[std::size_t(i)] <= fs[std::size_t(i + 1)];
        if (!(left_ok && right_ok)) continue;
        const double lo = std::max(ks[std::size_t(i)] - dk, 0.25 * dk);
        const double hi = std::min(ks[std::size_t(i)] + dk, k_max + 0.5 * dk);
        // sub-scan the bracket: a coarse grid can hide a close pair of roots
        // inside one bracket, and golden section would surface only one
        constexpr int fine = 32;
        std::vector<double> fk(fine + 1, 0.0);
        for (int t = 0; t <= fine; ++t) fk[std::size_t(t)] = f(lo + (hi - lo) * t / fine);
        bool found_any = false;
        for (int t = 0; t <= fine; ++t) {
            const bool l_ok = t == 0 || fk[std::size_t(t)] <= fk[std::size_t(t - 1)];
            const bool r_ok = t == fine || fk[std::size_t(t)] <= fk[std::size_t(t + 1)];
            if (!(l_ok && r_ok)) continue;
            const double sub_lo = lo + (hi - lo) * std::max(t - 1, 0) / fine;
            const double sub_hi = lo + (hi - lo) * std::min(t + 1, fine) / fine;
            double k_hat = detail::golden_minimize_fn(f, sub_lo, sub_hi, std::min(opts.tol_root, 1e-10));
            auto [smin, smax] = ev.sigma_min_max(k_hat);
            if (smin >= opts.accept * smax) continue;
            if (k_hat < 0.75 * dk || k_hat > k_max + 0.25 * dk) continue; // k = 0 is excluded; stay in window
            roots.push_back(std::min(k_hat, k_max));
            found_any = true;
        }
        if (!found_any) {
            // golden refinement stalled: fall back to sign bisection of the
            // phase-aligned secular value over the whole bracket
            if (const auto k_hat = bisect_secular(lo, hi)) {
                auto [smin, smax] = ev.sigma_min_max(*k_hat);
                if (smin < opts.accept * smax && *k_hat >= 0.75 * dk && *k_hat <= k_max + 0.25 * dk)
                    roots.push_back(std::min(*k_hat, k_max));
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    const double dup_tol = std::max(0.5 * opts.tol_root, 1e-13);
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return std::abs(a - b) < dup_tol; }),
                roots.end());

    SpectrumReport rep;
    rep.k_min = 0.0;
    rep.k_max = k_max;
    rep.dk_used = dk;
    const double merge_width = 10.0 * opts.tol_root;
    std::size_t i = 0;
    while (i < roots.size()) {
        std::size_t j = i + 1;
        double sum = roots[i];
        while (j < roots.size() && roots[j] - roots[j - 1] <= merge_width) sum += roots[j++];
        const double k_star = sum / double(j - i);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ev.matrix(k_star));
        const auto& sv = svd.singularValues();
        int mult = 0;
        for (Eigen::Index t = 0; t < sv.size(); ++t)
            if (sv(t) < opts.tol_rank * sv(0)) ++mult;
        EigenvalueHit hit;
        hit.k = k_star;
        hit.multiplicity = std::max(mult, 1);
        hit.residual = std::abs(ev.secular_value(k_star)) / p_scale;
        rep.eigenvalues.push_back(hit);
        i = j;
    }
    for (std::size_t t = 1; t < rep.eigenvalues.size(); ++t)
        if (rep.eigenvalues[t].k - rep.eigenvalues[t - 1].k < dk)
            fail(Errc::StepTooCoarse, "refined roots collide within one grid step; halve the step");

    double mg = 0.0;
    for (std::size_t t = 1; t < rep.eigenvalues.size(); ++t) {
        const double gap = rep.eigenvalues[t].k - rep.eigenvalues[t - 1].k;
        mg = (t == 1) ? gap : std::min(mg, gap);
    }
    rep.mingap_estimate = mg;
    return rep;
}

// Minimum consecutive gap over a window of an already computed spectrum.
// This is an upper bound for the true mingap (a limit inferior); a finite
// window can only over-estimate, and the estimate is nonincreasing as the
// window grows.
inline double mingap_estimate(const SpectrumReport& rep, double k0, double k1) {
    if (!(k0 < k1)) fail(Errc::EmptyWindow, "window is empty");
    std::vector<double> ks;
    for (const auto& e : rep.eigenvalues)
        if (e.k >= k0 && e.k <= k1) ks.push_back(e.k);
    if (ks.size() < 2) fail(Errc::EmptyWindow, "fewer than two eigenvalues in the window");
    double mg = ks[1] - ks[0];
    for (std::size_t t = 2; t < ks.size(); ++t) mg = std::min(mg, ks[t] - ks[t - 1]);
    return mg;
}

inline double mingap_estimate(const TreeGraph& g, const std::vector<double>& lengths, double k0, double k1,
                              const SpectrumOptions& opts = {}) {
    if (!(k0 < k1)) fail(Errc::EmptyWindow, "window is empty");
    return mingap_estimate(compute_spectrum(g, lengths, k1, opts), k0, k1);
}

struct GenericityTrial {
    int samples = 0;
    int fully_simple = 0;
    double fraction_fully_simple = 0.0;
    double worst_gap_to_double = 0.0; // smallest consecutive gap seen anywhere
};

// Samples length vectors in the positive cone of the relation family F_A and
// measures how often the resulting spectrum is fully simple up to k_max.
// Lengths are drawn by parametrizing the real kernel of the saturated
// relation matrix and rejection-sampling for positivity.
inline GenericityTrial genericity_trial(const TreeGraph& g, const RelationLattice& rel, int samples, double k_max,
                                        Rng& rng, const SpectrumOptions& opts = {}) {
    const int n = ambient_vars(g);
    if (rel.n() != n) fail(Errc::MismatchedRank, "relation lattice over wrong edge count");
    const RelationLattice sat = rel.saturated();
    const int r = int(sat.rows().size());
    Eigen::MatrixXd kernel;
    if (r == 0) {
        kernel = Eigen::MatrixXd::Identity(n, n);
    } else {
        Eigen::MatrixXd a(r, n);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = double(sat.rows()[std::size_t(i)][std::size_t(j)]);
        kernel = Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
        if (kernel.cols() == 0 || (kernel.cols() == 1 && kernel.norm() == 0.0))
            fail(Errc::InfeasibleRelations, "relations admit no nonzero solution");
    }

    GenericityTrial out;
    out.samples = samples;
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    bool have_gap = false;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> lengths;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 2000) fail(Errc::InfeasibleRelations, "no positive lengths found in the relation cone");
            Eigen::VectorXd c(kernel.cols());
            for (Eigen::Index t = 0; t < c.size(); ++t) c(t) = box(rng);
            Eigen::VectorXd l = kernel * c;
            if (l.minCoeff() <= 1e-3 * l.cwiseAbs().maxCoeff() || l.maxCoeff() <= 0.0) continue;
            l *= double(n) / l.sum(); // scale freedom: fix total length
            lengths.assign(l.data(), l.data() + l.size());
            break;
        }
        SpectrumReport rep;
        SpectrumOptions o = opts;
        for (int halvings = 0;; ++halvings) {
            try {
                rep = compute_spectrum(g, lengths, k_max, o);
                break;
            } catch (const Error& e) {
                if (e.code() != Errc::StepTooCoarse || halvings >= 6) throw;
                o.dk = (o.dk > 0.0 ? o.dk : std::numbers::pi / (8.0 * double(n))) / 2.0;
            }
        }
        bool simple = true;
        for (const auto& e : rep.eigenvalues)
            if (e.multiplicity > 1) simple = false;
        if (simple) ++out.fully_simple;
        if (!simple) {
            out.worst_gap_to_double = 0.0;
            have_gap = true;
        } else if (rep.eigenvalues.size() >= 2) {
            if (!have_gap || rep.mingap_estimate < out.worst_gap_to_double) out.worst_gap_to_double = rep.mingap_estimate;
            have_gap = true;
        }
    }
    out.fraction_fully_simple = samples > 0 ? double(out.fully_simple) / samples : 0.0;
    return out;
}

} // namespace treespec
