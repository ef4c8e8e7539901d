#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "treespec/errors.hpp"
#include "treespec/multipoly.hpp"
#include "treespec/strata.hpp"

namespace treespec {

using Rng = std::mt19937_64;

inline Complex random_unit(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double t = u(rng);
    return {std::cos(t), std::sin(t)};
}

namespace detail {

// Coefficients c_0..c_d of P viewed as a univariate polynomial in z_var with
// every other variable substituted from `z`.
inline std::vector<Complex> restrict_to_var(const MultiPoly& p, const std::vector<Complex>& z, int var) {
    std::vector<Complex> coeffs(std::size_t(p.degree_in(var)) + 1, Complex(0.0, 0.0));
    for (auto& [m, c] : p.terms()) {
        Complex t = double(c);
        for (int v = 1; v <= p.nvars(); ++v) {
            if (v == var) continue;
            for (int i = 0; i < mono_exp(m, v); ++i) t *= z[std::size_t(v - 1)];
        }
        coeffs[std::size_t(mono_exp(m, var))] += t;
    }
    return coeffs;
}

inline Complex horner_on_circle(const std::vector<Complex>& coeffs, double theta) {
    const Complex zt(std::cos(theta), std::sin(theta));
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * zt + *it;
    return acc;
}

inline double golden_minimize(const std::function<double(double)>& f, double a, double b, double xtol) {
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

// Angles theta with |sum c_e exp(i e theta)| below tol * scale, found by a
// dense grid scan plus golden-section refinement of each local minimum.
inline std::vector<double> circle_roots(const std::vector<Complex>& coeffs, double rel_tol = 1e-11) {
    const int degree = int(coeffs.size()) - 1;
    const int grid = std::max(512, 64 * std::max(degree, 1));
    std::vector<double> absval(std::size_t(grid), 0.0);
    double scale = 0.0;
    const double step = 2.0 * std::numbers::pi / grid;
    for (int i = 0; i < grid; ++i) {
        absval[std::size_t(i)] = std::abs(horner_on_circle(coeffs, i * step));
        scale = std::max(scale, absval[std::size_t(i)]);
    }
    if (scale == 0.0) fail(Errc::DegenerateSystem, "restricted polynomial vanishes identically");
    const auto f = [&](double t) { return std::abs(horner_on_circle(coeffs, t)); };
    std::vector<double> roots;
    for (int i = 0; i < grid; ++i) {
        const double prev = absval[std::size_t((i + grid - 1) % grid)];
        const double next = absval[std::size_t((i + 1) % grid)];
        if (absval[std::size_t(i)] > prev || absval[std::size_t(i)] > next) continue;
        if (absval[std::size_t(i)] > 0.1 * scale) continue;
        const double t = golden_minimize(f, (i - 1) * step, (i + 1) * step, 1e-13);
        if (f(t) < rel_tol * scale) roots.push_back(t);
    }
    // collapse duplicates from flat minima spanning several grid cells
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || r - unique.back() > 4 * step * 1e-6 + 1e-9) unique.push_back(r);
    return unique;
}

} // namespace detail

// A generic point of Z(H) for the given stratum: coordinates outside the
// stratum's systems are uniform on the circle, and each component system is
// solved by a 1-D root scan in one of its own variables. Points landing
// within 1e-6 of a deeper stratum (higher codimension, from `avoid`) are
// resampled; after 100 attempts the sampler gives up loudly.
inline TorusPoint sample_stratum(const Stratum& s, Rng& rng, const std::vector<Stratum>& avoid = {}) {
    if (s.systems.empty()) fail(Errc::EmptySystems, "stratum has no component systems");
    const int n = s.systems.front().nvars();
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Complex> z(std::size_t(n), Complex(1.0, 0.0));
        for (auto& c : z) c = random_unit(rng);
        bool ok = true;
        for (std::size_t ci = 0; ci < s.systems.size() && ok; ++ci) {
            const MultiPoly& p = s.systems[ci];
            const std::vector<int>& comp = s.h.kept[ci];
            // solve in a random edge variable of the component, others random
            std::uniform_int_distribution<std::size_t> pick(0, comp.size() - 1);
            const int var = comp[pick(rng)];
            const auto coeffs = detail::restrict_to_var(p, z, var);
            const auto roots = detail::circle_roots(coeffs);
            if (roots.empty()) { ok = false; break; }
            std::uniform_int_distribution<std::size_t> pick_root(0, roots.size() - 1);
            const double t = roots[pick_root(rng)];
            z[std::size_t(var - 1)] = {std::cos(t), std::sin(t)};
        }
        if (!ok) continue;
        for (const Stratum& other : avoid) {
            if (other.codim <= s.codim) continue;
            double worst = 0.0;
            for (const MultiPoly& p : other.systems) {
                double sum = 0.0;
                for (auto& [m, c] : p.terms()) sum += std::abs(double(c));
                worst = std::max(worst, std::abs(p.eval(std::span<const Complex>(z.data(), z.size()))) / sum);
            }
            if (worst < 1e-6) { ok = false; break; }
        }
        if (ok) return TorusPoint(std::move(z));
    }
    fail(Errc::SamplingFailed, "no generic stratum point found in 100 attempts");
}

// A random point of the secular manifold itself: all but one coordinate
// uniform on the circle, the last solved from P_G by the same root scan.
inline TorusPoint sample_secular_point(const TreeGraph& g, Rng& rng) {
    const MultiPoly p = secular_polynomial(g);
    const int n = p.nvars();
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Complex> z(std::size_t(n), Complex(1.0, 0.0));
        for (auto& c : z) c = random_unit(rng);
        const int var = attempt % n + 1;
        const auto coeffs = detail::restrict_to_var(p, z, var);
        const auto roots = detail::circle_roots(coeffs);
        if (roots.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick_root(0, roots.size() - 1);
        const double t = roots[pick_root(rng)];
        z[std::size_t(var - 1)] = {std::cos(t), std::sin(t)};
        return TorusPoint(std::move(z));
    }
    fail(Errc::SamplingFailed, "no secular point found in 100 attempts");
}

} // namespace treespec
