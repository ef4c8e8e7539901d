#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "treespec/errors.hpp"

namespace treespec {

// Monomials are packed into a uint64: variable j (1-based, j <= 16) occupies
// the nibble 4*(16-j)..4*(16-j)+3, so z1 sits in the most significant nibble
// and plain integer comparison of packed monomials is lexicographic order
// with z1 > z2 > ... > z16.
using Mono = std::uint64_t;

constexpr int kMaxVars = 16;
constexpr int kMaxExponent = 15;

inline int mono_shift(int var) { return 4 * (kMaxVars - var); }

inline int mono_exp(Mono m, int var) { return int((m >> mono_shift(var)) & 0xF); }

inline Mono mono_with_exp(Mono m, int var, int e) {
    const int s = mono_shift(var);
    return (m & ~(Mono(0xF) << s)) | (Mono(e) << s);
}

inline Mono mono_of_var(int var, int e = 1) { return Mono(e) << mono_shift(var); }

// Product of monomials. All polynomials in this project stay far below the
// per-variable cap of 15, so the guarded slow path is effectively dead code.
inline Mono mono_mul(Mono a, Mono b) {
    constexpr Mono high = 0x8888888888888888ull;
    if (((a | b) & high) == 0) return a + b;
    Mono r = 0;
    for (int v = 1; v <= kMaxVars; ++v) {
        const int e = mono_exp(a, v) + mono_exp(b, v);
        if (e > kMaxExponent) fail(Errc::CoefficientOverflow, "monomial exponent overflow");
        r = mono_with_exp(r, v, e);
    }
    return r;
}

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) fail(Errc::CoefficientOverflow, "coefficient addition overflow");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) fail(Errc::CoefficientOverflow, "coefficient multiplication overflow");
    return r;
}

// Sparse multivariate polynomial with exact integer coefficients in
// z_1..z_nvars. Zero coefficients are never stored.
class MultiPoly {
public:
    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0 || nvars > kMaxVars)
            fail(Errc::TooManyVariables, "nvars = " + std::to_string(nvars) + " (max " + std::to_string(kMaxVars) + ")");
    }

    static MultiPoly zero(int nvars) { return MultiPoly(nvars); }

    static MultiPoly constant(int nvars, long long c) {
        MultiPoly p(nvars);
        if (c != 0) p.terms_[0] = c;
        return p;
    }

    static MultiPoly variable(int nvars, int var, int e = 1) {
        MultiPoly p(nvars);
        p.check_var(var);
        p.terms_[mono_of_var(var, e)] = 1;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Mono, long long>& terms() const { return terms_; }

    long long coeff(Mono m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? 0 : it->second;
    }

    void add_term(Mono m, long long c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second = checked_add(it->second, c);
            if (it->second == 0) terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        check_same(o);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    MultiPoly& operator-=(const MultiPoly& o) {
        check_same(o);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_same(b);
        MultiPoly r(a.nvars_);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), checked_mul(ca, cb));
        return r;
    }

    MultiPoly scaled(long long k) const {
        MultiPoly r(nvars_);
        if (k == 0) return r;
        for (auto& [m, c] : terms_) r.terms_[m] = checked_mul(c, k);
        return r;
    }

    bool operator==(const MultiPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // Lexicographically greatest monomial (leading in the canonical order).
    Mono leading_mono() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
    long long leading_coeff() const { return terms_.empty() ? 0 : terms_.rbegin()->second; }

    int degree_in(int var) const {
        check_var(var);
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, mono_exp(m, var));
        return d;
    }

    bool uses_var(int var) const { return degree_in(var) > 0; }

    std::complex<double> eval(std::span<const std::complex<double>> z) const {
        if (int(z.size()) != nvars_) fail(Errc::MismatchedRank, "eval point has wrong dimension");
        std::complex<double> acc = 0.0;
        for (auto& [m, c] : terms_) {
            std::complex<double> t = double(c);
            for (int v = 1; v <= nvars_; ++v) {
                int e = mono_exp(m, v);
                for (int i = 0; i < e; ++i) t *= z[std::size_t(v - 1)];
            }
            acc += t;
        }
        return acc;
    }

    // Divides out the common monomial factor and the integer content, then
    // normalizes the sign so the lexicographically greatest monomial has a
    // positive coefficient. This is the representative used for every P_G:
    // the determinant is defined only up to row conventions, and the row
    // construction used here contributes a power-of-two content at interior
    // degree-2 vertices.
    MultiPoly canonicalized() const {
        if (terms_.empty()) return *this;
        Mono common = terms_.begin()->first;
        long long content = 0;
        for (auto& [m, c] : terms_) {
            for (int v = 1; v <= nvars_ && common != 0; ++v)
                common = mono_with_exp(common, v, std::min(mono_exp(common, v), mono_exp(m, v)));
            content = std::gcd(content, c < 0 ? -c : c);
        }
        MultiPoly r(nvars_);
        for (auto& [m, c] : terms_) {
            Mono reduced = 0;
            for (int v = 1; v <= nvars_; ++v)
                reduced = mono_with_exp(reduced, v, mono_exp(m, v) - mono_exp(common, v));
            r.terms_[reduced] = c / content;
        }
        if (r.terms_.rbegin()->second < 0)
            for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    // Exact division: *this must be a polynomial multiple of d.
    MultiPoly divided_exact(const MultiPoly& d) const {
        check_same(d);
        if (d.is_zero()) fail(Errc::DegenerateSystem, "division by zero polynomial");
        MultiPoly rem = *this;
        MultiPoly q(nvars_);
        const Mono dm = d.leading_mono();
        const long long dc = d.leading_coeff();
        while (!rem.is_zero()) {
            const Mono rm = rem.leading_mono();
            const long long rc = rem.leading_coeff();
            if (rc % dc != 0) fail(Errc::CrossCheckFailed, "inexact polynomial division (coefficient)");
            Mono qm = 0;
            for (int v = 1; v <= nvars_; ++v) {
                const int e = mono_exp(rm, v) - mono_exp(dm, v);
                if (e < 0) fail(Errc::CrossCheckFailed, "inexact polynomial division (monomial)");
                qm = mono_with_exp(qm, v, e);
            }
            const long long qc = rc / dc;
            q.add_term(qm, qc);
            MultiPoly t(nvars_);
            t.terms_[qm] = qc;
            rem -= t * d;
        }
        return q;
    }

    // Text form: terms in descending lexicographic monomial order, each as
    // "<coeff> z<j>^<e> ..." with zero exponents omitted and exponent 1
    // written as the bare variable; terms joined with " + " / " - ".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            long long c = it->second;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            os << (c < 0 ? -c : c);
            for (int v = 1; v <= nvars_; ++v) {
                const int e = mono_exp(it->first, v);
                if (e == 0) continue;
                os << " z" << v;
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

    static MultiPoly parse(const std::string& text, int nvars);

private:
    void check_same(const MultiPoly& o) const {
        if (nvars_ != o.nvars_) fail(Errc::MismatchedRank, "polynomials over different variable counts");
    }
    void check_var(int var) const {
        if (var < 1 || var > nvars_) fail(Errc::UnknownEdge, "variable z" + std::to_string(var) + " out of range");
    }

    int nvars_;
    std::map<Mono, long long> terms_;
};

inline MultiPoly MultiPoly::parse(const std::string& text, int nvars) {
    MultiPoly p(nvars);
    std::size_t i = 0;
    const auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    const auto parse_uint = [&](const char* what) -> long long {
        skip_ws();
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) fail(Errc::ParseError, std::string("expected ") + what + " at offset " + std::to_string(start));
        return std::stoll(text.substr(start, i - start));
    };

    skip_ws();
    if (i == text.size()) fail(Errc::ParseError, "empty polynomial");
    if (text.compare(i, 1, "0") == 0 && [&] { std::size_t j = i + 1; while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j; return j == text.size(); }())
        return p;

    int sign = 1;
    if (text[i] == '-') { sign = -1; ++i; }
    else if (text[i] == '+') ++i;

    while (true) {
        long long coeff = sign * parse_uint("coefficient");
        Mono m = 0;
        while (true) {
            skip_ws();
            if (i >= text.size() || text[i] != 'z') break;
            ++i;
            long long var = parse_uint("variable index");
            if (var < 1 || var > nvars) fail(Errc::ParseError, "variable z" + std::to_string(var) + " out of range");
            long long e = 1;
            if (i < text.size() && text[i] == '^') { ++i; e = parse_uint("exponent"); }
            if (e < 1 || e > kMaxExponent) fail(Errc::ParseError, "exponent out of range");
            if (mono_exp(m, int(var)) != 0) fail(Errc::ParseError, "repeated variable z" + std::to_string(var));
            m = mono_with_exp(m, int(var), int(e));
        }
        p.add_term(m, coeff);
        skip_ws();
        if (i == text.size()) break;
        if (text[i] == '+') sign = 1;
        else if (text[i] == '-') sign = -1;
        else fail(Errc::ParseError, "unexpected character '" + std::string(1, text[i]) + "' at offset " + std::to_string(i));
        ++i;
    }
    return p;
}

} // namespace treespec
