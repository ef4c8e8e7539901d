#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "treespec/errors.hpp"
#include "treespec/multipoly.hpp"

namespace treespec {

// Element of the integer exterior algebra on generators a_1..a_n. Terms are
// stored against index subsets (bit i-1 = generator a_i); the sign produced
// by sorting a product into ascending order is absorbed at insertion.
class ExteriorClass {
public:
    explicit ExteriorClass(int n = 0) : n_(n) {
        if (n < 0 || n > 62) fail(Errc::MismatchedRank, "generator count out of range");
    }

    static ExteriorClass unit(int n) {
        ExteriorClass x(n);
        x.terms_[0] = 1;
        return x;
    }

    static ExteriorClass generator(int n, int i) {
        ExteriorClass x(n);
        if (i < 1 || i > n) fail(Errc::MismatchedRank, "generator a" + std::to_string(i) + " out of range");
        x.terms_[std::uint64_t(1) << (i - 1)] = 1;
        return x;
    }

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::uint64_t, long long>& terms() const { return terms_; }

    long long coeff(std::uint64_t subset) const {
        auto it = terms_.find(subset);
        return it == terms_.end() ? 0 : it->second;
    }

    void add_term(std::uint64_t subset, long long c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(subset, c);
        if (!inserted) {
            it->second = checked_add(it->second, c);
            if (it->second == 0) terms_.erase(it);
        }
    }

    ExteriorClass& operator+=(const ExteriorClass& o) {
        check_same(o);
        for (auto& [s, c] : o.terms_) add_term(s, c);
        return *this;
    }

    friend ExteriorClass operator+(ExteriorClass a, const ExteriorClass& b) { return a += b; }

    ExteriorClass operator-() const {
        ExteriorClass r(n_);
        for (auto& [s, c] : terms_) r.terms_[s] = -c;
        return r;
    }

    friend ExteriorClass operator-(ExteriorClass a, const ExteriorClass& b) { return a + (-b); }

    ExteriorClass scaled(long long k) const {
        ExteriorClass r(n_);
        if (k == 0) return r;
        for (auto& [s, c] : terms_) r.terms_[s] = checked_mul(c, k);
        return r;
    }

    bool operator==(const ExteriorClass& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    // Homogeneous degree, or -1 for 0 and mixed classes.
    int degree() const {
        int d = -1;
        for (auto& [s, c] : terms_) {
            const int k = std::popcount(s);
            if (d < 0) d = k;
            else if (d != k) return -1;
        }
        return d;
    }

    // "<coeff> a<i>a<j>..." terms, ascending indices, sorted by index tuple;
    // 0 and the unit class print as "0" and "1".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [s, c] : terms_) {
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            os << (c < 0 ? -c : c);
            bool any = false;
            for (int i = 1; i <= n_; ++i)
                if (s & (std::uint64_t(1) << (i - 1))) {
                    os << (any ? "" : " ") << "a" << i;
                    any = true;
                }
        }
        return os.str();
    }

    static ExteriorClass parse(const std::string& text, int n);

private:
    void check_same(const ExteriorClass& o) const {
        if (n_ != o.n_) fail(Errc::MismatchedRank, "classes over different generator counts");
    }

    int n_;
    std::map<std::uint64_t, long long> terms_;
};

namespace detail {

// Sign of merging two disjoint ascending index sets: parity of pairs (i, j)
// with i in x, j in y, i > j.
inline int merge_sign(std::uint64_t x, std::uint64_t y) {
    int inversions = 0;
    while (y) {
        const std::uint64_t low = y & (~y + 1);
        inversions += std::popcount(x & ~(low | (low - 1)));
        y ^= low;
    }
    return inversions % 2 == 0 ? 1 : -1;
}

} // namespace detail

inline ExteriorClass wedge(const ExteriorClass& x, const ExteriorClass& y) {
    if (x.n() != y.n()) fail(Errc::MismatchedRank, "wedge of classes over different generator counts");
    ExteriorClass r(x.n());
    for (auto& [sx, cx] : x.terms())
        for (auto& [sy, cy] : y.terms()) {
            if (sx & sy) continue; // repeated generator
            r.add_term(sx | sy, checked_mul(checked_mul(cx, cy), detail::merge_sign(sx, sy)));
        }
    return r;
}

// Coefficient of the top form a_1...a_n in x wedge y.
inline long long intersection_number(const ExteriorClass& x, const ExteriorClass& y) {
    if (x.n() != y.n()) fail(Errc::MismatchedRank, "classes over different generator counts");
    const std::uint64_t full = (x.n() == 0) ? 0 : ((std::uint64_t(1) << x.n()) - 1);
    long long acc = 0;
    for (auto& [sx, cx] : x.terms()) {
        const std::uint64_t sy = full & ~sx;
        const long long cy = y.coeff(sy);
        if (cy != 0) acc = checked_add(acc, checked_mul(checked_mul(cx, cy), detail::merge_sign(sx, sy)));
    }
    return acc;
}

// [Z_G] for a tree with the given edge ids inside an n-torus: 2(a_j1+...+a_jm),
// taken with the canonical positive sign.
inline ExteriorClass zero_locus_class(const std::vector<int>& edge_ids, int n) {
    ExteriorClass r(n);
    for (int j : edge_ids) r += ExteriorClass::generator(n, j).scaled(2);
    return r;
}

inline ExteriorClass parse_exterior(const std::string& text, int n) { return ExteriorClass::parse(text, n); }

inline ExteriorClass ExteriorClass::parse(const std::string& text, int n) {
    ExteriorClass x(n);
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
    if (i == text.size()) fail(Errc::ParseError, "empty class");
    if (text[i] == '0' && text.find_first_not_of(" \t", i + 1) == std::string::npos) return x;
    int sign = 1;
    if (text[i] == '-') { sign = -1; ++i; }
    else if (text[i] == '+') ++i;
    while (true) {
        long long coeff = sign * parse_uint("coefficient");
        std::uint64_t subset = 0;
        while (true) {
            skip_ws();
            if (i >= text.size() || text[i] != 'a') break;
            ++i;
            long long g = parse_uint("generator index");
            if (g < 1 || g > n) fail(Errc::ParseError, "generator a" + std::to_string(g) + " out of range");
            const std::uint64_t bit = std::uint64_t(1) << (g - 1);
            if (subset & bit) fail(Errc::ParseError, "repeated generator a" + std::to_string(g));
            subset |= bit;
        }
        x.add_term(subset, coeff);
        skip_ws();
        if (i == text.size()) break;
        if (text[i] == '+') sign = 1;
        else if (text[i] == '-') sign = -1;
        else fail(Errc::ParseError, "unexpected character in class at offset " + std::to_string(i));
        ++i;
    }
    return x;
}

} // namespace treespec
