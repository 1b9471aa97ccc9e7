#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace mwdep {

/// Element a + bi of the Euclidean domain Z[i].
struct GaussianInt {
    BigInt re;
    BigInt im;

    GaussianInt() = default;
    GaussianInt(BigInt r) : re(std::move(r)), im(0) {}
    GaussianInt(long long r) : re(r), im(0) {}
    GaussianInt(BigInt r, BigInt i) : re(std::move(r)), im(std::move(i)) {}
    GaussianInt(long long r, long long i) : re(r), im(i) {}

    static GaussianInt i() { return {0, 1}; }

    BigInt norm() const { return re * re + im * im; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_unit() const { return norm() == 1; }
    GaussianInt conj() const { return {re, -im}; }

    GaussianInt operator-() const { return {-re, -im}; }
    GaussianInt& operator+=(const GaussianInt& o) { re += o.re; im += o.im; return *this; }
    GaussianInt& operator-=(const GaussianInt& o) { re -= o.re; im -= o.im; return *this; }
    GaussianInt& operator*=(const GaussianInt& o) {
        BigInt r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    friend GaussianInt operator+(GaussianInt a, const GaussianInt& b) { return a += b; }
    friend GaussianInt operator-(GaussianInt a, const GaussianInt& b) { return a -= b; }
    friend GaussianInt operator*(GaussianInt a, const GaussianInt& b) { return a *= b; }
    friend bool operator==(const GaussianInt& a, const GaussianInt& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GaussianInt& a, const GaussianInt& b) { return !(a == b); }
};

inline bool is_zero(const GaussianInt& z) { return z.is_zero(); }

// round(n / d) to the nearest integer, d > 0
inline BigInt round_div(const BigInt& n, const BigInt& d) {
    return floor_div(2 * n + d, 2 * d);
}

/// Division with remainder: a = q*b + r, norm(r) <= norm(b)/2.
inline std::pair<GaussianInt, GaussianInt> gi_divrem(const GaussianInt& a, const GaussianInt& b) {
    if (b.is_zero()) throw InvalidArgument("Gaussian division by zero");
    const BigInt n = b.norm();
    const GaussianInt num = a * b.conj();
    GaussianInt q{round_div(num.re, n), round_div(num.im, n)};
    GaussianInt r = a - q * b;
    return {std::move(q), std::move(r)};
}

/// Deterministic residue of a modulo m (the gi_divrem remainder).
inline GaussianInt gi_mod(const GaussianInt& a, const GaussianInt& m) { return gi_divrem(a, m).second; }

inline bool gi_divides(const GaussianInt& d, const GaussianInt& a) {
    if (d.is_zero()) return a.is_zero();
    return gi_divrem(a, d).second.is_zero();
}

inline GaussianInt gi_divexact(const GaussianInt& a, const GaussianInt& b) {
    auto [q, r] = gi_divrem(a, b);
    if (!r.is_zero()) throw InvalidArgument("inexact Gaussian division");
    return q;
}

inline bool gi_congruent(const GaussianInt& a, const GaussianInt& b, const GaussianInt& m) {
    return gi_divides(m, a - b);
}

/// The unit u in {1, i, -1, -i} with u*z canonical (re > 0, im >= 0), or 1 for z = 0.
inline GaussianInt canonical_unit(const GaussianInt& z) {
    if (z.is_zero()) return 1;
    if (z.re.sign() > 0 && z.im.sign() >= 0) return 1;
    if (z.im.sign() > 0 && z.re.sign() <= 0) return {0, -1};   // -i*(a+bi) = b - ai
    if (z.re.sign() < 0 && z.im.sign() <= 0) return -1;
    return {0, 1};
}

inline GaussianInt canonical_associate(const GaussianInt& z) { return canonical_unit(z) * z; }

inline bool associates(const GaussianInt& a, const GaussianInt& b) {
    return canonical_associate(a) == canonical_associate(b);
}

inline GaussianInt gi_gcd(GaussianInt a, GaussianInt b) {
    while (!b.is_zero()) {
        GaussianInt r = gi_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return canonical_associate(a);
}

/// Bezout data: u*a + v*b = g with g the canonical gcd.
struct GiBezout {
    GaussianInt g, u, v;
};

inline GiBezout gi_xgcd(const GaussianInt& a, const GaussianInt& b) {
    GaussianInt r0 = a, r1 = b;
    GaussianInt s0 = 1, s1 = 0;
    GaussianInt t0 = 0, t1 = 1;
    while (!r1.is_zero()) {
        auto [q, r] = gi_divrem(r0, r1);
        r0 = std::exchange(r1, r);
        s0 = std::exchange(s1, s0 - q * s1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    GaussianInt u = canonical_unit(r0);
    return {u * r0, u * s0, u * t0};
}

/// Solves a*x = b (mod m); the result lies in the gi_mod residue system of m.
inline std::optional<GaussianInt> gi_solve_linear(const GaussianInt& a, const GaussianInt& b, const GaussianInt& m) {
    if (m.is_zero()) throw InvalidArgument("zero modulus");
    GiBezout bz = gi_xgcd(a, m);
    if (bz.g.is_zero()) return b.is_zero() ? std::optional<GaussianInt>(GaussianInt(0)) : std::nullopt;
    auto [q, r] = gi_divrem(b, bz.g);
    if (!r.is_zero()) return std::nullopt;
    return gi_mod(bz.u * q, m);
}

/// Factorisation into canonical Gaussian primes with exponents; the unit is dropped.
inline std::vector<std::pair<GaussianInt, int>> gi_factor(const GaussianInt& z) {
    if (z.is_zero()) throw InvalidArgument("cannot factor zero");
    std::vector<std::pair<GaussianInt, int>> out;
    GaussianInt rest = z;
    auto strip = [&](const GaussianInt& pi) {
        int e = 0;
        while (true) {
            auto [q, r] = gi_divrem(rest, pi);
            if (!r.is_zero()) break;
            rest = q;
            ++e;
        }
        if (e > 0) out.emplace_back(canonical_associate(pi), e);
    };
    for (auto& [q, e] : factor_bigint(z.norm())) {
        (void)e;
        if (q == 2) {
            strip(GaussianInt(1, 1));
        } else if (q % 4 == 3) {
            strip(GaussianInt(q));
        } else {
            // a prime above q: gcd(q, s + i) with s^2 = -1 mod q
            u64 qq = static_cast<u64>(q);
            u64 s = 0;
            for (u64 a = 2;; ++a) {
                u64 c = powmod(a, (qq - 1) / 4, qq);
                if (mulmod(c, c, qq) == qq - 1) { s = c; break; }
            }
            GaussianInt pi = gi_gcd(GaussianInt(q), GaussianInt(BigInt(s), 1));
            strip(pi);
            strip(pi.conj());
        }
    }
    if (!rest.is_unit()) throw InternalError("Gaussian factorisation incomplete");
    return out;
}

/// Complete residue system {x + yi : 0 <= x < N/g, 0 <= y < g} modulo m,
/// where g is the content gcd(re, im) and N the norm.
inline std::pair<BigInt, BigInt> gi_residue_box(const GaussianInt& m) {
    if (m.is_zero()) throw InvalidArgument("zero modulus");
    BigInt g = gcd(abs(m.re), abs(m.im));
    return {m.norm() / g, g};
}

inline std::vector<GaussianInt> gi_residue_system(const GaussianInt& m) {
    auto [w, h] = gi_residue_box(m);
    std::vector<GaussianInt> out;
    for (BigInt y = 0; y < h; ++y)
        for (BigInt x = 0; x < w; ++x) out.emplace_back(x, y);
    return out;
}

/// Coefficients (r1, r2, r3) with r1*c1 + r2*c2 = 0 and r2*c1 + r3*c2 = c1
/// modulo gamma, following the gcd(c1^2/D, c2) = D construction.
inline std::tuple<GaussianInt, GaussianInt, GaussianInt>
prop62_solve(const GaussianInt& c1, const GaussianInt& c2, const GaussianInt& gamma) {
    if (gamma.is_zero()) throw InvalidArgument("gamma must be nonzero");
    if (gi_divides(gamma, c1)) return {0, 0, 0};
    if (gi_divides(gamma, c2)) return {0, 1, 0};
    const GaussianInt d = gi_gcd(c1, c2);
    const GaussianInt a = gi_divexact(c1 * c1, d);
    GiBezout bz = gi_xgcd(a, c2);
    // bz.g is associate to d, hence divides c1
    const GaussianInt scale = gi_divexact(c1, bz.g);
    const GaussianInt r = bz.u * scale;
    const GaussianInt r3 = bz.v * scale;
    const GaussianInt r1 = -gi_divexact(r * c2, d);
    const GaussianInt r2 = gi_divexact(r * c1, d);
    return {r1, r2, r3};
}

// ----------------------------------------------------------------- text form

inline std::string to_string(const GaussianInt& z) {
    std::string s = z.re.str();
    if (z.im.sign() < 0) s += "-" + BigInt(-z.im).str() + "i";
    else s += "+" + z.im.str() + "i";
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const GaussianInt& z) { return os << to_string(z); }

/// Parses "a+bi", "a-bi", "a+i", "bi", "i", "-i", or a bare integer.
inline GaussianInt parse_gaussian(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s.empty()) throw InvalidArgument("empty Gaussian integer");
    if (s.back() != 'i') return GaussianInt(parse_bigint(s));
    s.pop_back();
    // split at the last sign that is not in leading position
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if (s[k] == '+' || s[k] == '-') { split = k; break; }
    std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string imag_part = split == std::string::npos ? s : s.substr(split);
    BigInt im;
    if (imag_part.empty() || imag_part == "+") im = 1;
    else if (imag_part == "-") im = -1;
    else im = parse_bigint(imag_part);
    BigInt re = real_part.empty() ? BigInt(0) : parse_bigint(real_part);
    return {re, im};
}

} // namespace mwdep
