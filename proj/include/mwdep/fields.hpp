#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "arith.hpp"
#include "gaussian.hpp"

namespace mwdep {

// Every coefficient field F used by the curve templates provides:
//   from_int(const F& like, long long n)   the image of n in the field of `like`
//   is_zero(x), inverse(x), x == y, + - * / and unary minus.
// Finite fields additionally provide field_order, field_hash, is_square,
// random_element and sqrt.

// ----------------------------------------------------------------- Rational

inline Rational from_int(const Rational&, long long n) { return Rational(n); }

inline Rational inverse(const Rational& x) {
    if (x.is_zero()) throw DivisionByZero("inverse of zero rational");
    return 1 / x;
}

// ----------------------------------------------------------------- Q(i)

struct QiElement {
    Rational re;
    Rational im;

    QiElement() = default;
    QiElement(Rational r) : re(std::move(r)), im(0) {}
    QiElement(long long r) : re(r), im(0) {}
    QiElement(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static QiElement i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    QiElement conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }

    QiElement operator-() const { return {-re, -im}; }
    QiElement& operator+=(const QiElement& o) { re += o.re; im += o.im; return *this; }
    QiElement& operator-=(const QiElement& o) { re -= o.re; im -= o.im; return *this; }
    QiElement& operator*=(const QiElement& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    friend QiElement operator+(QiElement a, const QiElement& b) { return a += b; }
    friend QiElement operator-(QiElement a, const QiElement& b) { return a -= b; }
    friend QiElement operator*(QiElement a, const QiElement& b) { return a *= b; }
    friend bool operator==(const QiElement& a, const QiElement& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const QiElement& a, const QiElement& b) { return !(a == b); }
};

inline bool is_zero(const QiElement& x) { return x.is_zero(); }
inline QiElement from_int(const QiElement&, long long n) { return QiElement(n); }

inline QiElement inverse(const QiElement& x) {
    if (x.is_zero()) throw DivisionByZero("inverse of zero in Q(i)");
    Rational n = x.norm();
    return {x.re / n, -x.im / n};
}

inline QiElement operator/(const QiElement& a, const QiElement& b) { return a * inverse(b); }

// ----------------------------------------------------------------- F_p

struct FpElement {
    u64 p = 0;
    u64 v = 0;

    FpElement() = default;
    FpElement(u64 modulus, i64 value)
        : p(modulus), v(static_cast<u64>(((value % static_cast<i64>(modulus)) + static_cast<i64>(modulus)) %
                                          static_cast<i64>(modulus))) {}
    static FpElement raw(u64 modulus, u64 value) {
        FpElement e;
        e.p = modulus;
        e.v = value;
        return e;
    }

    bool is_zero() const { return v == 0; }
    FpElement operator-() const { return raw(p, v == 0 ? 0 : p - v); }
    FpElement& operator+=(const FpElement& o) { v += o.v; if (v >= p) v -= p; return *this; }
    FpElement& operator-=(const FpElement& o) { v = v >= o.v ? v - o.v : v + p - o.v; return *this; }
    FpElement& operator*=(const FpElement& o) { v = mulmod(v, o.v, p); return *this; }
    friend FpElement operator+(FpElement a, const FpElement& b) { return a += b; }
    friend FpElement operator-(FpElement a, const FpElement& b) { return a -= b; }
    friend FpElement operator*(FpElement a, const FpElement& b) { return a *= b; }
    friend bool operator==(const FpElement& a, const FpElement& b) { return a.v == b.v && a.p == b.p; }
    friend bool operator!=(const FpElement& a, const FpElement& b) { return !(a == b); }
};

inline bool is_zero(const FpElement& x) { return x.is_zero(); }
inline FpElement from_int(const FpElement& like, long long n) { return FpElement(like.p, n); }
inline FpElement fp_from_bigint(u64 p, const BigInt& n) { return FpElement::raw(p, mod_u64(n, p)); }

inline FpElement inverse(const FpElement& x) {
    if (x.is_zero()) throw DivisionByZero("inverse of zero in F_" + std::to_string(x.p));
    return FpElement::raw(x.p, invmod(x.v, x.p));
}
inline FpElement operator/(const FpElement& a, const FpElement& b) { return a * inverse(b); }

inline u64 field_order(const FpElement& x) { return x.p; }
inline u64 field_hash(const FpElement& x) { return x.v; }

// ----------------------------------------------------------------- F_{p^2}

/// a + b*t in F_p[t]/(t^2 + 1), p = 3 mod 4.
struct Fp2Element {
    u64 p = 0;
    u64 a = 0;
    u64 b = 0;

    Fp2Element() = default;
    Fp2Element(u64 modulus, i64 re, i64 im) : p(modulus) {
        a = FpElement(modulus, re).v;
        b = FpElement(modulus, im).v;
    }
    static Fp2Element raw(u64 modulus, u64 re, u64 im) {
        Fp2Element e;
        e.p = modulus;
        e.a = re;
        e.b = im;
        return e;
    }
    static Fp2Element t(u64 modulus) { return raw(modulus, 0, 1); }

    bool is_zero() const { return a == 0 && b == 0; }
    Fp2Element conj() const { return raw(p, a, b == 0 ? 0 : p - b); }
    u64 norm() const { return (mulmod(a, a, p) + mulmod(b, b, p)) % p; }

    Fp2Element operator-() const { return raw(p, a == 0 ? 0 : p - a, b == 0 ? 0 : p - b); }
    Fp2Element& operator+=(const Fp2Element& o) {
        a += o.a; if (a >= p) a -= p;
        b += o.b; if (b >= p) b -= p;
        return *this;
    }
    Fp2Element& operator-=(const Fp2Element& o) {
        a = a >= o.a ? a - o.a : a + p - o.a;
        b = b >= o.b ? b - o.b : b + p - o.b;
        return *this;
    }
    Fp2Element& operator*=(const Fp2Element& o) {
        u64 ac = mulmod(a, o.a, p), bd = mulmod(b, o.b, p);
        u64 ad = mulmod(a, o.b, p), bc = mulmod(b, o.a, p);
        a = ac >= bd ? ac - bd : ac + p - bd;
        b = (ad + bc) % p;
        return *this;
    }
    friend Fp2Element operator+(Fp2Element x, const Fp2Element& y) { return x += y; }
    friend Fp2Element operator-(Fp2Element x, const Fp2Element& y) { return x -= y; }
    friend Fp2Element operator*(Fp2Element x, const Fp2Element& y) { return x *= y; }
    friend bool operator==(const Fp2Element& x, const Fp2Element& y) {
        return x.a == y.a && x.b == y.b && x.p == y.p;
    }
    friend bool operator!=(const Fp2Element& x, const Fp2Element& y) { return !(x == y); }
};

inline bool is_zero(const Fp2Element& x) { return x.is_zero(); }
inline Fp2Element from_int(const Fp2Element& like, long long n) { return Fp2Element(like.p, n, 0); }

inline Fp2Element inverse(const Fp2Element& x) {
    if (x.is_zero()) throw DivisionByZero("inverse of zero in F_" + std::to_string(x.p) + "^2");
    u64 ninv = invmod(x.norm(), x.p);
    Fp2Element c = x.conj();
    return Fp2Element::raw(x.p, mulmod(c.a, ninv, x.p), mulmod(c.b, ninv, x.p));
}
inline Fp2Element operator/(const Fp2Element& x, const Fp2Element& y) { return x * inverse(y); }

inline u64 field_order(const Fp2Element& x) { return x.p * x.p; }
inline u64 field_hash(const Fp2Element& x) { return x.a * x.p + x.b; }

// ----------------------------------------------------------------- finite-field utilities

template <class K>
K field_pow(K base, u64 e) {
    K r = from_int(base, 1);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline bool is_square(const FpElement& x) { return x.is_zero() || jacobi(x.v, x.p) == 1; }

// In F_{p^2} an element is a square iff its norm is a square in F_p.
inline bool is_square(const Fp2Element& x) { return x.is_zero() || jacobi(x.norm(), x.p) == 1; }

inline FpElement random_element(const FpElement& like, std::mt19937_64& rng) {
    return FpElement::raw(like.p, std::uniform_int_distribution<u64>(0, like.p - 1)(rng));
}

inline Fp2Element random_element(const Fp2Element& like, std::mt19937_64& rng) {
    std::uniform_int_distribution<u64> dist(0, like.p - 1);
    u64 a = dist(rng);
    u64 b = dist(rng);
    return Fp2Element::raw(like.p, a, b);
}

/// Tonelli-Shanks square root; empty for non-squares.
template <class K>
std::optional<K> field_sqrt(const K& x, std::mt19937_64& rng) {
    if (x.is_zero()) return x;
    if (!is_square(x)) return std::nullopt;
    const u64 q = field_order(x);
    u64 odd = q - 1;
    int s = 0;
    while ((odd & 1) == 0) { odd >>= 1; ++s; }
    K z = random_element(x, rng);
    while (z.is_zero() || is_square(z)) z = random_element(x, rng);
    K c = field_pow(z, odd);
    K r = field_pow(x, (odd + 1) / 2);
    K t = field_pow(x, odd);
    int m = s;
    const K one = from_int(x, 1);
    while (t != one) {
        int i = 0;
        K tt = t;
        while (tt != one) { tt *= tt; ++i; }
        K b = c;
        for (int j = 0; j < m - i - 1; ++j) b *= b;
        r *= b;
        c = b * b;
        t *= c;
        m = i;
    }
    return r;
}

inline void require_odd_prime(u64 p) {
    if (p < 3 || !is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not an odd prime");
}

/// The smaller square root of -1 modulo p, found as a^((p-1)/4) for the least
/// working a; empty when p = 3 mod 4.
inline std::optional<FpElement> sqrt_minus_one(u64 p) {
    require_odd_prime(p);
    if (p % 4 == 3) return std::nullopt;
    for (u64 a = 2; a < p; ++a) {
        u64 c = powmod(a, (p - 1) / 4, p);
        if (mulmod(c, c, p) == p - 1) return FpElement::raw(p, std::min(c, p - c));
    }
    throw InternalError("no square root of -1 found");
}

// ----------------------------------------------------------------- text form

inline std::string to_string(const QiElement& x) {
    if (x.im.is_zero()) return to_string(x.re);
    return "(" + to_string(x.re) + ")+(" + to_string(x.im) + ")i";
}

/// Parses "n", "n/d" or "(n/d)+(n/d)i" (either part may also be unbracketed).
inline QiElement parse_qi(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s.empty()) throw InvalidArgument("empty Q(i) literal");
    if (s.back() != 'i') return QiElement(parse_rational(s));
    s.pop_back();
    auto strip = [](std::string t) {
        if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
        return t;
    };
    // split at the top-level '+' or '-' separating the real and imaginary parts
    int depth = 0;
    std::size_t split = std::string::npos;
    for (std::size_t k = 0; k < s.size(); ++k) {
        char c = s[k];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if ((c == '+' || c == '-') && depth == 0 && k > 0) split = k;
    }
    if (split == std::string::npos) {
        std::string im = strip(s);
        if (im.empty() || im == "+") return {Rational(0), Rational(1)};
        if (im == "-") return {Rational(0), Rational(-1)};
        return {Rational(0), parse_rational(im)};
    }
    Rational re = parse_rational(strip(s.substr(0, split)));
    std::string im = s.substr(split + 1);
    Rational imv = im.empty() ? Rational(1) : parse_rational(strip(im));
    if (s[split] == '-') imv = -imv;
    return {re, imv};
}

} // namespace mwdep
