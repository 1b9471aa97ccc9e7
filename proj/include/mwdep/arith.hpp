#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "errors.hpp"

namespace mwdep {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_zero(const BigInt& x) { return x.is_zero(); }
inline bool is_zero(const Rational& x) { return x.is_zero(); }

inline BigInt abs(const BigInt& x) { return x.sign() < 0 ? BigInt(-x) : x; }

// Floor division and non-negative remainder for BigInt (the built-in
// operators truncate toward zero).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divide_qr(a, b, q, r);
    if (!r.is_zero() && ((r.sign() < 0) != (b.sign() < 0))) q -= 1;
    return q;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r.sign() < 0) r += abs(m);
    return r;
}

inline u64 mod_u64(const BigInt& a, u64 p) {
    return static_cast<u64>(mod_floor(a, BigInt(p)));
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    return abs(a / gcd(a, b) * b);
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline BigInt parse_bigint(std::string_view s) {
    std::string t(s);
    std::size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
    if (i == t.size()) throw InvalidArgument("empty integer literal '" + t + "'");
    for (std::size_t j = i; j < t.size(); ++j)
        if (t[j] < '0' || t[j] > '9') throw InvalidArgument("bad integer literal '" + t + "'");
    if (t[0] == '+') t.erase(0, 1);
    return BigInt(t);
}

// Accepts "n" or "n/d".
inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(s));
    BigInt n = parse_bigint(s.substr(0, slash));
    BigInt d = parse_bigint(s.substr(slash + 1));
    if (d.is_zero()) throw InvalidArgument("zero denominator in '" + std::string(s) + "'");
    return Rational(n, d);
}

inline std::size_t bit_length(const BigInt& x) {
    if (x.is_zero()) return 0;
    return mpz_sizeinbase(x.backend().data(), 2);
}

// Natural log of |x|; -inf for zero.
inline long double log_abs(const BigInt& x) {
    if (x.is_zero()) return -INFINITY;
    std::size_t bits = bit_length(x);
    if (bits <= 64) {
        BigInt a = abs(x);
        return std::log(static_cast<long double>(static_cast<u64>(a)));
    }
    std::size_t shift = bits - 64;
    BigInt top = abs(x) >> shift;
    return std::log(static_cast<long double>(static_cast<u64>(top))) +
           static_cast<long double>(shift) * std::log(2.0L);
}

// |x| * 2^-shift as long double, for projective normalisation of huge values.
inline long double scaled_abs(const BigInt& x, std::size_t shift) {
    BigInt a = abs(x);
    std::size_t bits = bit_length(a);
    if (bits <= 64) return std::ldexp(static_cast<long double>(static_cast<u64>(a)), -static_cast<int>(shift));
    std::size_t drop = bits - 64;
    long double top = static_cast<long double>(static_cast<u64>(a >> drop));
    return std::ldexp(top, static_cast<int>(drop) - static_cast<int>(shift));
}

inline long double to_long_double(const BigInt& x) {
    long double v = scaled_abs(x, 0);
    return x.sign() < 0 ? -v : v;
}

inline long double to_long_double(const Rational& q) {
    const BigInt n = numerator(q);
    const BigInt d = denominator(q);
    std::size_t shift = std::max(bit_length(n), bit_length(d));
    shift = shift > 64 ? shift - 64 : 0;
    long double v = scaled_abs(n, shift) / scaled_abs(d, shift);
    return n.sign() < 0 ? -v : v;
}

inline bool is_square(const BigInt& x, BigInt* root = nullptr) {
    if (x.sign() < 0) return false;
    BigInt r = boost::multiprecision::sqrt(x);
    if (r * r != x) return false;
    if (root) *root = r;
    return true;
}

// ---------------------------------------------------------------- word-size

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (r != 1) throw DivisionByZero("element not invertible modulo " + std::to_string(m));
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) { a %= b; std::swap(a, b); }
    return a;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    constexpr u64 trial_limit = 1'000'000;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    if (n <= trial_limit * trial_limit && n < (1ULL << 40)) {
        for (u64 q = 17; q * q <= n; q += 2)
            if (n % q == 0) return false;
        return true;
    }
    // strong pseudoprime test; these bases are deterministic below 2^64
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<std::pair<u64, int>> factor_u64(u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) { n /= q; ++e; }
        out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Trial-division factorisation of |n| for n != 0 (desk-scale inputs only).
inline std::vector<std::pair<BigInt, int>> factor_bigint(BigInt n) {
    if (n.is_zero()) throw InvalidArgument("cannot factor zero");
    n = abs(n);
    std::vector<std::pair<BigInt, int>> out;
    for (BigInt q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
        if (n % q != 0) continue;
        int e = 0;
        while (n % q == 0) { n /= q; ++e; }
        out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Jacobi symbol (a/n) for odd n.
inline int jacobi(u64 a, u64 n) {
    a %= n;
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            u64 r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

inline u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline std::vector<u64> primes_up_to(u64 bound) {
    std::vector<u64> out;
    if (bound < 2) return out;
    std::vector<bool> sieve(bound + 1, true);
    for (u64 i = 2; i <= bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) sieve[j] = false;
    }
    return out;
}

} // namespace mwdep
