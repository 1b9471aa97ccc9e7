#pragma once

#include <string>
#include <type_traits>
#include <vector>

#include "curves.hpp"

namespace mwdep {

/// A prime v above the rational prime p: the rational place of Q, one of the
/// two split places of Q(i) (i -> s mod p), or the inert place (residue field
/// F_p[t]/(t^2+1), i -> t).
struct Place {
    enum class Kind { rational, split, inert };

    u64 p = 0;
    Kind kind = Kind::rational;
    u64 s = 0;   // split places only

    static Place rational(u64 p) {
        require_odd_prime(p);
        return {p, Kind::rational, 0};
    }
    static Place split(u64 p, u64 s) {
        require_odd_prime(p);
        if (p % 4 != 1) throw InvalidArgument("split place needs p = 1 mod 4");
        if (mulmod(s % p, s % p, p) != p - 1) throw InvalidArgument("s is not a square root of -1 mod p");
        return {p, Kind::split, s % p};
    }
    static Place inert(u64 p) {
        require_odd_prime(p);
        if (p % 4 != 3) throw InvalidArgument("inert place needs p = 3 mod 4");
        return {p, Kind::inert, 0};
    }

    /// The Gaussian prime generating this place (split and inert only).
    GaussianInt uniformizer() const {
        if (kind == Kind::inert) return GaussianInt(BigInt(p));
        if (kind == Kind::split) return gi_gcd(GaussianInt(BigInt(p)), GaussianInt(BigInt(s), -1));
        throw Unsupported("rational place has no Gaussian uniformizer");
    }

    friend bool operator==(const Place& l, const Place& r) { return l.p == r.p && l.kind == r.kind && l.s == r.s; }
};

inline std::string kind_name(Place::Kind k) {
    switch (k) {
    case Place::Kind::rational: return "rational";
    case Place::Kind::split: return "split";
    case Place::Kind::inert: return "inert";
    }
    return "?";
}

inline std::string to_string(const Place& v) {
    std::string s = kind_name(v.kind) + "(" + std::to_string(v.p);
    if (v.kind == Place::Kind::split) s += ", s=" + std::to_string(v.s);
    return s + ")";
}

/// Places of Q(i) above p: both split places (s < p - s first) or the inert one.
inline std::vector<Place> gaussian_places_above(u64 p) {
    require_odd_prime(p);
    if (p % 4 == 3) return {Place::inert(p)};
    u64 s = sqrt_minus_one(p)->v;
    return {Place::split(p, s), Place::split(p, p - s)};
}

// ----------------------------------------------------------------- valuations and residues

inline int valuation_p(BigInt n, u64 p) {
    if (n.is_zero()) throw InvalidArgument("valuation of zero");
    int e = 0;
    const BigInt bp(p);
    while (n % bp == 0) { n /= bp; ++e; }
    return e;
}

inline int valuation(const Rational& x, const Place& v) {
    return valuation_p(numerator(x), v.p) - valuation_p(denominator(x), v.p);
}

namespace detail {

// x = alpha / n with alpha in Z[i], n > 0
inline std::pair<GaussianInt, BigInt> clear_denominators(const QiElement& x) {
    BigInt n = lcm(denominator(x.re), denominator(x.im));
    return {GaussianInt(numerator(x.re) * (n / denominator(x.re)), numerator(x.im) * (n / denominator(x.im))), n};
}

inline bool in_place_ideal(const GaussianInt& a, const Place& v) {
    if (v.kind == Place::Kind::inert) return mod_u64(a.re, v.p) == 0 && mod_u64(a.im, v.p) == 0;
    return (mod_u64(a.re, v.p) + mulmod(mod_u64(a.im, v.p), v.s, v.p)) % v.p == 0;
}

inline int gaussian_valuation(GaussianInt a, const Place& v) {
    if (a.is_zero()) throw InvalidArgument("valuation of zero");
    const GaussianInt pi = v.uniformizer();
    int e = 0;
    while (in_place_ideal(a, v)) {
        a = gi_divexact(a, pi);
        ++e;
    }
    return e;
}

template <class K>
K make_residue(const Place& v, u64 re, u64 im) {
    if constexpr (std::is_same_v<K, FpElement>) {
        if (v.kind == Place::Kind::inert) throw InvalidArgument("inert residue field is F_{p^2}");
        if (im != 0 && v.kind != Place::Kind::split) throw InvalidArgument("i has no image at a rational place");
        return FpElement::raw(v.p, (re + mulmod(im, v.s, v.p)) % v.p);
    } else {
        static_assert(std::is_same_v<K, Fp2Element>);
        if (v.kind != Place::Kind::inert) throw InvalidArgument("F_{p^2} residues only at inert places");
        return Fp2Element::raw(v.p, re, im);
    }
}

} // namespace detail

inline int valuation(const QiElement& x, const Place& v) {
    if (x.is_zero()) throw InvalidArgument("valuation of zero");
    if (v.kind == Place::Kind::rational) {
        if (!x.im.is_zero()) throw InvalidArgument("Q(i) element at a rational place");
        return valuation(x.re, v);
    }
    auto [alpha, n] = detail::clear_denominators(x);
    return detail::gaussian_valuation(alpha, v) - valuation_p(n, v.p);
}

/// Image of a v-integral rational in the residue field K.
template <class K>
K residue(const Rational& x, const Place& v) {
    const BigInt& num = numerator(x);
    const BigInt& den = denominator(x);
    u64 d = mod_u64(den, v.p);
    if (d == 0) throw PreconditionFailure("rational is not integral at " + to_string(v));
    u64 val = mulmod(mod_u64(num, v.p), invmod(d, v.p), v.p);
    return detail::make_residue<K>(v, val, 0);
}

/// Image of a v-integral element of Q(i) in the residue field K.
template <class K>
K residue(const QiElement& x, const Place& v) {
    if (x.im.is_zero()) return residue<K>(x.re, v);
    if (v.kind == Place::Kind::rational) throw InvalidArgument("Q(i) element at a rational place");
    auto [alpha, n] = detail::clear_denominators(x);
    const int k = valuation_p(n, v.p);
    if (!x.is_zero() && valuation(x, v) < 0) throw PreconditionFailure("element is not integral at " + to_string(v));
    // x = (alpha / pi^k) / (conj-part^k * n / p^k)
    const GaussianInt pi = v.uniformizer();
    GaussianInt num = alpha;
    GaussianInt den(n);
    for (int j = 0; j < k; ++j) {
        num = gi_divexact(num, pi);
        den = gi_divexact(den, pi);
    }
    K nr = detail::make_residue<K>(v, mod_u64(num.re, v.p), mod_u64(num.im, v.p));
    K dr = detail::make_residue<K>(v, mod_u64(den.re, v.p), mod_u64(den.im, v.p));
    return nr / dr;
}

/// Good reduction: p odd, coefficients v-integral and 4A^3 + 27B^2 a v-unit.
/// For the E_d family this is exactly p not dividing 2d.
template <class F>
bool has_good_reduction(const WeierstrassCurve<F>& c, const Place& v) {
    if (v.p == 2) return false;
    if (c.cm_d) return *c.cm_d % static_cast<i64>(v.p) != 0;
    auto integral = [&](const F& x) { return is_zero(x) || valuation(x, v) >= 0; };
    if (!integral(c.a) || !integral(c.b)) return false;
    return valuation(c.discriminant_core(), v) == 0;
}

template <class F>
void require_good_reduction(const WeierstrassCurve<F>& c, const Place& v) {
    if (!has_good_reduction(c, v)) throw PreconditionFailure("curve has bad reduction at " + to_string(v));
}

template <class K, class F>
WeierstrassCurve<K> reduce_curve(const WeierstrassCurve<F>& c, const Place& v) {
    require_good_reduction(c, v);
    std::optional<K> i_unit;
    if (c.cm_d) {
        if (v.kind == Place::Kind::split) i_unit = detail::make_residue<K>(v, 0, 1);
        if (v.kind == Place::Kind::inert) i_unit = detail::make_residue<K>(v, 0, 1);
    }
    return {residue<K>(c.a, v), residue<K>(c.b, v), c.cm_d, i_unit};
}

/// Reduction map r_v. Points with v(x) < 0 reduce to infinity.
template <class K, class F>
CurvePoint<K> reduce_point(const WeierstrassCurve<F>& c, const CurvePoint<F>& pt, const Place& v) {
    require_good_reduction(c, v);
    if (pt.is_infinity()) return {};
    require_on_curve(c, pt);
    if (!is_zero(pt.x()) && valuation(pt.x(), v) < 0) return {};
    return {residue<K>(pt.x(), v), residue<K>(pt.y(), v)};
}

template <class K, class F>
ProductCurve<K> reduce_ambient(const ProductCurve<F>& amb, const Place& v) {
    ProductCurve<K> out;
    for (auto& c : amb) out.push_back(reduce_curve<K>(c, v));
    return out;
}

template <class K, class F>
ProductPoint<K> reduce_product(const ProductCurve<F>& amb, const ProductPoint<F>& pt, const Place& v) {
    if (amb.size() != pt.size()) throw InvariantViolation("component count mismatch");
    ProductPoint<K> out;
    for (std::size_t k = 0; k < pt.size(); ++k) out.push_back(reduce_point<K>(amb[k], pt[k], v));
    return out;
}

/// Calls f.template operator()<K>() with K the residue field type at v.
template <class Fn>
decltype(auto) with_residue_field(const Place& v, Fn&& f) {
    if (v.kind == Place::Kind::inert) return f.template operator()<Fp2Element>();
    return f.template operator()<FpElement>();
}

} // namespace mwdep
