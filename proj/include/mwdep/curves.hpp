#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fields.hpp"
#include "gaussian.hpp"

namespace mwdep {

/// Short Weierstrass curve y^2 = x^3 + a*x + b over the field F.
///
/// `cm_d` marks the family y^2 = x^3 - d^2 x, which carries the Z[i]
/// action i.(x, y) = (-x, i*y) whenever the base field contains a square root
/// of -1; that root is stored in `sqrt_minus_one`.
template <class F>
struct WeierstrassCurve {
    F a;
    F b;
    std::optional<i64> cm_d;
    std::optional<F> sqrt_minus_one;

    WeierstrassCurve(F a_, F b_, std::optional<i64> d = std::nullopt, std::optional<F> i_unit = std::nullopt)
        : a(std::move(a_)), b(std::move(b_)), cm_d(d), sqrt_minus_one(std::move(i_unit)) {
        if (is_zero(discriminant_core())) throw InvalidArgument("singular curve: 4A^3 + 27B^2 = 0");
    }

    /// 4A^3 + 27B^2; the discriminant is -16 times this.
    F discriminant_core() const {
        return from_int(a, 4) * a * a * a + from_int(a, 27) * b * b;
    }
    F discriminant() const { return from_int(a, -16) * discriminant_core(); }

    F rhs(const F& x) const { return x * x * x + a * x + b; }

    friend bool operator==(const WeierstrassCurve& l, const WeierstrassCurve& r) {
        return l.a == r.a && l.b == r.b && l.cm_d == r.cm_d && l.sqrt_minus_one == r.sqrt_minus_one;
    }
};

template <class F>
class CurvePoint {
public:
    CurvePoint() = default;   // point at infinity
    CurvePoint(F x, F y) : xy_(std::in_place, std::move(x), std::move(y)) {}

    static CurvePoint infinity() { return {}; }

    bool is_infinity() const { return !xy_.has_value(); }
    const F& x() const { return xy_->first; }
    const F& y() const { return xy_->second; }

    friend bool operator==(const CurvePoint& l, const CurvePoint& r) { return l.xy_ == r.xy_; }
    friend bool operator!=(const CurvePoint& l, const CurvePoint& r) { return !(l == r); }

private:
    std::optional<std::pair<F, F>> xy_;
};

template <class F>
bool on_curve(const WeierstrassCurve<F>& c, const CurvePoint<F>& p) {
    return p.is_infinity() || p.y() * p.y() == c.rhs(p.x());
}

template <class F>
void require_on_curve(const WeierstrassCurve<F>& c, const CurvePoint<F>& p) {
    if (!on_curve(c, p)) throw InvariantViolation("point is not on the curve");
}

template <class F>
CurvePoint<F> negate(const CurvePoint<F>& p) {
    if (p.is_infinity()) return p;
    return {p.x(), -p.y()};
}

namespace detail {

template <class F>
CurvePoint<F> add_unchecked(const WeierstrassCurve<F>& c, const CurvePoint<F>& p, const CurvePoint<F>& q) {
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    F lambda;
    if (p.x() == q.x()) {
        if (is_zero(p.y() + q.y())) return {};
        lambda = (from_int(c.a, 3) * p.x() * p.x() + c.a) / (from_int(c.a, 2) * p.y());
    } else {
        lambda = (q.y() - p.y()) / (q.x() - p.x());
    }
    F x3 = lambda * lambda - p.x() - q.x();
    F y3 = lambda * (p.x() - x3) - p.y();
    return {std::move(x3), std::move(y3)};
}

template <class F, class Bits>
CurvePoint<F> ladder(const WeierstrassCurve<F>& c, const CurvePoint<F>& p, std::size_t nbits, Bits bit) {
    CurvePoint<F> acc;
    for (std::size_t k = nbits; k-- > 0;) {
        acc = add_unchecked(c, acc, acc);
        if (bit(k)) acc = add_unchecked(c, acc, p);
    }
    return acc;
}

} // namespace detail

template <class F>
CurvePoint<F> point_add(const WeierstrassCurve<F>& c, const CurvePoint<F>& p, const CurvePoint<F>& q) {
    require_on_curve(c, p);
    require_on_curve(c, q);
    return detail::add_unchecked(c, p, q);
}

template <class F>
CurvePoint<F> point_sub(const WeierstrassCurve<F>& c, const CurvePoint<F>& p, const CurvePoint<F>& q) {
    return point_add(c, p, negate(q));
}

template <class F>
CurvePoint<F> scalar_mul(const WeierstrassCurve<F>& c, i64 n, const CurvePoint<F>& p) {
    require_on_curve(c, p);
    if (n == 0 || p.is_infinity()) return {};
    const bool neg = n < 0;
    const u64 m = neg ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    const std::size_t nbits = 64 - static_cast<std::size_t>(__builtin_clzll(m));
    CurvePoint<F> r = detail::ladder(c, p, nbits, [m](std::size_t k) { return (m >> k) & 1; });
    return neg ? negate(r) : r;
}

template <class F>
CurvePoint<F> scalar_mul(const WeierstrassCurve<F>& c, const BigInt& n, const CurvePoint<F>& p) {
    require_on_curve(c, p);
    if (n.is_zero() || p.is_infinity()) return {};
    const BigInt m = abs(n);
    CurvePoint<F> r = detail::ladder(c, p, bit_length(m),
                                     [&m](std::size_t k) { return boost::multiprecision::bit_test(m, static_cast<unsigned>(k)); });
    return n.sign() < 0 ? negate(r) : r;
}

template <class F>
bool supports_cm(const WeierstrassCurve<F>& c) {
    return c.cm_d.has_value() && c.sqrt_minus_one.has_value();
}

/// i.(x, y) = (-x, i*y) on y^2 = x^3 - d^2 x.
template <class F>
CurvePoint<F> apply_i(const WeierstrassCurve<F>& c, const CurvePoint<F>& p) {
    if (!supports_cm(c)) throw Unsupported("curve has no Z[i] action over its base field");
    if (p.is_infinity()) return p;
    return {-p.x(), *c.sqrt_minus_one * p.y()};
}

/// (a + bi).P = a.P + b.(i.P)
template <class F>
CurvePoint<F> cm_mul(const WeierstrassCurve<F>& c, const GaussianInt& alpha, const CurvePoint<F>& p) {
    if (!supports_cm(c)) throw Unsupported("cm_mul needs a curve y^2 = x^3 - d^2 x over a field containing i");
    require_on_curve(c, p);
    CurvePoint<F> real_part = scalar_mul(c, alpha.re, p);
    if (alpha.im.is_zero()) return real_part;
    return detail::add_unchecked(c, real_part, scalar_mul(c, alpha.im, apply_i(c, p)));
}

// ----------------------------------------------------------------- the E_d family

inline WeierstrassCurve<Rational> curve_ed_rational(i64 d) {
    if (d < 1) throw InvalidArgument("d must be positive");
    return {Rational(-BigInt(d) * d), Rational(0), d};
}

inline WeierstrassCurve<QiElement> curve_ed_gaussian(i64 d) {
    if (d < 1) throw InvalidArgument("d must be positive");
    return {QiElement(Rational(-BigInt(d) * d)), QiElement(0), d, QiElement::i()};
}

/// E_d over F_p; `s` (a square root of -1 mod p) enables the Z[i] action.
inline WeierstrassCurve<FpElement> curve_ed_fp(i64 d, u64 p, std::optional<FpElement> s = std::nullopt) {
    FpElement dd = fp_from_bigint(p, BigInt(d));
    return {-(dd * dd), FpElement(p, 0), d, s};
}

inline WeierstrassCurve<Fp2Element> curve_ed_fp2(i64 d, u64 p) {
    if (p % 4 != 3) throw InvalidArgument("F_{p^2} = F_p[t]/(t^2+1) needs p = 3 mod 4");
    Fp2Element dd(p, static_cast<i64>(mod_u64(BigInt(d), p)), 0);
    return {-(dd * dd), Fp2Element(p, 0, 0), d, Fp2Element::t(p)};
}

/// {O, (0,0), (d,0), (-d,0)} on E_d over Q.
inline std::vector<CurvePoint<Rational>> two_torsion(i64 d) {
    if (d < 1) throw InvalidArgument("d must be positive");
    return {CurvePoint<Rational>{}, {Rational(0), Rational(0)}, {Rational(d), Rational(0)},
            {Rational(-d), Rational(0)}};
}

inline CurvePoint<QiElement> lift_to_gaussian(const CurvePoint<Rational>& p) {
    if (p.is_infinity()) return {};
    return {QiElement(p.x()), QiElement(p.y())};
}

inline WeierstrassCurve<QiElement> lift_to_gaussian(const WeierstrassCurve<Rational>& c) {
    std::optional<QiElement> i_unit;
    if (c.cm_d) i_unit = QiElement::i();
    return {QiElement(c.a), QiElement(c.b), c.cm_d, i_unit};
}

/// All affine rational points x = m/e^2, y = n/e^3 with |m| <= bound and
/// e^2 <= bound, on a curve with integral coefficients. Sorted by (e, m, y).
inline std::vector<CurvePoint<Rational>> point_search(const WeierstrassCurve<Rational>& c, i64 bound) {
    if (bound < 1) throw InvalidArgument("search bound must be >= 1");
    if (denominator(c.a) != 1 || denominator(c.b) != 1)
        throw Unsupported("point_search needs an integral Weierstrass model");
    const BigInt a = numerator(c.a);
    const BigInt b = numerator(c.b);
    std::vector<CurvePoint<Rational>> out;
    for (i64 e = 1; e * e <= bound; ++e) {
        const BigInt e2 = BigInt(e) * e;
        const BigInt e4 = e2 * e2;
        const BigInt e6 = e4 * e2;
        for (i64 m = -bound; m <= bound; ++m) {
            if (gcd_u64(static_cast<u64>(m < 0 ? -m : m), static_cast<u64>(e)) != 1) continue;
            const BigInt mm(m);
            const BigInt rhs = mm * mm * mm + a * mm * e4 + b * e6;
            BigInt n;
            if (!is_square(rhs, &n)) continue;
            Rational x(mm, e2);
            Rational y(n, e2 * e);
            out.emplace_back(x, y);
            if (!n.is_zero()) out.emplace_back(x, -y);
        }
    }
    return out;
}

// ----------------------------------------------------------------- products

/// Point of a product C_1 x ... x C_g.
template <class F>
using ProductPoint = std::vector<CurvePoint<F>>;

template <class F>
using ProductCurve = std::vector<WeierstrassCurve<F>>;

template <class F>
void require_on_ambient(const ProductCurve<F>& amb, const ProductPoint<F>& p) {
    if (amb.size() != p.size()) throw InvariantViolation("product point has wrong number of components");
    for (std::size_t k = 0; k < p.size(); ++k) require_on_curve(amb[k], p[k]);
}

template <class F>
ProductPoint<F> product_add(const ProductCurve<F>& amb, const ProductPoint<F>& p, const ProductPoint<F>& q) {
    if (p.size() != amb.size() || q.size() != amb.size()) throw InvariantViolation("component count mismatch");
    ProductPoint<F> r;
    r.reserve(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) r.push_back(point_add(amb[k], p[k], q[k]));
    return r;
}

template <class F>
ProductPoint<F> product_negate(const ProductPoint<F>& p) {
    ProductPoint<F> r;
    for (auto& c : p) r.push_back(negate(c));
    return r;
}

template <class F, class Int>
ProductPoint<F> product_mul(const ProductCurve<F>& amb, const Int& n, const ProductPoint<F>& p) {
    if (p.size() != amb.size()) throw InvariantViolation("component count mismatch");
    ProductPoint<F> r;
    for (std::size_t k = 0; k < p.size(); ++k) r.push_back(scalar_mul(amb[k], n, p[k]));
    return r;
}

template <class F>
ProductPoint<F> product_cm_mul(const ProductCurve<F>& amb, const GaussianInt& alpha, const ProductPoint<F>& p) {
    ProductPoint<F> r;
    for (std::size_t k = 0; k < p.size(); ++k) r.push_back(cm_mul(amb[k], alpha, p[k]));
    return r;
}

template <class F>
ProductPoint<F> product_zero(const ProductCurve<F>& amb) {
    return ProductPoint<F>(amb.size());
}

template <class F>
bool is_zero(const ProductPoint<F>& p) {
    return std::all_of(p.begin(), p.end(), [](const CurvePoint<F>& c) { return c.is_infinity(); });
}

} // namespace mwdep
