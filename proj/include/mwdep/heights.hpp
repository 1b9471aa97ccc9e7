#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "places.hpp"

namespace mwdep {

struct HeightValue {
    long double value = 0;
    long double error = 0;
};

/// log max(|num x|, den x); the point at infinity has height 0.
inline long double naive_height(const CurvePoint<Rational>& p) {
    if (p.is_infinity()) return 0;
    const BigInt& n = numerator(p.x());
    const BigInt& d = denominator(p.x());
    return abs(n) > d ? log_abs(n) : log_abs(d);
}

namespace detail {

// y^2 = x^3 + A x + B rescaled to integer coefficients by x -> u^2 x.
struct IntegralModel {
    BigInt a, b, u2;
};

inline IntegralModel integral_model(const WeierstrassCurve<Rational>& c) {
    const BigInt u = lcm(denominator(c.a), denominator(c.b));
    const BigInt u2 = u * u;
    return {numerator(c.a * Rational(u2 * u2)), numerator(c.b * Rational(u2 * u2 * u2)), u2};
}

// K with |a(X,Z) - log gcd(F,G)| <= K for every coprime pair, from
// f1 F - g1 G = 4 D Z^7 and f2 F + g2 G = 4 D X^7, D = 4A^3 + 27B^2.
inline long double height_step_bound(const BigInt& a, const BigInt& b) {
    const BigInt A = abs(a), B = abs(b);
    const BigInt disc = 4 * a * a * a + 27 * b * b;
    const BigInt a3 = a * a * a, b2 = b * b;
    const BigInt sF = 1 + 2 * A + 8 * B + A * A;
    const BigInt sG = 4 + 4 * A + 4 * B;
    const BigInt s1 = 12 + 16 * A + 3 + 5 * A + 27 * B;
    const BigInt s2f = 4 * abs(disc) + 4 * A * A * B + 4 * A * abs(3 * a3 + 22 * b2) + 12 * B * abs(a3 + 8 * b2);
    const BigInt s2g = A * A * B + A * abs(5 * a3 + 32 * b2) + 2 * B * abs(13 * a3 + 96 * b2) + 3 * A * A * abs(a3 + 8 * b2);
    const BigInt upper = std::max(sF, sG);
    const BigInt lower = std::max<BigInt>(s1, s2f + s2g);
    return std::max(log_abs(upper), log_abs(lower));
}

inline bool is_torsion_point(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& p) {
    if (p.is_infinity()) return true;
    // Mazur: a rational torsion point has order at most 12. Reductions at a
    // few good primes rule most orders out before any exact check.
    std::vector<Place> probes;
    for (u64 q : primes_up_to(200)) {
        if (q < 3) continue;
        Place v = Place::rational(q);
        if (!has_good_reduction(c, v)) continue;
        if (!is_zero(p.x()) && valuation(p.x(), v) < 0) continue;
        probes.push_back(v);
        if (probes.size() == 4) break;
    }
    for (i64 m = 1; m <= 12; ++m) {
        if (m == 11) continue;
        bool candidate = true;
        for (auto& v : probes) {
            auto cv = reduce_curve<FpElement>(c, v);
            if (!scalar_mul(cv, m, reduce_point<FpElement>(c, p, v)).is_infinity()) {
                candidate = false;
                break;
            }
        }
        if (candidate && scalar_mul(c, m, p).is_infinity()) return true;
    }
    return false;
}

} // namespace detail

/// 4^-n h(x(2^n P)) computed step by step: each doubling adds an archimedean
/// term (floating, on normalised projective coordinates) and subtracts the
/// exact gcd term obtained from residues modulo powers of 4|4A^3 + 27B^2|.
inline long double doubling_series(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& p, int n) {
    if (p.is_infinity()) return 0;
    const detail::IntegralModel m = detail::integral_model(c);
    const Rational x0 = p.x() * Rational(m.u2);
    BigInt X = numerator(x0), Z = denominator(x0);
    long double h = abs(X) > Z ? log_abs(X) : log_abs(Z);

    const BigInt disc = 4 * m.a * m.a * m.a + 27 * m.b * m.b;
    const BigInt m0 = abs(4 * disc);
    BigInt modulus = 1;
    for (int k = 0; k <= n; ++k) modulus *= m0;
    X = mod_floor(X, modulus);
    Z = mod_floor(Z, modulus);

    long double fx, fz;
    {
        const Rational r = x0;
        if (abs(numerator(r)) >= denominator(r)) {
            fx = numerator(r).sign() < 0 ? -1.0L : 1.0L;
            fz = to_long_double(Rational(denominator(r), numerator(r))) * fx;
        } else {
            fx = to_long_double(r);
            fz = 1.0L;
        }
    }
    const long double fa = to_long_double(Rational(m.a)), fb = to_long_double(Rational(m.b));
    long double weight = 0.25L;
    for (int k = 0; k < n; ++k) {
        // archimedean part
        const long double x2 = fx * fx, z2 = fz * fz;
        const long double F = x2 * x2 - 2 * fa * x2 * z2 - 8 * fb * fx * z2 * fz + fa * fa * z2 * z2;
        const long double G = 4 * fz * (x2 * fx + fa * fx * z2 + fb * z2 * fz);
        const long double scale = std::max(std::fabs(F), std::fabs(G));
        if (scale == 0) throw InternalError("degenerate doubling");
        // exact gcd part
        const BigInt X2 = X * X % modulus, Z2 = Z * Z % modulus;
        const BigInt Fr = mod_floor(X2 * X2 - 2 * m.a * X2 * Z2 - 8 * m.b * X * Z2 % modulus * Z + m.a * m.a * Z2 * Z2, modulus);
        const BigInt Gr = mod_floor(4 * Z * (X2 * X + m.a * X * Z2 + m.b * Z2 * Z), modulus);
        const BigInt g = gcd(gcd(Fr, Gr), m0);
        h += weight * (std::log(scale) - log_abs(g));
        weight /= 4;
        modulus /= g;
        X = mod_floor(Fr / g, modulus);
        Z = mod_floor(Gr / g, modulus);
        fx = F / scale;
        fz = G / scale;
    }
    return h;
}

/// Literal 4^-n h(2^n P) with exact rational doubling (reference only:
/// coordinate size grows like 4^n).
inline long double canonical_height_by_doubling(const WeierstrassCurve<Rational>& c, CurvePoint<Rational> p, int n) {
    for (int k = 0; k < n; ++k) p = point_add(c, p, p);
    return std::ldexp(naive_height(p), -2 * n);
}

inline HeightValue canonical_height(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& p, long double tol) {
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    require_on_curve(c, p);
    if (detail::is_torsion_point(c, p)) return {0, 0};
    const detail::IntegralModel m = detail::integral_model(c);
    const long double k = detail::height_step_bound(m.a, m.b);
    // tail after n steps is at most K / (3 * 4^n); keep half of tol for it
    int n = 0;
    while (k / (3 * std::ldexp(1.0L, 2 * n)) > tol / 2) {
        if (++n > 64) throw ResourceLimit("tolerance needs more than 64 doubling steps");
    }
    const long double tail = k / (3 * std::ldexp(1.0L, 2 * n));
    const long double v = doubling_series(c, p, n);
    return {v, tail + 1e-12L * (1 + std::fabs(v))};
}

// ----------------------------------------------------------------- products

inline HeightValue canonical_height(const ProductCurve<Rational>& amb, const ProductPoint<Rational>& p, long double tol) {
    require_on_ambient(amb, p);
    HeightValue out;
    const long double part = tol / static_cast<long double>(std::max<std::size_t>(1, amb.size()));
    for (std::size_t k = 0; k < amb.size(); ++k) {
        HeightValue h = canonical_height(amb[k], p[k], part);
        out.value += h.value;
        out.error += h.error;
    }
    return out;
}

/// (h(P+Q) - h(P) - h(Q)) / 2 with the combined error.
inline HeightValue height_pairing(const ProductCurve<Rational>& amb, const ProductPoint<Rational>& p,
                                  const ProductPoint<Rational>& q, long double tol) {
    HeightValue s = canonical_height(amb, product_add(amb, p, q), tol);
    HeightValue a = canonical_height(amb, p, tol);
    HeightValue b = canonical_height(amb, q, tol);
    return {(s.value - a.value - b.value) / 2, (s.error + a.error + b.error) / 2};
}

inline HeightValue height_pairing(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& p,
                                  const CurvePoint<Rational>& q, long double tol) {
    return height_pairing(ProductCurve<Rational>{c}, {p}, {q}, tol);
}

// ----------------------------------------------------------------- Gram matrices

struct HeightGram {
    std::vector<ProductPoint<Rational>> basis;
    std::vector<std::vector<long double>> matrix;
    long double entry_error = 0;        // bound on every entry's error
    long double lambda_min_lower = 0;   // <= smallest eigenvalue of the true matrix
    long double determinant = 0;
    long double determinant_error = 0;
};

namespace detail {

// x^T M x > 0 for all x != 0, by exact LDL^T.
inline bool positive_definite(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return true;
}

inline long double gershgorin_lower(const std::vector<std::vector<long double>>& m) {
    long double lo = INFINITY;
    for (std::size_t i = 0; i < m.size(); ++i) {
        long double r = 0;
        for (std::size_t j = 0; j < m.size(); ++j)
            if (j != i) r += std::fabs(m[i][j]);
        lo = std::min(lo, m[i][i] - r);
    }
    return lo;
}

inline long double determinant(std::vector<std::vector<long double>> m) {
    const std::size_t n = m.size();
    long double det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
        if (m[piv][k] == 0) return 0;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        det *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            long double f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

} // namespace detail

/// Smallest-eigenvalue lower bound for a symmetric matrix known up to
/// `entry_error` per entry: exact bisection on positive definiteness of
/// M - tI (dimension <= 6) or Gershgorin discs, then Weyl's n*error margin.
inline long double lambda_min_lower_bound(const std::vector<std::vector<long double>>& m, long double entry_error) {
    const std::size_t n = m.size();
    if (n == 0) return INFINITY;
    long double lo;
    if (n <= 6) {
        std::vector<std::vector<Rational>> q(n, std::vector<Rational>(n));
        long double hi = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                q[i][j] = Rational(static_cast<double>(m[i][j]));
                hi = std::max(hi, m[i][i]);
            }
        entry_error += 1e-15L * (1 + hi);   // double rounding of the entries
        auto shifted_pd = [&](long double t) {
            auto s = q;
            for (std::size_t i = 0; i < n; ++i) s[i][i] -= Rational(static_cast<double>(t));
            return detail::positive_definite(s);
        };
        if (!shifted_pd(0)) {
            lo = -INFINITY;
        } else {
            long double a = 0, b = hi;
            for (int it = 0; it < 80 && b - a > 1e-14L * (1 + hi); ++it) {
                long double mid = (a + b) / 2;
                (shifted_pd(mid) ? a : b) = mid;
            }
            lo = a;
        }
    } else {
        lo = detail::gershgorin_lower(m);
    }
    return lo - static_cast<long double>(n) * entry_error;
}

inline HeightGram height_gram(const ProductCurve<Rational>& amb, const std::vector<ProductPoint<Rational>>& basis,
                              long double tol) {
    HeightGram g;
    g.basis = basis;
    const std::size_t r = basis.size();
    g.matrix.assign(r, std::vector<long double>(r, 0));
    std::vector<HeightValue> diag;
    for (auto& b : basis) diag.push_back(canonical_height(amb, b, tol));
    for (std::size_t i = 0; i < r; ++i) {
        g.matrix[i][i] = diag[i].value;
        g.entry_error = std::max(g.entry_error, diag[i].error);
        for (std::size_t j = i + 1; j < r; ++j) {
            HeightValue s = canonical_height(amb, product_add(amb, basis[i], basis[j]), tol);
            long double v = (s.value - diag[i].value - diag[j].value) / 2;
            g.matrix[i][j] = g.matrix[j][i] = v;
            g.entry_error = std::max(g.entry_error, (s.error + diag[i].error + diag[j].error) / 2);
        }
    }
    g.lambda_min_lower = lambda_min_lower_bound(g.matrix, g.entry_error);
    g.determinant = detail::determinant(g.matrix);
    // |det(M + E) - det(M)| <= n * e * (|M| + e)^(n-1) with |.| the max row sum
    long double norm = 0;
    for (auto& row : g.matrix) {
        long double s = 0;
        for (auto v : row) s += std::fabs(v);
        norm = std::max(norm, s);
    }
    g.determinant_error = r == 0 ? 0
                                 : static_cast<long double>(r) * g.entry_error *
                                       std::pow(norm + static_cast<long double>(r) * g.entry_error, static_cast<long double>(r - 1));
    return g;
}

struct GramBound {
    HeightGram gram;
    long double bound = 0;   // |n_i| <= bound whenever cP = sum n_i P_i
};

/// Gram matrix of `basis` and C = c * sqrt(h(P) / lambda_min).
inline GramBound gram_and_bound(const ProductCurve<Rational>& amb, const ProductPoint<Rational>& p,
                                const std::vector<ProductPoint<Rational>>& basis, i64 c, long double tol) {
    if (c < 1) throw InvalidArgument("torsion order must be >= 1");
    GramBound out{height_gram(amb, basis, tol), 0};
    if (!basis.empty() && !(out.gram.lambda_min_lower > 0))
        throw DegenerateBasis("height Gram matrix is not certifiably positive definite");
    HeightValue h = canonical_height(amb, p, tol);
    out.bound = basis.empty() ? 0 : c * std::sqrt(std::max(0.0L, h.value + h.error) / out.gram.lambda_min_lower);
    return out;
}

namespace detail {

inline std::vector<long double> solve_spd(std::vector<std::vector<long double>> m, std::vector<long double> b) {
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
        std::swap(m[piv], m[k]);
        std::swap(b[piv], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            long double f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        long double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * x[j];
        x[k] = s / m[k][k];
    }
    return x;
}

} // namespace detail

/// Integers n with cP = sum n_i basis_i, or empty when no such vector exists.
/// The real solution of the Gram system only proposes the candidate; the
/// answer is always confirmed by exact point arithmetic.
inline std::optional<std::vector<BigInt>> solve_coefficients(const ProductCurve<Rational>& amb, const ProductPoint<Rational>& p,
                                                            const std::vector<ProductPoint<Rational>>& basis, i64 c,
                                                            long double tol) {
    GramBound gb = gram_and_bound(amb, p, basis, c, tol);
    const ProductPoint<Rational> cp = product_mul(amb, c, p);
    const std::size_t r = basis.size();
    if (r == 0) {
        if (is_zero(cp)) return std::vector<BigInt>{};
        return std::nullopt;
    }
    std::vector<long double> rhs(r);
    long double rhs_error = 0;
    for (std::size_t j = 0; j < r; ++j) {
        HeightValue b = height_pairing(amb, p, basis[j], tol);
        rhs[j] = c * b.value;
        rhs_error = std::max(rhs_error, c * b.error);
    }
    std::vector<long double> x = detail::solve_spd(gb.gram.matrix, rhs);
    long double xnorm = 0;
    for (auto v : x) xnorm += v * v;
    xnorm = std::sqrt(xnorm);
    const long double rr = std::sqrt(static_cast<long double>(r));
    const long double err =
        (rr * rhs_error + static_cast<long double>(r) * gb.gram.entry_error * xnorm) / gb.gram.lambda_min_lower + 1e-9L;
    if (err >= 0.25L) throw ToleranceTooCoarse("coefficient error bound " + std::to_string(static_cast<double>(err)) +
                                               " leaves the rounding ambiguous; tighten tol");
    std::vector<BigInt> n(r);
    for (std::size_t j = 0; j < r; ++j) {
        long double nearest = std::nearbyint(x[j]);
        if (std::fabs(x[j] - nearest) > err) return std::nullopt;
        n[j] = BigInt(static_cast<long long>(nearest));
    }
    ProductPoint<Rational> sum = product_zero(amb);
    for (std::size_t j = 0; j < r; ++j) sum = product_add(amb, sum, product_mul(amb, n[j], basis[j]));
    if (sum != cp) return std::nullopt;
    return n;
}

inline std::optional<std::vector<BigInt>> solve_coefficients(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& p,
                                                            const std::vector<CurvePoint<Rational>>& basis, i64 tors,
                                                            long double tol) {
    std::vector<ProductPoint<Rational>> b;
    for (auto& q : basis) b.push_back({q});
    return solve_coefficients(ProductCurve<Rational>{c}, {p}, b, tors, tol);
}

} // namespace mwdep
