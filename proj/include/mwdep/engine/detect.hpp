#pragma once

#include "../heights.hpp"
#include "membership.hpp"

namespace mwdep {

/// gcd of |E(F_p)| over the first `samples` good primes: a multiple of |E(Q)_tors|.
inline u64 torsion_order_estimate(const WeierstrassCurve<Rational>& c, int samples) {
    if (samples < 3) throw InvalidArgument("need at least 3 sample primes");
    u64 g = 0;
    int used = 0;
    for (u64 p = 3; used < samples; p += 2) {
        if (!is_prime(p)) continue;
        Place v = Place::rational(p);
        if (!has_good_reduction(c, v)) continue;
        g = gcd_u64(g, group_order(reduce_curve<FpElement>(c, v)));
        ++used;
    }
    return g;
}

/// Rational torsion points among the search results (orders checked exactly).
inline std::vector<CurvePoint<Rational>> small_torsion_points(const WeierstrassCurve<Rational>& c, i64 bound) {
    std::vector<CurvePoint<Rational>> out{CurvePoint<Rational>{}};
    for (auto& p : point_search(c, bound))
        if (detail::is_torsion_point(c, p)) out.push_back(p);
    return out;
}

/// Exact membership of P in Lambda + torsion from height coordinates in a
/// Z-basis of c.A(Q), refined to exact membership where the torsion part can
/// be absorbed, plus the reduction scan as cross-check.
inline EvidenceReport detect(const ProductPoint<Rational>& p, const LambdaSpec<Rational>& lambda,
                             const std::vector<ProductPoint<Rational>>& basis, i64 c, u64 prime_bound, long double tol,
                             u64 cap = 1'000'000) {
    if (lambda.ring != Ring::integers) throw Unsupported("detect over Q works with Z-spans");
    lambda.validate();
    const ProductCurve<Rational>& amb = lambda.ambient;
    require_on_ambient(amb, p);
    for (auto& b : basis) require_on_ambient(amb, b);

    auto coords = [&](const ProductPoint<Rational>& q) {
        auto n = solve_coefficients(amb, q, basis, c, tol);
        if (!n) throw DegenerateInput("basis does not span c.A(Q): a point has no integral coordinates");
        return *n;
    };
    const std::vector<BigInt> target = coords(p);
    Matrix<BigInt> rows;
    for (auto& g : lambda.generators) rows.push_back(coords(g));

    EvidenceReport rep = scan(p, lambda, prime_bound, cap);
    rep.instance = "detect";
    rep.parameters["c"] = c;
    rep.parameters["tol"] = static_cast<double>(tol);
    rep.parameters["basis_size"] = basis.size();

    auto text = [](const std::vector<BigInt>& v) {
        std::vector<std::string> s;
        for (auto& x : v) s.push_back(to_string(x));
        return s;
    };
    rep.certificate["target_coordinates"] = text(target);
    nlohmann::json gcoords = nlohmann::json::array();
    for (auto& r : rows) gcoords.push_back(text(r));
    rep.certificate["generator_coordinates"] = gcoords;

    auto k = solve_in_span(rows, target);
    if (!k) {
        rep.verdict = Verdict::exact_non_member_by_heights;
        rep.certificate["method"] = "c.P has integral basis coordinates outside the span of those of c.Lambda";
        return rep;
    }
    // P - sum k_j L_j is torsion; try to absorb it with relations of Lambda
    auto offset = [&](const std::vector<BigInt>& coeff) {
        ProductPoint<Rational> t = p;
        for (std::size_t j = 0; j < coeff.size(); ++j)
            t = product_add(amb, t, product_negate(product_mul(amb, coeff[j], lambda.generators[j])));
        return t;
    };
    std::vector<BigInt> coeff = *k;
    ProductPoint<Rational> t = offset(coeff);
    if (!is_zero(t)) {
        // torsion inside Lambda: images of the relation lattice of the coordinates
        std::vector<ProductPoint<Rational>> tors_gens;
        Matrix<BigInt> rel;
        for (auto& x : relation_basis(rows, basis.size())) {
            ProductPoint<Rational> s = product_zero(amb);
            for (std::size_t j = 0; j < x.size(); ++j) s = product_add(amb, s, product_mul(amb, x[j], lambda.generators[j]));
            if (is_zero(s)) continue;
            tors_gens.push_back(s);
            rel.push_back(x);
        }
        // the torsion subgroup is tiny: close it up by repeated addition
        std::vector<std::pair<ProductPoint<Rational>, std::vector<BigInt>>> closure{{product_zero(amb), std::vector<BigInt>(lambda.generators.size(), 0)}};
        for (std::size_t g = 0; g < tors_gens.size(); ++g) {
            for (std::size_t idx = 0; idx < closure.size() && closure.size() <= 64; ++idx) {
                auto [pt, cf] = closure[idx];
                ProductPoint<Rational> nxt = product_add(amb, pt, tors_gens[g]);
                std::vector<BigInt> ncf = cf;
                for (std::size_t j = 0; j < ncf.size(); ++j) ncf[j] += rel[g][j];
                bool seen = false;
                for (auto& e : closure) seen = seen || e.first == nxt;
                if (!seen) closure.emplace_back(nxt, ncf);
            }
        }
        for (auto& [pt, cf] : closure)
            if (pt == t) {
                for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] += cf[j];
                t = offset(coeff);
                break;
            }
    }
    rep.certificate["lambda_coefficients"] = text(coeff);
    if (is_zero(t)) {
        rep.verdict = Verdict::exact_member;
        rep.certificate["method"] = "P = sum k_j L_j verified by exact point arithmetic";
        if (rep.first_witness_prime) rep.consistent = false;
    } else {
        rep.verdict = Verdict::member_mod_torsion;
        rep.certificate["method"] = "c.P = sum k_j c.L_j exactly; P - sum k_j L_j is torsion outside Lambda";
        std::vector<std::string> tt;
        for (auto& q : t) tt.push_back(q.is_infinity() ? "infinity" : "(" + to_string(q.x()) + ", " + to_string(q.y()) + ")");
        rep.certificate["torsion_offset"] = tt;
    }
    return rep;
}

struct PlaceSearch {
    std::vector<Place> places;
    DensityEstimate density;
};

namespace detail {

inline u64 strip_prime(u64 n, u64 l) {
    while (n % l == 0) n /= l;
    return n;
}

} // namespace detail

/// Good places where the l-primary part of every r_v(Q) vanishes.
inline PlaceSearch theorem33_search(const WeierstrassCurve<Rational>& c, const std::vector<CurvePoint<Rational>>& points,
                                    u64 l, u64 prime_bound) {
    if (!is_prime(l)) throw InvalidArgument("l must be prime");
    PlaceSearch out;
    out.density.condition = "l-primary part of r_v(Q) vanishes for every Q, l = " + std::to_string(l);
    for (u64 p : primes_up_to(prime_bound)) {
        if (p == 2) continue;
        Place v = Place::rational(p);
        if (!has_good_reduction(c, v)) continue;
        auto cv = reduce_curve<FpElement>(c, v);
        const u64 cof = detail::strip_prime(group_order(cv), l);
        bool ok = true;
        for (auto& q : points)
            ok = ok && scalar_mul(cv, static_cast<i64>(cof), reduce_point<FpElement>(c, q, v)).is_infinity();
        ++out.density.tested;
        if (ok) {
            ++out.density.satisfying;
            out.places.push_back(v);
        }
    }
    return out;
}

/// Good places where the l-primary part of r_v(P_k) equals r_v(T_k) for every pair.
inline PlaceSearch theorem36_search(const WeierstrassCurve<Rational>& c, const std::vector<CurvePoint<Rational>>& points,
                                    const std::vector<CurvePoint<Rational>>& targets, u64 l, int m, u64 prime_bound) {
    if (!is_prime(l)) throw InvalidArgument("l must be prime");
    if (points.size() != targets.size()) throw InvalidArgument("one torsion target per point");
    BigInt lm = 1;
    for (int k = 0; k < m; ++k) lm *= l;
    for (auto& t : targets)
        if (!scalar_mul(c, lm, t).is_infinity()) throw Unsupported("target is not a rational l^m-torsion point");
    PlaceSearch out;
    out.density.condition = "l-primary part of r_v(P) equals r_v(T), l = " + std::to_string(l);
    for (u64 p : primes_up_to(prime_bound)) {
        if (p == 2) continue;
        Place v = Place::rational(p);
        if (!has_good_reduction(c, v)) continue;
        auto cv = reduce_curve<FpElement>(c, v);
        const u64 cof = detail::strip_prime(group_order(cv), l);
        bool ok = true;
        for (std::size_t k = 0; k < points.size() && ok; ++k) {
            auto diff = point_sub(cv, reduce_point<FpElement>(c, points[k], v), reduce_point<FpElement>(c, targets[k], v));
            ok = scalar_mul(cv, static_cast<i64>(cof), diff).is_infinity();
        }
        ++out.density.tested;
        if (ok) {
            ++out.density.satisfying;
            out.places.push_back(v);
        }
    }
    return out;
}

} // namespace mwdep
