#include <gtest/gtest.h>

#include <random>

#include "mwdep/places.hpp"

using namespace mwdep;

namespace {

using Pt = CurvePoint<FpElement>;

// Affine chord-and-tangent law on y^2 = x^3 + a x + b mod p with plain
// integers, kept separate from the library code it checks.
struct RefPoint {
    bool inf;
    long long x, y;
};

long long md(long long v, long long p) { return ((v % p) + p) % p; }
long long inv(long long v, long long p) {
    long long r = 1, e = p - 2, b = md(v, p);
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

RefPoint ref_add(RefPoint P, RefPoint Q, long long a, long long p) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    long long lam;
    if (P.x == Q.x) {
        if (md(P.y + Q.y, p) == 0) return {true, 0, 0};
        lam = md((3 * P.x % p * P.x + a) % p * inv(2 * P.y, p), p);
    } else {
        lam = md(md(Q.y - P.y, p) * inv(Q.x - P.x, p), p);
    }
    long long x = md(lam * lam - P.x - Q.x, p);
    long long y = md(lam * md(P.x - x, p) - P.y, p);
    return {false, x, y};
}

std::vector<RefPoint> ref_points(long long a, long long b, long long p) {
    std::vector<RefPoint> out{{true, 0, 0}};
    for (long long x = 0; x < p; ++x)
        for (long long y = 0; y < p; ++y)
            if (md(y * y - x * x % p * x - a * x - b, p) == 0) out.push_back({false, x, y});
    return out;
}

Pt to_lib(const RefPoint& r, u64 p) {
    if (r.inf) return {};
    return {FpElement(p, r.x), FpElement(p, r.y)};
}

const CurvePoint<Rational> Q1{Rational(-2), Rational(48)};
const CurvePoint<Rational> Q2{Rational(-16), Rational(120)};

} // namespace

TEST(PointAdd, SpecExamples) {
    auto e34 = curve_ed_rational(34);
    EXPECT_EQ(point_add(e34, Q1, CurvePoint<Rational>{}), Q1);
    CurvePoint<Rational> t{Rational(0), Rational(0)};
    EXPECT_TRUE(point_add(e34, t, t).is_infinity());

    auto e1 = curve_ed_fp(1, 5);
    Pt a{FpElement(5, 2), FpElement(5, 1)}, b{FpElement(5, 3), FpElement(5, 2)};
    RefPoint ra{false, 2, 1}, rb{false, 3, 2};
    EXPECT_EQ(point_add(e1, a, b), to_lib(ref_add(ra, rb, -1, 5), 5));

    CurvePoint<Rational> off{Rational(1), Rational(1)};
    EXPECT_THROW(point_add(e34, off, Q1), InvariantViolation);
}

TEST(PointAdd, ExhaustiveTables) {
    for (u64 p : {5ull, 13ull, 17ull}) {
        auto c = curve_ed_fp(1, p);
        auto pts = ref_points(-1, 0, static_cast<long long>(p));
        for (auto& r : pts)
            for (auto& s : pts) EXPECT_EQ(point_add(c, to_lib(r, p), to_lib(s, p)), to_lib(ref_add(r, s, -1, p), p));
        // associativity and inverses on the whole table
        for (auto& r : pts)
            for (auto& s : pts)
                for (auto& t : pts) {
                    Pt R = to_lib(r, p), S = to_lib(s, p), T = to_lib(t, p);
                    EXPECT_EQ(point_add(c, point_add(c, R, S), T), point_add(c, R, point_add(c, S, T)));
                }
        for (auto& r : pts) EXPECT_TRUE(point_add(c, to_lib(r, p), negate(to_lib(r, p))).is_infinity());
    }
}

TEST(ScalarMul, SpecExamples) {
    auto e34 = curve_ed_rational(34);
    EXPECT_EQ(scalar_mul(e34, 1, Q1), Q1);
    EXPECT_TRUE(scalar_mul(e34, 2, CurvePoint<Rational>{Rational(34), Rational(0)}).is_infinity());
    EXPECT_TRUE(scalar_mul(e34, 0, Q1).is_infinity());
    EXPECT_EQ(scalar_mul(e34, -3, Q1), negate(scalar_mul(e34, 3, Q1)));
    EXPECT_EQ(scalar_mul(e34, 5, Q1), point_add(e34, scalar_mul(e34, 2, Q1), scalar_mul(e34, 3, Q1)));
    EXPECT_EQ(scalar_mul(e34, BigInt(7), Q2), scalar_mul(e34, 7, Q2));

    auto e1 = curve_ed_fp(1, 5);
    for (auto& r : ref_points(-1, 0, 5)) EXPECT_TRUE(scalar_mul(e1, 8, to_lib(r, 5)).is_infinity());
}

TEST(CmMul, ActionOverQi) {
    auto e = curve_ed_gaussian(34);
    auto q1 = lift_to_gaussian(Q1);
    auto q2 = lift_to_gaussian(Q2);
    EXPECT_EQ(cm_mul(e, 1, q1), q1);
    auto iq = cm_mul(e, GaussianInt::i(), q1);
    EXPECT_EQ(iq, (CurvePoint<QiElement>{QiElement(2), QiElement(0, 48)}));
    EXPECT_TRUE(on_curve(e, iq));
    EXPECT_EQ(cm_mul(e, GaussianInt::i(), iq), negate(q1));
    EXPECT_THROW(cm_mul(curve_ed_rational(34), GaussianInt::i(), Q1), Unsupported);

    std::mt19937_64 rng(21);
    std::uniform_int_distribution<long long> co(-2, 2);
    for (int k = 0; k < 15; ++k) {
        GaussianInt a(co(rng), co(rng)), b(co(rng), co(rng));
        EXPECT_EQ(cm_mul(e, a, point_add(e, q1, q2)), point_add(e, cm_mul(e, a, q1), cm_mul(e, a, q2)));
        EXPECT_EQ(cm_mul(e, a + b, q1), point_add(e, cm_mul(e, a, q1), cm_mul(e, b, q1)));
        EXPECT_EQ(cm_mul(e, a * b, q2), cm_mul(e, a, cm_mul(e, b, q2)));
    }
}

TEST(TwoTorsion, Family) {
    for (i64 d : {1, 34}) {
        auto c = curve_ed_rational(d);
        auto t = two_torsion(d);
        EXPECT_EQ(t.size(), 4u);
        for (auto& pt : t) {
            EXPECT_TRUE(on_curve(c, pt));
            EXPECT_TRUE(scalar_mul(c, 2, pt).is_infinity());
        }
    }
    EXPECT_EQ(two_torsion(34)[2], (CurvePoint<Rational>{Rational(34), Rational(0)}));
    auto c = curve_ed_rational(34);
    for (u64 p : {3ull, 5ull, 7ull, 101ull}) {
        Place v = Place::rational(p);
        std::vector<CurvePoint<FpElement>> red;
        for (auto& pt : two_torsion(34)) red.push_back(reduce_point<FpElement>(c, pt, v));
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = j + 1; k < 4; ++k) EXPECT_NE(red[j], red[k]);
    }
}

TEST(PointSearch, FindsGenerators) {
    auto c = curve_ed_rational(34);
    auto pts = point_search(c, 20);
    auto has = [&](const CurvePoint<Rational>& q) { return std::find(pts.begin(), pts.end(), q) != pts.end(); };
    EXPECT_TRUE(has(Q1));
    EXPECT_TRUE(has(Q2));
    for (auto& pt : pts) EXPECT_TRUE(on_curve(c, pt));
    auto c5 = curve_ed_rational(5);
    auto p5 = point_search(c5, 5);
    for (auto& t : two_torsion(5))
        if (!t.is_infinity()) {
            EXPECT_NE(std::find(p5.begin(), p5.end(), t), p5.end());
        }
}

TEST(Reduction, SpecExamples) {
    auto c = curve_ed_rational(34);
    Place v = Place::rational(3);
    EXPECT_TRUE(reduce_point<FpElement>(c, CurvePoint<Rational>{}, v).is_infinity());
    auto r = reduce_point<FpElement>(c, Q1, v);
    EXPECT_EQ(r, (Pt{FpElement(3, 1), FpElement(3, 0)}));
    EXPECT_TRUE(on_curve(reduce_curve<FpElement>(c, v), r));
    EXPECT_THROW(reduce_point<FpElement>(c, Q1, Place::rational(17)), PreconditionFailure);
    EXPECT_THROW(Place::split(7, 2), InvalidArgument);
    EXPECT_THROW(Place::split(13, 4), InvalidArgument);
}

TEST(Reduction, DenominatorsReduceProjectively) {
    auto c = curve_ed_rational(34);
    // 2*Q1 has x with denominator 24^2
    auto q = scalar_mul(c, 2, Q1);
    ASSERT_EQ(denominator(q.x()) % 3, 0);
    auto c3 = reduce_curve<FpElement>(c, Place::rational(3));
    EXPECT_TRUE(reduce_point<FpElement>(c, q, Place::rational(3)).is_infinity());
    EXPECT_EQ(scalar_mul(c3, 2, reduce_point<FpElement>(c, Q1, Place::rational(3))),
              reduce_point<FpElement>(c, q, Place::rational(3)));
}

TEST(Reduction, HomomorphismAndModuleMap) {
    auto e = curve_ed_gaussian(34);
    auto q1 = lift_to_gaussian(Q1), q2 = lift_to_gaussian(Q2);
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<long long> co(-2, 2);
    std::vector<CurvePoint<QiElement>> sample;
    for (int k = 0; k < 14; ++k)
        sample.push_back(point_add(e, cm_mul(e, GaussianInt(co(rng), co(rng)), q1), cm_mul(e, GaussianInt(co(rng), co(rng)), q2)));
    std::vector<Place> places;
    for (u64 p : {3ull, 5ull, 7ull, 13ull, 29ull, 41ull, 43ull})
        for (auto& v : gaussian_places_above(p)) places.push_back(v);
    int pairs = 0;
    for (auto& v : places) {
        with_residue_field(v, [&]<class K>() {
            auto cv = reduce_curve<K>(e, v);
            for (std::size_t j = 0; j < sample.size(); ++j) {
                auto rj = reduce_point<K>(e, sample[j], v);
                EXPECT_TRUE(on_curve(cv, rj));
                for (std::size_t k = j; k < sample.size() && k < j + 3; ++k) {
                    auto sum = point_add(e, sample[j], sample[k]);
                    EXPECT_EQ(reduce_point<K>(e, sum, v), point_add(cv, rj, reduce_point<K>(e, sample[k], v)));
                    ++pairs;
                }
                GaussianInt a(co(rng), co(rng));
                EXPECT_EQ(reduce_point<K>(e, cm_mul(e, a, sample[j]), v), cm_mul(cv, a, rj));
            }
            return 0;
        });
    }
    EXPECT_GE(pairs, 100);
}

TEST(Reduction, ConjugatePlaces) {
    auto e = curve_ed_gaussian(34);
    auto pt = point_add(e, cm_mul(e, GaussianInt(1, 1), lift_to_gaussian(Q1)), lift_to_gaussian(Q2));
    CurvePoint<QiElement> conj{pt.x().conj(), pt.y().conj()};
    ASSERT_TRUE(on_curve(e, conj));
    for (u64 p : {5ull, 13ull, 29ull, 37ull, 41ull}) {
        auto vs = gaussian_places_above(p);
        ASSERT_EQ(vs.size(), 2u);
        EXPECT_EQ(vs[0].s + vs[1].s, p);
        EXPECT_EQ(reduce_point<FpElement>(e, pt, vs[1]), reduce_point<FpElement>(e, conj, vs[0]));
    }
}

TEST(Products, ComponentwiseLaw) {
    auto c = curve_ed_rational(34);
    ProductCurve<Rational> amb{c, c};
    ProductPoint<Rational> a{Q1, CurvePoint<Rational>{}}, b{Q2, Q1};
    auto s = product_add(amb, a, b);
    EXPECT_EQ(s[0], point_add(c, Q1, Q2));
    EXPECT_EQ(s[1], Q1);
    EXPECT_TRUE(is_zero(product_add(amb, s, product_negate(s))));
    EXPECT_EQ(product_mul(amb, 3, b), (ProductPoint<Rational>{scalar_mul(c, 3, Q2), scalar_mul(c, 3, Q1)}));
    EXPECT_THROW(require_on_ambient(amb, ProductPoint<Rational>{Q1}), InvariantViolation);
}
