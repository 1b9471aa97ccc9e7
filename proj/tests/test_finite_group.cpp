#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mwdep/finite_group.hpp"

using namespace mwdep;

namespace {

// Point count by checking every pair (x, y).
u64 brute_count(i64 d, u64 p) {
    u64 n = 1;
    const u64 dd = static_cast<u64>(d) % p * (static_cast<u64>(d) % p) % p;
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = (x * x % p * x + p * p - dd * x % p) % p;
        for (u64 y = 0; y < p; ++y)
            if (y * y % p == rhs) ++n;
    }
    return n;
}

template <class K>
std::vector<CurvePoint<K>> all_points(const WeierstrassCurve<K>& c) {
    std::vector<CurvePoint<K>> out{CurvePoint<K>{}};
    const u64 p = c.a.p;
    std::mt19937_64 rng(0);
    auto add_x = [&](const K& x) {
        auto y = field_sqrt(c.rhs(x), rng);
        if (!y) return;
        out.emplace_back(x, *y);
        if (!y->is_zero()) out.emplace_back(x, -*y);
    };
    if constexpr (std::is_same_v<K, FpElement>) {
        for (u64 x = 0; x < p; ++x) add_x(FpElement::raw(p, x));
    } else {
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < p; ++b) add_x(Fp2Element::raw(p, a, b));
    }
    return out;
}

std::vector<u64> good_primes(i64 d, u64 bound) {
    std::vector<u64> out;
    for (u64 p : primes_up_to(bound))
        if (p > 2 && d % static_cast<i64>(p) != 0) out.push_back(p);
    return out;
}

} // namespace

TEST(GroupOrder, SpecExamples) {
    EXPECT_EQ(group_order(curve_ed_fp(1, 5)), 8u);
    EXPECT_EQ(brute_count(1, 5), 8u);
    for (u64 p : {3ull, 7ull, 11ull}) {
        u64 n = group_order(curve_ed_fp2(1, p));
        EXPECT_EQ(n, (p + 1) * (p + 1));
        EXPECT_EQ(all_points(curve_ed_fp2(1, p)).size(), n);
    }
}

TEST(GroupOrder, MatchesBruteForceAndHasse) {
    for (i64 d : {1, 34})
        for (u64 p : good_primes(d, 400)) {
            auto c = curve_ed_fp(d, p);
            u64 n = group_order(c);
            EXPECT_EQ(n, brute_count(d, p)) << p;
            EXPECT_EQ(n % 4, 0u);
            EXPECT_NE(n % p, 0u);
            double r = 2 * std::sqrt(static_cast<double>(p));
            EXPECT_GE(static_cast<double>(n), p + 1 - r);
            EXPECT_LE(static_cast<double>(n), p + 1 + r);
        }
}

TEST(GroupOrder, BabyGiantAgreesWithExhaustive) {
    for (i64 d : {1, 34})
        for (u64 p : good_primes(d, 3000))
            if (p > 100) {
                EXPECT_EQ(group_order(curve_ed_fp(d, p), CountMethod::baby_giant), group_order(curve_ed_fp(d, p)));
            }
    // a generic curve too
    WeierstrassCurve<FpElement> c{FpElement(100003, 3), FpElement(100003, 7)};
    EXPECT_EQ(group_order(c, CountMethod::baby_giant), group_order(c));
}

TEST(GroupStructure, SpecExamples) {
    auto c = curve_ed_fp(1, 5);
    auto info = group_structure(c);
    EXPECT_EQ(info.m, 2u);
    EXPECT_EQ(info.n, 4u);
    // the two generators span all 8 points
    std::set<std::pair<u64, u64>> seen;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 2; ++b) {
            auto q = point_add(c, scalar_mul(c, a, info.generators[0]), scalar_mul(c, b, info.generators[1]));
            seen.insert(q.is_infinity() ? std::pair<u64, u64>{99, 99} : std::pair<u64, u64>{q.x().v, q.y().v});
        }
    EXPECT_EQ(seen.size(), 8u);

    // y^2 = x^3 + 1 over F_5 has 6 points and is cyclic
    WeierstrassCurve<FpElement> cyc{FpElement(5, 0), FpElement(5, 1)};
    auto ci = group_structure(cyc);
    EXPECT_EQ(ci.m, 1u);
    EXPECT_EQ(ci.n, ci.order);
}

TEST(GroupStructure, ShapeInvariants) {
    for (i64 d : {1, 34})
        for (u64 p : good_primes(d, 300)) {
            auto c = curve_ed_fp(d, p);
            auto info = group_structure(c);
            EXPECT_EQ(info.m * info.n, info.order);
            EXPECT_EQ(info.n % info.m, 0u);
            EXPECT_EQ(info.m % 2, 0u);   // full rational 2-torsion
            EXPECT_EQ(point_order(c, info.generators[0], info.order), info.n);
            if (info.m > 1) {
                EXPECT_EQ(point_order(c, info.generators[1], info.order), info.m);
            }
            if (info.order <= 400) {
                ProductCurve<FpElement> amb{c};
                std::vector<ProductPoint<FpElement>> gens;
                for (auto& g : info.generators) gens.push_back({g});
                EXPECT_EQ(SubgroupClosure<FpElement>(amb, gens, 1000000).size(), info.order);
            }
        }
    EXPECT_THROW(group_structure(curve_ed_fp(1, 1009), 100), ResourceLimit);
}

TEST(Frobenius, SpecExamples) {
    EXPECT_EQ(frobenius_pi(5, 8), GaussianInt(-1, 2));
    EXPECT_THROW(frobenius_pi(5, 7), InconsistentInput);
    EXPECT_THROW(frobenius_pi(5, 14), InconsistentInput);
    EXPECT_THROW(frobenius_pi(13, 16), InconsistentInput);
    for (u64 p : good_primes(1, 1000)) {
        if (p % 4 != 1) continue;
        u64 n = group_order(curve_ed_fp(1, p));
        GaussianInt pi = frobenius_pi(p, n);
        EXPECT_EQ(pi.norm(), p);
        EXPECT_GT(pi.im, 0);
        EXPECT_EQ((pi - GaussianInt(1)).norm(), n);
        EXPECT_EQ((pi.conj() - GaussianInt(1)).norm(), n);
    }
}

TEST(GammaOfV, SpecExamples) {
    auto e = curve_ed_gaussian(1);
    auto zs = gamma_of_v<FpElement>(e, Place::split(5, 2));
    EXPECT_TRUE(associates(zs.gamma, GaussianInt(-2, 2)));
    EXPECT_EQ(zs.gamma.norm(), 8);
    EXPECT_TRUE(cm_mul(reduce_curve<FpElement>(e, Place::split(5, 2)), zs.gamma, zs.generator).is_infinity());

    auto zi = gamma_of_v<Fp2Element>(e, Place::inert(7));
    EXPECT_EQ(zi.gamma, GaussianInt(8));
    EXPECT_EQ(zi.gamma.norm(), 64);
    EXPECT_FALSE(zi.pi.has_value());

    EXPECT_THROW(gamma_of_v<FpElement>(e, Place::rational(5)), InvalidArgument);
    EXPECT_THROW(gamma_of_v<FpElement>(curve_ed_gaussian(5), Place::split(5, 2)), PreconditionFailure);
}

TEST(GammaOfV, GeneratorEnumeratesGroupExactly) {
    auto check = [](auto c) {
        using K = std::decay_t<decltype(c.a)>;
        auto zs = zi_structure(c);
        EXPECT_EQ(zs.gamma, canonical_associate(zs.gamma));
        EXPECT_EQ(zs.gamma.norm(), group_order(c));
        std::unordered_set<CurvePoint<K>, PointHash<K>> seen;
        for (auto& r : gi_residue_system(zs.gamma)) seen.insert(cm_mul(c, r, zs.generator));
        EXPECT_EQ(BigInt(seen.size()), zs.gamma.norm());
        EXPECT_EQ(seen.size(), all_points(c).size());
    };
    check(curve_ed_fp(1, 5, sqrt_minus_one(5)));
    check(curve_ed_fp(1, 13, sqrt_minus_one(13)));
    check(curve_ed_fp(34, 13, FpElement(13, 8)));
    check(curve_ed_fp(34, 97, sqrt_minus_one(97)));
    check(curve_ed_fp2(1, 3));
    check(curve_ed_fp2(1, 7));
    check(curve_ed_fp2(34, 11));
}

TEST(GammaOfV, BothConjugatesNeverAnnihilate) {
    // at split places the non-chosen conjugate must fail to kill the group
    for (u64 p : good_primes(34, 500)) {
        if (p % 4 != 1) continue;
        for (u64 s : {sqrt_minus_one(p)->v, p - sqrt_minus_one(p)->v}) {
            auto c = curve_ed_fp(34, p, FpElement(p, static_cast<i64>(s)));
            auto zs = zi_structure(c);
            GaussianInt other = canonical_associate(zs.pi->conj() - GaussianInt(1));
            if (associates(other, zs.gamma)) continue;
            EXPECT_FALSE(cm_mul(c, other, zs.generator).is_infinity());
        }
    }
}

TEST(ZiDlog, RoundTrip) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long long> co(-100000, 100000);
    for (i64 d : {1, 34})
        for (u64 p : good_primes(d, 200)) {
            std::vector<Place> vs = gaussian_places_above(p);
            auto e = curve_ed_gaussian(d);
            for (auto& v : vs) {
                with_residue_field(v, [&]<class K>() {
                    auto c = reduce_curve<K>(e, v);
                    auto zs = zi_structure(c);
                    EXPECT_EQ(zi_dlog(c, zs, CurvePoint<K>{}), GaussianInt(0));
                    EXPECT_EQ(zi_dlog(c, zs, zs.generator), gi_mod(1, zs.gamma));
                    for (int k = 0; k < 20; ++k) {
                        GaussianInt a(co(rng), co(rng));
                        GaussianInt x = zi_dlog(c, zs, cm_mul(c, a, zs.generator));
                        EXPECT_TRUE(gi_congruent(x, a, zs.gamma));
                    }
                    return 0;
                });
            }
        }
}

TEST(SubgroupMembership, SpecExamplesAndOracle) {
    auto c = curve_ed_fp(34, 13, FpElement(13, 8));
    ProductCurve<FpElement> amb{c, c};
    std::mt19937_64 rng(41);
    auto rp = [&] { return ProductPoint<FpElement>{random_point(c, rng), random_point(c, rng)}; };
    std::vector<ProductPoint<FpElement>> gens{rp(), rp()};
    auto zero = subgroup_membership(amb, gens, product_zero(amb));
    ASSERT_TRUE(zero.has_value());
    EXPECT_EQ(*zero, (std::vector<i64>{0, 0}));
    EXPECT_EQ(*subgroup_membership(amb, gens, gens[0]), (std::vector<i64>{1, 0}));

    const u64 exponent = group_structure(c).n;
    for (int k = 0; k < 40; ++k) {
        std::vector<ProductPoint<FpElement>> g{rp(), rp()};
        ProductPoint<FpElement> t = (k % 2) ? rp() : product_add(amb, product_mul(amb, k, g[0]), product_mul(amb, 3, g[1]));
        auto fast = subgroup_membership(amb, g, t);
        auto box = subgroup_membership_box(amb, g, t, static_cast<i64>(exponent));
        EXPECT_EQ(fast.has_value(), box.has_value());
        if (fast) {
            ProductPoint<FpElement> s = product_zero(amb);
            for (std::size_t j = 0; j < g.size(); ++j) s = product_add(amb, s, product_mul(amb, (*fast)[j], g[j]));
            EXPECT_EQ(s, t);
        }
    }
    EXPECT_THROW(subgroup_membership(amb, gens, gens[0], 3), ResourceLimit);
}
