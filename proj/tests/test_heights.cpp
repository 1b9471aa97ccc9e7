#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mwdep/heights.hpp"

using namespace mwdep;

namespace {

const auto E34 = curve_ed_rational(34);
const CurvePoint<Rational> Q1{Rational(-2), Rational(48)};
const CurvePoint<Rational> Q2{Rational(-16), Rational(120)};
constexpr long double kTol = 1e-6L;

long double h(const CurvePoint<Rational>& p, long double tol = kTol) { return canonical_height(E34, p, tol).value; }

} // namespace

TEST(NaiveHeight, Examples) {
    EXPECT_EQ(naive_height(CurvePoint<Rational>{}), 0);
    EXPECT_NEAR(naive_height(Q1), std::log(2.0L), 1e-15L);
    auto two = point_add(E34, Q1, Q1);
    EXPECT_NEAR(naive_height(two),
                std::max(std::log(std::fabs(numerator(two.x()).convert_to<long double>())),
                         std::log(denominator(two.x()).convert_to<long double>())),
                1e-12L);
}

TEST(CanonicalHeight, SeriesMatchesExactDoubling) {
    for (auto& p : {Q1, Q2, point_add(E34, Q1, Q2), point_sub(E34, Q1, Q2)})
        for (int n = 0; n <= 7; ++n) {
            long double exact = canonical_height_by_doubling(E34, p, n);
            EXPECT_NEAR(doubling_series(E34, p, n), exact, 1e-12L * (1 + exact)) << n;
        }
}

TEST(CanonicalHeight, WithinToleranceOfDeepDoubling) {
    // exact 4^-9 h(2^9 P) is within K / (3 * 4^9) of the limit
    const long double k = detail::height_step_bound(BigInt(-1156), BigInt(0));
    const long double tail = k / (3 * std::ldexp(1.0L, 18));
    for (auto& p : {Q1, Q2}) {
        long double deep = canonical_height_by_doubling(E34, p, 9);
        HeightValue v = canonical_height(E34, p, kTol);
        EXPECT_LE(v.error, kTol);
        EXPECT_NEAR(v.value, deep, tail + kTol);
    }
}

TEST(CanonicalHeight, TorsionVanishes) {
    for (i64 d : {1, 5, 34})
        for (auto& t : two_torsion(d)) {
            HeightValue v = canonical_height(curve_ed_rational(d), t, kTol);
            EXPECT_LE(std::fabs(v.value), kTol);
        }
    // y^2 = x^3 + 1 has a point (2, 3) of order 6
    WeierstrassCurve<Rational> c{Rational(0), Rational(1)};
    EXPECT_EQ(canonical_height(c, CurvePoint<Rational>{Rational(2), Rational(3)}, kTol).value, 0);
}

TEST(CanonicalHeight, Quadraticity) {
    for (auto& p : {Q1, Q2}) {
        long double hp = h(p);
        EXPECT_GT(hp, 0.1L);
        for (int n : {2, 3, 4}) EXPECT_NEAR(h(scalar_mul(E34, n, p)), n * n * hp, (1 + n * n) * kTol);
    }
}

TEST(CanonicalHeight, ParallelogramLaw) {
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<int> co(-3, 3);
    for (int k = 0; k < 10; ++k) {
        auto p = point_add(E34, scalar_mul(E34, co(rng), Q1), scalar_mul(E34, co(rng), Q2));
        auto q = point_add(E34, scalar_mul(E34, co(rng), Q1), two_torsion(34)[k % 4]);
        long double lhs = h(point_add(E34, p, q)) + h(point_sub(E34, p, q));
        long double rhs = 2 * h(p) + 2 * h(q);
        EXPECT_NEAR(lhs, rhs, 6 * kTol);
    }
}

TEST(CanonicalHeight, ModelInvariance) {
    // the same curve and point after x -> x / 4
    WeierstrassCurve<Rational> scaled{Rational(-1156, 16), Rational(0)};
    CurvePoint<Rational> p{Rational(-2, 4), Rational(48, 8)};
    ASSERT_TRUE(on_curve(scaled, p));
    EXPECT_NEAR(canonical_height(scaled, p, kTol).value, h(Q1), 2 * kTol);
}

TEST(CanonicalHeight, Errors) {
    EXPECT_THROW(canonical_height(E34, Q1, 0), InvalidArgument);
    EXPECT_THROW(canonical_height(E34, Q1, 1e-60L), ResourceLimit);
    EXPECT_THROW(canonical_height(E34, CurvePoint<Rational>{Rational(1), Rational(1)}, kTol), InvariantViolation);
}

TEST(HeightPairing, Properties) {
    EXPECT_NEAR(height_pairing(E34, Q1, CurvePoint<Rational>{}, kTol).value, 0, kTol);
    EXPECT_EQ(height_pairing(E34, Q1, Q2, kTol).value, height_pairing(E34, Q2, Q1, kTol).value);
    EXPECT_NEAR(height_pairing(E34, Q1, Q1, kTol).value, h(Q1), 2 * kTol);
    std::mt19937_64 rng(52);
    std::uniform_int_distribution<int> co(-2, 2);
    for (int k = 0; k < 6; ++k) {
        auto rand_pt = [&] { return point_add(E34, scalar_mul(E34, co(rng), Q1), scalar_mul(E34, co(rng), Q2)); };
        auto p = rand_pt(), r = rand_pt(), q = rand_pt();
        long double lhs = height_pairing(E34, point_add(E34, p, r), q, kTol).value;
        long double rhs = height_pairing(E34, p, q, kTol).value + height_pairing(E34, r, q, kTol).value;
        EXPECT_NEAR(lhs, rhs, 6 * kTol);
    }
}

TEST(Gram, IndependenceCertificate) {
    ProductCurve<Rational> amb{E34};
    HeightGram g = height_gram(amb, {{Q1}, {Q2}}, kTol);
    EXPECT_GT(g.determinant, 10 * kTol);
    EXPECT_GT(g.determinant - g.determinant_error, 0);
    EXPECT_GT(g.lambda_min_lower, 0);
    // lower bound really is below the eigenvalues of the 2x2 matrix
    long double a = g.matrix[0][0], b = g.matrix[0][1], d = g.matrix[1][1];
    long double lmin = (a + d) / 2 - std::sqrt((a - d) * (a - d) / 4 + b * b);
    EXPECT_LE(g.lambda_min_lower, lmin);
    EXPECT_GT(g.lambda_min_lower, lmin - 1e-4L);
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> co(-20, 20);
    for (int k = 0; k < 200; ++k) {
        long double x = co(rng), y = co(rng);
        EXPECT_GE(a * x * x + 2 * b * x * y + d * y * y + 4 * g.entry_error * (x * x + y * y),
                  g.lambda_min_lower * (x * x + y * y));
    }
}

TEST(Gram, DegenerateBasisRejected) {
    ProductCurve<Rational> amb{E34};
    EXPECT_THROW(gram_and_bound(amb, {Q1}, {{Q1}, {scalar_mul(E34, 2, Q1)}}, 4, kTol), DegenerateBasis);
}

TEST(Gram, BoundExamples) {
    ProductCurve<Rational> amb{E34};
    GramBound one = gram_and_bound(amb, {Q1}, {{Q1}}, 4, kTol);
    EXPECT_GE(one.bound, 4 - 1e-6L);
    GramBound twice = gram_and_bound(amb, {scalar_mul(E34, 2, Q1)}, {{Q1}, {Q2}}, 1, kTol);
    GramBound base = gram_and_bound(amb, {Q1}, {{Q1}, {Q2}}, 1, kTol);
    EXPECT_NEAR(twice.bound, 2 * base.bound, 1e-4L);
}

TEST(SolveCoefficients, Examples) {
    auto one = solve_coefficients(E34, Q1, {Q1}, 4, kTol);
    ASSERT_TRUE(one.has_value());
    EXPECT_EQ(*one, (std::vector<BigInt>{4}));

    auto p = point_sub(E34, scalar_mul(E34, 3, Q1), scalar_mul(E34, 2, Q2));
    auto n = solve_coefficients(E34, p, {Q1, Q2}, 1, kTol);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(*n, (std::vector<BigInt>{3, -2}));

    EXPECT_FALSE(solve_coefficients(E34, Q2, {Q1}, 1, kTol).has_value());
    // a torsion offset is not absorbed by the basis
    EXPECT_FALSE(solve_coefficients(E34, point_add(E34, Q1, two_torsion(34)[1]), {Q1, Q2}, 1, kTol).has_value());
    // with c = 4 the torsion offset dies
    auto t = solve_coefficients(E34, point_add(E34, Q1, two_torsion(34)[1]), {Q1, Q2}, 4, kTol);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(*t, (std::vector<BigInt>{4, 0}));
}

TEST(SolveCoefficients, CoarseToleranceIsReported) {
    auto p = point_add(E34, scalar_mul(E34, 5, Q1), scalar_mul(E34, 4, Q2));
    EXPECT_THROW(solve_coefficients(E34, p, {Q1, Q2}, 1, 0.5L), ToleranceTooCoarse);
}
