#include <gtest/gtest.h>

#include <random>

#include "mwdep/fields.hpp"

using namespace mwdep;

TEST(SqrtMinusOne, Examples) {
    EXPECT_EQ(sqrt_minus_one(5)->v, 2u);
    EXPECT_EQ(sqrt_minus_one(13)->v, 5u);
    EXPECT_FALSE(sqrt_minus_one(7).has_value());
    EXPECT_THROW(sqrt_minus_one(15), InvalidArgument);
    for (u64 p : primes_up_to(3000)) {
        if (p == 2) continue;
        auto s = sqrt_minus_one(p);
        EXPECT_EQ(s.has_value(), p % 4 == 1);
        if (!s) continue;
        EXPECT_EQ((s->v * s->v) % p, p - 1);
        EXPECT_LE(s->v, p - s->v);
    }
}

TEST(Inverse, Examples) {
    EXPECT_EQ(inverse(FpElement(5, 2)), FpElement(5, 3));
    EXPECT_EQ(inverse(QiElement(1, 1)), QiElement(Rational(1, 2), Rational(-1, 2)));
    EXPECT_EQ(inverse(Fp2Element(3, 0, 1)), Fp2Element(3, 0, 2));
    EXPECT_THROW(inverse(FpElement(7, 0)), DivisionByZero);
    EXPECT_THROW(inverse(Fp2Element(7, 0, 0)), DivisionByZero);
    EXPECT_THROW(inverse(QiElement(0)), DivisionByZero);
    EXPECT_THROW(inverse(Rational(0)), DivisionByZero);
}

namespace {

template <class K, class Gen>
void check_field_axioms(Gen gen, int samples) {
    for (int k = 0; k < samples; ++k) {
        K a = gen(), b = gen(), c = gen();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a - a + b, b);
        if (!is_zero(a)) {
            EXPECT_EQ(a * inverse(a), from_int(a, 1));
        }
    }
}

} // namespace

TEST(FieldAxioms, AllFourFields) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long long> small(-50, 50);
    std::uniform_int_distribution<long long> den(1, 30);
    check_field_axioms<Rational>([&] { return Rational(small(rng), den(rng)); }, 1000);
    check_field_axioms<QiElement>([&] { return QiElement(Rational(small(rng), den(rng)), Rational(small(rng), den(rng))); }, 1000);
    FpElement fp(1000003, 0);
    check_field_axioms<FpElement>([&] { return random_element(fp, rng); }, 1000);
    Fp2Element f2(10007, 0, 0);
    check_field_axioms<Fp2Element>([&] { return random_element(f2, rng); }, 1000);
}

TEST(Fp2, TSquaredIsMinusOne) {
    for (u64 p : {3ull, 7ull, 11ull, 10007ull}) {
        Fp2Element t = Fp2Element::t(p);
        EXPECT_EQ(t * t, Fp2Element(p, -1, 0));
    }
}

TEST(FieldSqrt, SquaresHaveRoots) {
    std::mt19937_64 rng(12);
    for (u64 p : {3ull, 5ull, 13ull, 101ull, 1009ull, 65537ull}) {
        FpElement like(p, 0);
        for (int k = 0; k < 100; ++k) {
            FpElement x = random_element(like, rng);
            auto r = field_sqrt(x * x, rng);
            ASSERT_TRUE(r.has_value());
            EXPECT_EQ(*r * *r, x * x);
        }
    }
    for (u64 p : {3ull, 7ull, 11ull, 1019ull}) {
        Fp2Element like(p, 0, 0);
        int nonsquares = 0;
        for (int k = 0; k < 100; ++k) {
            Fp2Element x = random_element(like, rng);
            auto r = field_sqrt(x * x, rng);
            ASSERT_TRUE(r.has_value());
            EXPECT_EQ(*r * *r, x * x);
            if (!is_square(x)) {
                ++nonsquares;
                EXPECT_FALSE(field_sqrt(x, rng).has_value());
            }
        }
        EXPECT_GT(nonsquares, 0);
    }
}

TEST(Text, RationalAndQi) {
    EXPECT_EQ(parse_rational("-7/21"), Rational(-1, 3));
    EXPECT_EQ(parse_rational("12"), Rational(12));
    EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
    QiElement z(Rational(-3, 4), Rational(5, 2));
    EXPECT_EQ(parse_qi(to_string(z)), z);
    EXPECT_EQ(parse_qi("5"), QiElement(5));
    EXPECT_EQ(parse_qi("(1/2)-(3)i"), QiElement(Rational(1, 2), Rational(-3)));
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<long long> big(-1000000000, 1000000000);
    for (int k = 0; k < 200; ++k) {
        QiElement q(Rational(big(rng), 1 + (big(rng) & 0xffff)), Rational(big(rng), 1 + (big(rng) & 0xfff)));
        EXPECT_EQ(parse_qi(to_string(q)), q);
    }
}

TEST(Primes, AgreeWithSieve) {
    auto ps = primes_up_to(20000);
    std::size_t j = 0;
    for (u64 n = 0; n <= 20000; ++n) {
        bool sieve = j < ps.size() && ps[j] == n;
        if (sieve) ++j;
        EXPECT_EQ(is_prime(n), sieve) << n;
    }
    EXPECT_TRUE(is_prime(1000000007ull));
    EXPECT_TRUE(is_prime(2305843009213693951ull));
    EXPECT_FALSE(is_prime(3215031751ull));   // strong pseudoprime to bases 2, 3, 5, 7
}
