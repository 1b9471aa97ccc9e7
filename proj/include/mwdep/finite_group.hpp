#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "curves.hpp"
#include "places.hpp"

namespace mwdep {

template <class K>
struct PointHash {
    std::size_t operator()(const CurvePoint<K>& p) const {
        if (p.is_infinity()) return 0x9e3779b97f4a7c15ULL;
        u64 h = field_hash(p.x()) * 0x100000001b3ULL ^ (field_hash(p.y()) + 0x9e3779b97f4a7c15ULL);
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

template <class K>
struct ProductPointHash {
    std::size_t operator()(const ProductPoint<K>& p) const {
        std::size_t h = p.size();
        for (auto& c : p) h = h * 1000003u ^ PointHash<K>{}(c);
        return h;
    }
};

// ----------------------------------------------------------------- counting

struct HasseInterval {
    u64 low;
    u64 high;
};

/// Integer points of [q + 1 - 2 sqrt q, q + 1 + 2 sqrt q].
inline HasseInterval hasse_interval(u64 q) {
    // 2 sqrt q = sqrt(4q)
    u64 r = isqrt_u64(4 * q);
    bool exact = r * r == 4 * q;
    return {q + 1 - r, q + 1 + r + (exact ? 0 : 0)};
}

/// Exhaustive count: one point at infinity plus 1 + chi(f(x)) for every x.
template <class K>
u64 group_order_exhaustive(const WeierstrassCurve<K>& c) {
    const u64 p = c.a.p;
    u64 count = 1;
    auto tally = [&](const K& x) {
        K f = c.rhs(x);
        if (f.is_zero()) count += 1;
        else if (is_square(f)) count += 2;
    };
    if constexpr (std::is_same_v<K, FpElement>) {
        for (u64 x = 0; x < p; ++x) tally(FpElement::raw(p, x));
    } else {
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < p; ++b) tally(Fp2Element::raw(p, a, b));
    }
    return count;
}

template <class K>
CurvePoint<K> random_point(const WeierstrassCurve<K>& c, std::mt19937_64& rng) {
    while (true) {
        K x = random_element(c.a, rng);
        auto y = field_sqrt(c.rhs(x), rng);
        if (!y) continue;
        if (rng() & 1) *y = -*y;
        return {x, *y};
    }
}

inline std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (auto& [q, e] : factor_u64(n)) out.push_back(q);
    return out;
}

/// Order of p in a group whose order divides n.
template <class K>
u64 point_order(const WeierstrassCurve<K>& c, const CurvePoint<K>& p, u64 n) {
    if (!scalar_mul(c, static_cast<i64>(n), p).is_infinity())
        throw InvariantViolation("point order does not divide the given group order");
    u64 o = n;
    for (u64 q : prime_divisors(n))
        while (o % q == 0 && scalar_mul(c, static_cast<i64>(o / q), p).is_infinity()) o /= q;
    return o;
}

enum class CountMethod { exhaustive, baby_giant };

namespace detail {

// All m in [low, high] with m.R = O, by baby-step giant-step.
inline std::vector<u64> annihilators_in_range(const WeierstrassCurve<FpElement>& c, const CurvePoint<FpElement>& r,
                                              u64 low, u64 high) {
    const u64 width = high - low + 1;
    const u64 step = isqrt_u64(width) + 1;
    std::unordered_multimap<CurvePoint<FpElement>, u64, PointHash<FpElement>> baby;
    CurvePoint<FpElement> acc;
    for (u64 j = 0; j < step; ++j) {
        baby.emplace(acc, j);
        acc = add_unchecked(c, acc, r);
    }
    // giant = (low + k*step).R, look up -giant among the baby steps
    const CurvePoint<FpElement> stride = scalar_mul(c, static_cast<i64>(step), r);
    CurvePoint<FpElement> giant = scalar_mul(c, static_cast<i64>(low), r);
    std::vector<u64> out;
    for (u64 base = low; base <= high; base += step) {
        auto range = baby.equal_range(negate(giant));
        for (auto it = range.first; it != range.second; ++it)
            if (base + it->second <= high) out.push_back(base + it->second);
        giant = add_unchecked(c, giant, stride);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// |E(k)|. The baby-step giant-step mode intersects the Hasse-interval
/// annihilators of random points and falls back to the exhaustive scan when
/// they stay ambiguous.
template <class K>
u64 group_order(const WeierstrassCurve<K>& c, CountMethod method = CountMethod::exhaustive) {
    if (method == CountMethod::exhaustive) return group_order_exhaustive(c);
    if constexpr (std::is_same_v<K, FpElement>) {
        const u64 q = c.a.p;
        HasseInterval h = hasse_interval(q);
        std::mt19937_64 rng(q * 7919 + 17);
        std::vector<u64> cand;
        for (int round = 0; round < 40; ++round) {
            auto next = detail::annihilators_in_range(c, random_point(c, rng), h.low, h.high);
            if (round == 0) cand = next;
            else {
                std::vector<u64> both;
                std::set_intersection(cand.begin(), cand.end(), next.begin(), next.end(), std::back_inserter(both));
                cand = both;
            }
            if (cand.size() == 1) return cand[0];
        }
        if (q <= 100'000'000) return group_order_exhaustive(c);
        throw ResourceLimit("baby-step giant-step count stayed ambiguous");
    } else {
        return group_order_exhaustive(c);
    }
}

// ----------------------------------------------------------------- closures

/// The subgroup generated by `gens`, each element tagged with coefficients
/// (n_1..n_r), 0 <= n_j < o_j, o_j the order of gens[j] modulo the earlier ones.
template <class K>
class SubgroupClosure {
public:
    using Map = std::unordered_map<ProductPoint<K>, std::vector<i64>, ProductPointHash<K>>;

    SubgroupClosure(const ProductCurve<K>& amb, const std::vector<ProductPoint<K>>& gens, u64 cap) {
        const std::size_t r = gens.size();
        elements_.emplace(product_zero(amb), std::vector<i64>(r, 0));
        for (std::size_t j = 0; j < r; ++j) {
            // order of gens[j] modulo the current subgroup
            u64 o = 1;
            ProductPoint<K> t = gens[j];
            while (!elements_.count(t)) {
                ++o;
                if (o * elements_.size() > cap) throw ResourceLimit("subgroup closure exceeds cap");
                t = product_add(amb, t, gens[j]);
            }
            if (o == 1) continue;
            Map grown = elements_;
            for (auto& [h, coeff] : elements_) {
                ProductPoint<K> cur = h;
                for (u64 u = 1; u < o; ++u) {
                    cur = product_add(amb, cur, gens[j]);
                    std::vector<i64> cc = coeff;
                    cc[j] = static_cast<i64>(u);
                    grown.emplace(cur, std::move(cc));
                }
            }
            elements_ = std::move(grown);
        }
    }

    std::size_t size() const { return elements_.size(); }

    std::optional<std::vector<i64>> find(const ProductPoint<K>& target) const {
        auto it = elements_.find(target);
        if (it == elements_.end()) return std::nullopt;
        return it->second;
    }

    const Map& elements() const { return elements_; }

private:
    Map elements_;
};

/// Integer coefficients n with sum n_j S_j = target in the finite product group.
template <class K>
std::optional<std::vector<i64>> subgroup_membership(const ProductCurve<K>& amb, const std::vector<ProductPoint<K>>& points,
                                                    const ProductPoint<K>& target, u64 cap = 1'000'000) {
    require_on_ambient(amb, target);
    for (auto& p : points) require_on_ambient(amb, p);
    return SubgroupClosure<K>(amb, points, cap).find(target);
}

/// Reference search over the box [0, exponent)^r; exponent must annihilate the group.
template <class K>
std::optional<std::vector<i64>> subgroup_membership_box(const ProductCurve<K>& amb, const std::vector<ProductPoint<K>>& points,
                                                        const ProductPoint<K>& target, i64 exponent, u64 cap = 1'000'000) {
    const std::size_t r = points.size();
    double combos = std::pow(static_cast<double>(exponent), static_cast<double>(r));
    if (combos > static_cast<double>(cap)) throw ResourceLimit("coefficient box exceeds cap");
    std::vector<i64> n(r, 0);
    std::vector<ProductPoint<K>> partial(r + 1, product_zero(amb));
    // odometer over the box, partial[j] = sum_{k<j} n_k S_k
    while (true) {
        ProductPoint<K> sum = partial[0];
        for (std::size_t j = 0; j < r; ++j) sum = product_add(amb, sum, product_mul(amb, n[j], points[j]));
        if (sum == target) return n;
        std::size_t j = 0;
        while (j < r && ++n[j] == exponent) n[j++] = 0;
        if (j == r) return std::nullopt;
    }
}

// ----------------------------------------------------------------- structure

struct GroupShapeBase {
    u64 order = 0;
    u64 m = 1;   // E(k) = Z/m x Z/n, m | n
    u64 n = 1;
};

template <class K>
struct ReducedGroupInfo : GroupShapeBase {
    std::vector<CurvePoint<K>> generators;   // orders n and m (m > 1 only)
};

template <class K>
ReducedGroupInfo<K> group_structure(const WeierstrassCurve<K>& c, u64 cap = 1'000'000) {
    const u64 order = group_order(c);
    if (order > cap) throw ResourceLimit("group too large for structure computation");
    std::mt19937_64 rng(order * 131 + c.a.p);
    ProductCurve<K> amb{c};
    CurvePoint<K> g1, g2;
    u64 n = 1, m = 1;
    for (auto& [l, k] : factor_u64(order)) {
        u64 lk = 1;
        for (int j = 0; j < k; ++j) lk *= l;
        const i64 cofactor = static_cast<i64>(order / lk);
        // grow the l-primary part
        std::vector<ProductPoint<K>> gens;
        std::unordered_set<ProductPoint<K>, ProductPointHash<K>> part;
        part.insert(product_zero(amb));
        while (part.size() < lk) {
            CurvePoint<K> r = scalar_mul(c, cofactor, random_point(c, rng));
            if (part.count({r})) continue;
            gens.push_back({r});
            SubgroupClosure<K> cl(amb, gens, cap);
            part.clear();
            for (auto& [e, coeff] : cl.elements()) part.insert(e);
        }
        auto l_order = [&](const CurvePoint<K>& p) {
            u64 o = 1;
            CurvePoint<K> t = p;
            while (!t.is_infinity()) { t = scalar_mul(c, static_cast<i64>(l), t); o *= l; }
            return o;
        };
        CurvePoint<K> r1;
        u64 o1 = 1;
        for (auto& e : part) {
            u64 o = l_order(e[0]);
            if (o > o1) { o1 = o; r1 = e[0]; }
        }
        const u64 o2 = lk / o1;
        CurvePoint<K> r2;
        if (o2 > 1) {
            std::unordered_set<CurvePoint<K>, PointHash<K>> cyc;
            CurvePoint<K> t;
            for (u64 j = 0; j < o1; ++j) { cyc.insert(t); t = detail::add_unchecked(c, t, r1); }
            bool found = false;
            for (auto& e : part) {
                if (l_order(e[0]) != o2) continue;
                if (cyc.count(scalar_mul(c, static_cast<i64>(o2 / l), e[0]))) continue;
                r2 = e[0];
                found = true;
                break;
            }
            if (!found || o2 > o1) throw InternalError("l-primary part is not of rank <= 2");
        }
        g1 = detail::add_unchecked(c, g1, r1);
        g2 = detail::add_unchecked(c, g2, r2);
        n *= o1;
        m *= o2;
    }
    ReducedGroupInfo<K> info;
    info.order = order;
    info.m = m;
    info.n = n;
    info.generators.push_back(g1);
    if (m > 1) info.generators.push_back(g2);
    return info;
}

// ----------------------------------------------------------------- Z[i] structure

/// Frobenius x + yi with x^2 + y^2 = p, p + 1 - 2x = order, y > 0.
inline GaussianInt frobenius_pi(u64 p, u64 order) {
    require_odd_prime(p);
    if (p % 4 != 1) throw InvalidArgument("frobenius_pi needs a split prime p = 1 mod 4");
    const i64 twice_x = static_cast<i64>(p) + 1 - static_cast<i64>(order);
    if (twice_x % 2 != 0) throw InconsistentInput("order has the wrong parity for a CM Frobenius");
    const i64 x = twice_x / 2;
    const i64 y2 = static_cast<i64>(p) - x * x;
    if (y2 <= 0) throw InconsistentInput("order is not p + 1 - 2x for any x^2 + y^2 = p");
    const i64 y = static_cast<i64>(isqrt_u64(static_cast<u64>(y2)));
    if (y * y != y2) throw InconsistentInput("order is not p + 1 - 2x for any x^2 + y^2 = p");
    return {x, y};
}

/// E(k_v) = Z[i]/gamma with gamma canonical and Z[i].generator = E(k_v).
template <class K>
struct ZiStructure {
    GaussianInt gamma;
    std::vector<std::pair<GaussianInt, int>> gamma_factors;
    CurvePoint<K> generator;
    std::optional<GaussianInt> pi;   // split places
    u64 order = 0;
};

template <class K>
bool is_zi_generator(const WeierstrassCurve<K>& c, const GaussianInt& gamma,
                     const std::vector<std::pair<GaussianInt, int>>& factors, const CurvePoint<K>& g) {
    if (!cm_mul(c, gamma, g).is_infinity()) return false;
    for (auto& [pi, e] : factors)
        if (cm_mul(c, gi_divexact(gamma, pi), g).is_infinity()) return false;
    return true;
}

/// gamma(v) and a Z[i]-generator for E_d over the residue field of v.
/// Split: gamma = pi - 1 for the Frobenius acting as pi (or its conjugate)
/// under i -> s. Inert: gamma = p + 1, the supersingular case.
template <class K>
ZiStructure<K> zi_structure(const WeierstrassCurve<K>& c) {
    if (!supports_cm(c)) throw Unsupported("Z[i] structure needs E_d with a square root of -1");
    const u64 p = c.a.p;
    std::mt19937_64 rng(p * 2654435761ULL + static_cast<u64>(*c.cm_d));
    ZiStructure<K> zs;
    if constexpr (std::is_same_v<K, FpElement>) {
        zs.order = group_order_exhaustive(c);
        const GaussianInt pi = frobenius_pi(p, zs.order);
        const GaussianInt a = canonical_associate(pi - GaussianInt(1));
        const GaussianInt b = canonical_associate(pi.conj() - GaussianInt(1));
        if (a == b) {
            zs.gamma = a;
            zs.pi = pi;
        } else {
            std::optional<bool> first;
            for (int k = 0; k < 1000 && !first; ++k) {
                CurvePoint<K> r = random_point(c, rng);
                bool ka = cm_mul(c, a, r).is_infinity();
                bool kb = cm_mul(c, b, r).is_infinity();
                if (!ka && !kb) throw InternalError("neither Frobenius conjugate annihilates E(k_v)");
                if (ka != kb) first = ka;
            }
            if (!first) throw InternalError("could not separate the Frobenius conjugates");
            zs.gamma = *first ? a : b;
            zs.pi = *first ? pi : pi.conj();
        }
    } else {
        zs.gamma = GaussianInt(BigInt(p + 1));
        zs.order = (p + 1) * (p + 1);
    }
    zs.gamma_factors = gi_factor(zs.gamma);
    for (int k = 0; k < 100000; ++k) {
        CurvePoint<K> g = random_point(c, rng);
        if (is_zi_generator(c, zs.gamma, zs.gamma_factors, g)) {
            zs.generator = g;
            return zs;
        }
    }
    throw InternalError("no Z[i]-generator found");
}

/// gamma(v) for E_d over Q or Q(i) at a good split or inert place.
template <class K, class F>
ZiStructure<K> gamma_of_v(const WeierstrassCurve<F>& c, const Place& v) {
    if (!c.cm_d) throw Unsupported("gamma(v) is defined for the E_d family");
    if (v.kind == Place::Kind::rational) throw InvalidArgument("gamma(v) needs a split or inert place");
    return zi_structure(reduce_curve<K>(c, v));
}

template <class K>
CurvePoint<K> zi_generator(const WeierstrassCurve<K>& c) {
    return zi_structure(c).generator;
}

namespace detail {

// d with d.h = target, d over a residue system modulo the prime pi, where
// h is killed by pi.
template <class K>
std::optional<GaussianInt> prime_digit(const WeierstrassCurve<K>& c, const GaussianInt& pi, const CurvePoint<K>& h,
                                       const CurvePoint<K>& target) {
    const BigInt nrm = pi.norm();
    const bool inert_prime = pi.im.is_zero();   // canonical rational prime q = 3 mod 4
    if (!inert_prime) {
        // Z/q -> Z[i]/pi is onto, search integers
        const u64 q = static_cast<u64>(nrm);
        const u64 step = isqrt_u64(q) + 1;
        std::unordered_map<CurvePoint<K>, u64, PointHash<K>> baby;
        CurvePoint<K> acc;
        for (u64 j = 0; j < step; ++j) {
            baby.emplace(acc, j);
            acc = add_unchecked(c, acc, h);
        }
        const CurvePoint<K> stride = negate(acc);
        CurvePoint<K> cur = target;
        for (u64 k = 0; k <= step; ++k) {
            auto it = baby.find(cur);
            if (it != baby.end()) return GaussianInt(static_cast<long long>(k * step + it->second));
            cur = add_unchecked(c, cur, stride);
        }
        return std::nullopt;
    }
    const u64 q = static_cast<u64>(pi.re);
    std::unordered_map<CurvePoint<K>, u64, PointHash<K>> baby;
    CurvePoint<K> acc;
    for (u64 a = 0; a < q; ++a) {
        baby.emplace(acc, a);
        acc = add_unchecked(c, acc, h);
    }
    const CurvePoint<K> ih = negate(apply_i(c, h));
    CurvePoint<K> cur = target;
    for (u64 b = 0; b < q; ++b) {
        auto it = baby.find(cur);
        if (it != baby.end()) return GaussianInt(static_cast<long long>(it->second), static_cast<long long>(b));
        cur = add_unchecked(c, cur, ih);
    }
    return std::nullopt;
}

} // namespace detail

/// c mod gamma with c.G = P (Pohlig-Hellman over the Gaussian primes of gamma).
template <class K>
GaussianInt zi_dlog(const WeierstrassCurve<K>& c, const ZiStructure<K>& zs, const CurvePoint<K>& pt) {
    require_on_curve(c, pt);
    if (pt.is_infinity()) return 0;
    GaussianInt x = 0, modulus = 1;
    for (auto& [pi, e] : zs.gamma_factors) {
        GaussianInt pe = 1;
        for (int j = 0; j < e; ++j) pe *= pi;
        const GaussianInt co = gi_divexact(zs.gamma, pe);
        const CurvePoint<K> g = cm_mul(c, co, zs.generator);
        const CurvePoint<K> t = cm_mul(c, co, pt);
        GaussianInt pi_pow_top = 1;
        for (int j = 0; j + 1 < e; ++j) pi_pow_top *= pi;
        const CurvePoint<K> h = cm_mul(c, pi_pow_top, g);
        GaussianInt acc = 0, pij = 1;
        for (int j = 0; j < e; ++j) {
            GaussianInt lift = 1;
            for (int k = 0; k + 1 + j < e; ++k) lift *= pi;
            CurvePoint<K> rest = detail::add_unchecked(c, t, negate(cm_mul(c, acc, g)));
            auto d = detail::prime_digit(c, pi, h, cm_mul(c, lift, rest));
            if (!d) throw InvariantViolation("point is not in the Z[i]-span of the generator");
            acc += *d * pij;
            pij *= pi;
        }
        auto step = gi_solve_linear(modulus, acc - x, pe);
        if (!step) throw InternalError("Gaussian CRT failed");
        x += modulus * *step;
        modulus *= pe;
    }
    x = gi_mod(x, zs.gamma);
    if (cm_mul(c, x, zs.generator) != pt) throw InvariantViolation("point is not in the Z[i]-span of the generator");
    return x;
}

} // namespace mwdep
