#pragma once

#include <map>
#include <type_traits>

#include "../finite_group.hpp"
#include "../hnf.hpp"
#include "report.hpp"

namespace mwdep {

enum class Ring { integers, gaussian };

inline std::string ring_name(Ring r) { return r == Ring::integers ? "integers" : "gaussian"; }

/// Lambda = span of `generators` over Z or Z[i] inside the product `ambient`.
template <class F>
struct LambdaSpec {
    ProductCurve<F> ambient;
    std::vector<ProductPoint<F>> generators;
    Ring ring = Ring::integers;

    void validate() const {
        for (auto& g : generators) require_on_ambient(ambient, g);
        if (ring == Ring::gaussian) {
            if constexpr (!std::is_same_v<F, QiElement>)
                throw InvalidArgument("Z[i]-spans need points over Q(i)");
            for (auto& c : ambient)
                if (!c.cm_d) throw InvalidArgument("Z[i]-spans need every factor in the E_d family");
        }
    }
};

namespace detail {

template <class F>
bool place_applies(const ProductCurve<F>& amb, const Place& v) {
    if constexpr (std::is_same_v<F, Rational>) {
        if (v.kind != Place::Kind::rational) return false;
    } else {
        if (v.kind == Place::Kind::rational) return false;
    }
    for (auto& c : amb)
        if (!has_good_reduction(c, v)) return false;
    return true;
}

// Z[i]-membership of a reduced target in the span of reduced generators:
// discrete logs against a Z[i]-generator of each factor turn the question
// into a linear system over Z[i] with the moduli gamma_k adjoined.
template <class K>
std::optional<std::vector<GaussianInt>> gaussian_reduced_membership(const ProductCurve<K>& amb,
                                                                     const std::vector<ProductPoint<K>>& gens,
                                                                     const ProductPoint<K>& target) {
    const std::size_t g = amb.size(), r = gens.size();
    std::vector<ZiStructure<K>> zs;
    for (std::size_t k = 0; k < g; ++k) {
        std::optional<ZiStructure<K>> same;
        for (std::size_t j = 0; j < k; ++j)
            if (amb[j] == amb[k]) same = zs[j];
        zs.push_back(same ? *same : zi_structure(amb[k]));
    }
    Matrix<GaussianInt> m(g, std::vector<GaussianInt>(r + g, GaussianInt(0)));
    std::vector<GaussianInt> t(g);
    for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t j = 0; j < r; ++j) m[k][j] = zi_dlog(amb[k], zs[k], gens[j][k]);
        m[k][r + k] = zs[k].gamma;
        t[k] = zi_dlog(amb[k], zs[k], target[k]);
    }
    auto sol = gi_module_membership(m, t);
    if (!sol) return std::nullopt;
    sol->resize(r);
    ProductPoint<K> sum = product_zero(amb);
    for (std::size_t j = 0; j < r; ++j) sum = product_add(amb, sum, product_cm_mul(amb, (*sol)[j], gens[j]));
    if (sum != target) throw InternalError("Z[i] witness failed to re-verify");
    return sol;
}

} // namespace detail

/// Decides r_v(P) in r_v(Lambda). Capped searches come back as "skipped".
template <class F>
PlaceRecord reduction_membership(const ProductPoint<F>& p, const LambdaSpec<F>& lambda, const Place& v,
                                 u64 cap = 1'000'000) {
    lambda.validate();
    require_on_ambient(lambda.ambient, p);
    for (auto& c : lambda.ambient) require_good_reduction(c, v);
    if (!detail::place_applies(lambda.ambient, v)) throw PreconditionFailure("place does not match the base field");
    PlaceRecord rec;
    rec.place = v;
    with_residue_field(v, [&]<class K>() {
        const ProductCurve<K> amb = reduce_ambient<K>(lambda.ambient, v);
        const ProductPoint<K> target = reduce_product<K>(lambda.ambient, p, v);
        std::vector<ProductPoint<K>> gens;
        for (auto& g : lambda.generators) gens.push_back(reduce_product<K>(lambda.ambient, g, v));
        if (lambda.ring == Ring::gaussian) {
            auto sol = detail::gaussian_reduced_membership(amb, gens, target);
            rec.status = sol ? PlaceRecord::Status::member : PlaceRecord::Status::non_member;
            if (sol)
                for (auto& x : *sol) rec.witness.push_back(to_string(x));
            return 0;
        }
        try {
            auto sol = subgroup_membership(amb, gens, target, cap);
            rec.status = sol ? PlaceRecord::Status::member : PlaceRecord::Status::non_member;
            if (sol) {
                ProductPoint<K> sum = product_zero(amb);
                for (std::size_t j = 0; j < gens.size(); ++j) {
                    sum = product_add(amb, sum, product_mul(amb, (*sol)[j], gens[j]));
                    rec.witness.push_back(std::to_string((*sol)[j]));
                }
                if (sum != target) throw InternalError("witness failed to re-verify");
            }
        } catch (const ResourceLimit& e) {
            rec.status = PlaceRecord::Status::skipped;
            rec.note = e.what();
        }
        return 0;
    });
    return rec;
}

/// Good places of the ambient with p <= bound, ordered by (p, kind, s).
template <class F>
std::vector<Place> good_places(const ProductCurve<F>& amb, u64 bound) {
    std::vector<Place> out;
    for (u64 p : primes_up_to(bound)) {
        if (p == 2) continue;
        std::vector<Place> vs;
        if constexpr (std::is_same_v<F, Rational>) vs = {Place::rational(p)};
        else vs = gaussian_places_above(p);
        for (auto& v : vs)
            if (detail::place_applies(amb, v)) out.push_back(v);
    }
    return out;
}

template <class F>
EvidenceReport scan(const ProductPoint<F>& p, const LambdaSpec<F>& lambda, u64 prime_bound, u64 cap = 1'000'000) {
    if (prime_bound < 3) throw InvalidArgument("prime bound must be >= 3");
    lambda.validate();
    EvidenceReport rep;
    rep.instance = "scan";
    rep.parameters = {{"prime_bound", prime_bound}, {"cap", cap}, {"ring", ring_name(lambda.ring)}};
    for (auto& v : good_places(lambda.ambient, prime_bound)) rep.places.push_back(reduction_membership(p, lambda, v, cap));
    finalize(rep);
    rep.verdict = rep.first_witness_prime ? Verdict::non_member_with_witness_place : Verdict::member_mod_torsion;
    return rep;
}

} // namespace mwdep
