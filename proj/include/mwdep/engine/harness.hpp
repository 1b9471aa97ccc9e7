#pragma once

#include "../heights.hpp"
#include "membership.hpp"

namespace mwdep {

namespace detail {

inline std::string point_text(const CurvePoint<Rational>& p) {
    if (p.is_infinity()) return "infinity";
    return "(" + to_string(p.x()) + ", " + to_string(p.y()) + ")";
}

// Independence of two rational points, certified by a positive lower bound
// on the smallest eigenvalue of their height Gram matrix.
inline HeightGram certify_independent(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& a,
                                      const CurvePoint<Rational>& b, long double tol) {
    require_on_curve(c, a);
    require_on_curve(c, b);
    HeightGram g = height_gram(ProductCurve<Rational>{c}, {{a}, {b}}, tol);
    if (!(g.lambda_min_lower > 0)) throw DegenerateInput("points are not certifiably independent");
    return g;
}

inline nlohmann::json gram_json(const HeightGram& g) {
    nlohmann::json m = nlohmann::json::array();
    for (auto& row : g.matrix) {
        nlohmann::json r = nlohmann::json::array();
        for (auto v : row) r.push_back(static_cast<double>(v));
        m.push_back(r);
    }
    return {{"matrix", m},
            {"entry_error", static_cast<double>(g.entry_error)},
            {"determinant", static_cast<double>(g.determinant)},
            {"determinant_error", static_cast<double>(g.determinant_error)},
            {"lambda_min_lower", static_cast<double>(g.lambda_min_lower)}};
}

} // namespace detail

/// The CM counterexample on E_d x E_d over Q(i): P = (0, Q1) is outside
/// Lambda = Z[i](Q1, 0) + Z[i](Q2, Q1) + Z[i](0, Q2), yet r_v(P) lies in
/// r_v(Lambda) at every good place, with explicit witnesses.
inline EvidenceReport prop62_harness(i64 d, const CurvePoint<Rational>& q1, const CurvePoint<Rational>& q2,
                                     u64 prime_bound, long double tol = 1e-9L) {
    const auto e = curve_ed_rational(d);
    EvidenceReport rep;
    rep.instance = "prop62 d=" + std::to_string(d) + " Q1=" + detail::point_text(q1) + " Q2=" + detail::point_text(q2);
    rep.parameters = {{"d", d}, {"prime_bound", prime_bound}, {"tol", static_cast<double>(tol)}};

    // Q1, Q2 independent over Z, hence over Z[i]: if a Q1 + b Q2 = 0 with
    // a, b in Z[i], applying complex conjugation (which commutes with the
    // action up to i -> -i) gives a Z-relation unless a = b = 0.
    HeightGram g = detail::certify_independent(e, q1, q2, tol);
    rep.certificate["independence"] = detail::gram_json(g);

    // Coordinates in the free Z[i]-module on (Q1, Q2) of each factor.
    const Matrix<GaussianInt> gens{{1, 0, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 1}};
    const std::vector<GaussianInt> target{0, 0, 1, 0};
    if (gi_module_membership(gens, target)) throw InternalError("coordinate system unexpectedly solvable");
    rep.certificate["method"] = "Z[i]-coordinates of P lie outside the Hermite span of those of P1, P2, P3";
    rep.certificate["coordinates"] = {{"P", {"0", "0", "1", "0"}},
                                      {"P1", {"1", "0", "0", "0"}},
                                      {"P2", {"0", "1", "1", "0"}},
                                      {"P3", {"0", "0", "0", "1"}}};
    rep.verdict = Verdict::exact_non_member_by_heights;

    const auto eg = curve_ed_gaussian(d);
    const auto g1 = lift_to_gaussian(q1), g2 = lift_to_gaussian(q2);
    const CurvePoint<QiElement> o;
    const ProductCurve<QiElement> amb{eg, eg};
    const ProductPoint<QiElement> P{o, g1}, P1{g1, o}, P2{g2, g1}, P3{o, g2};

    std::size_t trivial_c1 = 0, trivial_c2 = 0, general = 0;
    for (auto& v : good_places(amb, prime_bound)) {
        PlaceRecord rec;
        rec.place = v;
        with_residue_field(v, [&]<class K>() {
            const auto cv = reduce_curve<K>(eg, v);
            const ZiStructure<K> zs = zi_structure(cv);
            const GaussianInt c1 = zi_dlog(cv, zs, reduce_point<K>(eg, g1, v));
            const GaussianInt c2 = zi_dlog(cv, zs, reduce_point<K>(eg, g2, v));
            auto [r1, r2, r3] = prop62_solve(c1, c2, zs.gamma);
            if (gi_divides(zs.gamma, c1)) ++trivial_c1;
            else if (gi_divides(zs.gamma, c2)) ++trivial_c2;
            else ++general;
            const ProductCurve<K> av{cv, cv};
            ProductPoint<K> sum = product_cm_mul(av, r1, reduce_product<K>(amb, P1, v));
            sum = product_add(av, sum, product_cm_mul(av, r2, reduce_product<K>(amb, P2, v)));
            sum = product_add(av, sum, product_cm_mul(av, r3, reduce_product<K>(amb, P3, v)));
            if (sum == reduce_product<K>(amb, P, v)) {
                rec.status = PlaceRecord::Status::member;
                rec.witness = {to_string(r1), to_string(r2), to_string(r3)};
            } else {
                rec.status = PlaceRecord::Status::non_member;
            }
            rec.note = "gamma=" + to_string(zs.gamma) + " c1=" + to_string(c1) + " c2=" + to_string(c2);
            return 0;
        });
        rep.places.push_back(std::move(rec));
    }
    finalize(rep);
    rep.certificate["branches"] = {{"c1_zero", trivial_c1}, {"c2_zero", trivial_c2}, {"general", general}};
    // a refuting place would contradict the exact certificate
    rep.consistent = !rep.first_witness_prime.has_value();
    return rep;
}

struct Remark79Result {
    BigInt n;                // P = n P', Lambda = Z n Q'
    std::vector<Place> s_m;  // good places with p <= M
    EvidenceReport report;
};

/// P = n P' and Lambda = <n Q'> with n the product of |E(F_p)| over the good
/// p <= M: every reduction in S_M vanishes, yet P is not in Lambda + torsion.
/// Places in (M, refute_bound] are scanned for a refuting witness.
inline Remark79Result remark79_construct(const WeierstrassCurve<Rational>& c, const CurvePoint<Rational>& pp,
                                         const CurvePoint<Rational>& qq, u64 m, u64 refute_bound = 0,
                                         long double tol = 1e-9L, u64 cap = 1'000'000) {
    if (m < 3) throw InvalidArgument("M must be >= 3");
    Remark79Result out;
    EvidenceReport& rep = out.report;
    rep.instance = "remark79 P'=" + detail::point_text(pp) + " Q'=" + detail::point_text(qq);
    rep.parameters = {{"M", m}, {"refute_bound", refute_bound}, {"tol", static_cast<double>(tol)}};
    out.s_m = good_places(ProductCurve<Rational>{c}, m);
    if (out.s_m.empty()) throw DegenerateInput("no good place with p <= M: S_M is empty");
    HeightGram g = detail::certify_independent(c, pp, qq, tol);
    out.n = 1;
    std::vector<u64> orders;
    for (auto& v : out.s_m) {
        orders.push_back(group_order(reduce_curve<FpElement>(c, v)));
        out.n *= orders.back();
    }
    for (auto& v : out.s_m) {
        auto cv = reduce_curve<FpElement>(c, v);
        auto rp = scalar_mul(cv, out.n, reduce_point<FpElement>(c, pp, v));
        auto rq = scalar_mul(cv, out.n, reduce_point<FpElement>(c, qq, v));
        if (!rp.is_infinity() || !rq.is_infinity()) throw InternalError("group order failed to kill a reduction");
        PlaceRecord rec;
        rec.place = v;
        rec.status = PlaceRecord::Status::member;
        rec.witness = {"0"};
        rec.note = "r_v(P) = 0 = r_v(n Q')";
        rep.places.push_back(rec);
    }
    for (auto& v : good_places(ProductCurve<Rational>{c}, refute_bound)) {
        if (v.p <= m) continue;
        auto cv = reduce_curve<FpElement>(c, v);
        ProductCurve<FpElement> amb{cv};
        ProductPoint<FpElement> rp{scalar_mul(cv, out.n, reduce_point<FpElement>(c, pp, v))};
        ProductPoint<FpElement> rq{scalar_mul(cv, out.n, reduce_point<FpElement>(c, qq, v))};
        PlaceRecord rec;
        rec.place = v;
        try {
            auto sol = subgroup_membership(amb, {rq}, rp, cap);
            rec.status = sol ? PlaceRecord::Status::member : PlaceRecord::Status::non_member;
            if (sol) rec.witness = {std::to_string((*sol)[0])};
        } catch (const ResourceLimit& e) {
            rec.status = PlaceRecord::Status::skipped;
            rec.note = e.what();
        }
        rep.places.push_back(rec);
    }
    finalize(rep);
    rep.verdict = Verdict::exact_non_member_by_heights;
    HeightValue hp = canonical_height(c, pp, tol);
    const BigInt n2 = out.n * out.n;
    rep.certificate["n"] = to_string(out.n);
    rep.certificate["group_orders"] = orders;
    rep.certificate["independence"] = detail::gram_json(g);
    rep.certificate["height_P"] = to_string(n2) + " * " + std::to_string(static_cast<double>(hp.value));
    rep.certificate["method"] = "c.P = k c.n.Q' would be a Z-relation between P' and Q', excluded by the Gram bound";
    return out;
}

} // namespace mwdep
