#pragma once

#include <map>
#include <random>
#include <set>

#include "../hnf.hpp"
#include "report.hpp"

namespace mwdep {

// A point of G_m^r over Q: r nonzero rationals.
using TorusPoint = std::vector<Rational>;

struct TorusInstance {
    TorusPoint beta;
    std::vector<TorusPoint> gens;

    std::size_t rank() const { return beta.size(); }

    void validate() const {
        if (beta.empty()) throw InvalidArgument("torus rank must be positive");
        for (auto& x : beta)
            if (is_zero(x)) throw InvalidArgument("torus coordinates must be nonzero");
        for (auto& g : gens) {
            if (g.size() != beta.size()) throw InvalidArgument("torus points of different rank");
            for (auto& x : g)
                if (is_zero(x)) throw InvalidArgument("torus coordinates must be nonzero");
        }
    }
};

namespace detail {

inline bool torus_good_prime(const TorusInstance& t, u64 p) {
    auto ok = [p](const Rational& x) { return mod_u64(numerator(x), p) != 0 && mod_u64(denominator(x), p) != 0; };
    for (auto& x : t.beta)
        if (!ok(x)) return false;
    for (auto& g : t.gens)
        for (auto& x : g)
            if (!ok(x)) return false;
    return true;
}

inline u64 primitive_root(u64 p) {
    if (p == 2) return 1;
    auto fs = factor_u64(p - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (auto& [q, e] : fs) ok = ok && powmod(g, (p - 1) / q, p) != 1;
        if (ok) return g;
    }
}

// Discrete logarithms to a primitive root, tabulated for all of F_p^*.
class DlogTable {
public:
    explicit DlogTable(u64 p) : p_(p), log_(p, 0) {
        const u64 g = primitive_root(p);
        u64 x = 1;
        for (u64 k = 0; k + 1 < p; ++k) {
            log_[x] = k;
            x = mulmod(x, g, p);
        }
    }
    u64 operator()(const Rational& q) const {
        const u64 a = mod_u64(numerator(q), p_), b = mod_u64(denominator(q), p_);
        return (log_[a] + (p_ - 1) - log_[b]) % (p_ - 1);
    }
    u64 order() const { return p_ - 1; }

private:
    u64 p_;
    std::vector<u64> log_;
};

inline PlaceRecord torus_local(const TorusInstance& t, const DlogTable& dl, u64 p) {
    const std::size_t r = t.rank();
    const BigInt n = dl.order();
    Matrix<BigInt> rows;
    for (auto& g : t.gens) {
        std::vector<BigInt> row;
        for (auto& x : g) row.emplace_back(dl(x));
        rows.push_back(row);
    }
    for (std::size_t k = 0; k < r; ++k) {
        std::vector<BigInt> row(r, 0);
        row[k] = n;
        rows.push_back(row);
    }
    std::vector<BigInt> target;
    for (auto& x : t.beta) target.emplace_back(dl(x));
    PlaceRecord rec;
    rec.place = Place::rational(p);
    auto sol = solve_in_span(rows, target);
    rec.status = sol ? PlaceRecord::Status::member : PlaceRecord::Status::non_member;
    if (sol)
        for (std::size_t j = 0; j < t.gens.size(); ++j) rec.witness.push_back(to_string(mod_floor((*sol)[j], n)));
    return rec;
}

} // namespace detail

/// Is beta mod p in the subgroup of (F_p^*)^r generated by the reduced gens?
inline PlaceRecord torus_local_membership(const TorusInstance& t, u64 p) {
    t.validate();
    if (p == 2 || !is_prime(p)) throw InvalidArgument("p must be an odd prime");
    if (!detail::torus_good_prime(t, p)) throw PreconditionFailure("p divides a coordinate");
    return detail::torus_local(t, detail::DlogTable(p), p);
}

inline EvidenceReport torus_scan(const TorusInstance& t, u64 prime_bound) {
    t.validate();
    EvidenceReport rep;
    rep.instance = "torus rank " + std::to_string(t.rank());
    rep.parameters = {{"prime_bound", prime_bound}, {"rank", t.rank()}};
    for (u64 p : primes_up_to(prime_bound)) {
        if (p == 2 || !detail::torus_good_prime(t, p)) continue;
        rep.places.push_back(detail::torus_local(t, detail::DlogTable(p), p));
    }
    finalize(rep);
    rep.verdict = rep.first_witness_prime ? Verdict::non_member_with_witness_place : Verdict::member_mod_torsion;
    return rep;
}

/// Exact membership of beta in the subgroup of (Q^*)^r generated by gens:
/// prime-exponent vectors plus a sign bit per coordinate.
inline std::optional<std::vector<BigInt>> torus_global_membership(const TorusInstance& t) {
    t.validate();
    std::set<BigInt> primes;
    auto collect = [&](const Rational& x) {
        for (const BigInt& n : {abs(numerator(x)), denominator(x)})
            if (n > 1)
                for (auto& [q, e] : factor_bigint(n)) primes.insert(q);
    };
    for (auto& x : t.beta) collect(x);
    for (auto& g : t.gens)
        for (auto& x : g) collect(x);
    const std::vector<BigInt> ps(primes.begin(), primes.end());
    const std::size_t w = ps.size() + 1, r = t.rank();

    auto vec = [&](const TorusPoint& pt) {
        std::vector<BigInt> v(r * w, 0);
        for (std::size_t k = 0; k < r; ++k) {
            BigInt num = abs(numerator(pt[k])), den = denominator(pt[k]);
            for (std::size_t j = 0; j < ps.size(); ++j) {
                while (num % ps[j] == 0) { num /= ps[j]; v[k * w + j] += 1; }
                while (den % ps[j] == 0) { den /= ps[j]; v[k * w + j] -= 1; }
            }
            v[k * w + ps.size()] = pt[k] < 0 ? 1 : 0;
        }
        return v;
    };
    Matrix<BigInt> rows;
    for (auto& g : t.gens) rows.push_back(vec(g));
    for (std::size_t k = 0; k < r; ++k) {
        std::vector<BigInt> s(r * w, 0);
        s[k * w + ps.size()] = 2;
        rows.push_back(s);
    }
    auto sol = solve_in_span(rows, vec(t.beta));
    if (!sol) return std::nullopt;
    sol->resize(t.gens.size());
    return sol;
}

struct TorusCounterexample {
    TorusInstance instance;
    std::size_t places_checked = 0;
};

/// Rank-2 instances that are members at every good p <= prime_bound but not
/// globally: the family beta = (1, a), gens (a, 1), (b, a), (1, b) for
/// multiplicatively independent a, b, then random instances from a small box.
inline std::vector<TorusCounterexample> torus_counterexample_search(u64 prime_bound, int random_trials = 200,
                                                                    u64 seed = 1) {
    std::vector<TorusCounterexample> out;
    auto consider = [&](const TorusInstance& t) {
        if (torus_global_membership(t)) return;
        EvidenceReport rep = torus_scan(t, prime_bound);
        if (rep.first_witness_prime) return;
        out.push_back({t, rep.places.size()});
    };
    const std::vector<i64> small{2, 3, 5, 6, 7, 10};
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = 0; j < small.size(); ++j) {
            if (i == j) continue;
            const Rational a = small[i], b = small[j];
            consider({{1, a}, {{a, 1}, {b, a}, {1, b}}});
        }
    std::mt19937_64 rng(seed);
    const std::vector<i64> box{-6, -3, -2, -1, 2, 3, 6};
    std::uniform_int_distribution<std::size_t> pick(0, box.size() - 1);
    for (int k = 0; k < random_trials; ++k) {
        auto rnd = [&] { return TorusPoint{Rational(box[pick(rng)]), Rational(box[pick(rng)])}; };
        consider({rnd(), {rnd(), rnd(), rnd()}});
    }
    return out;
}

} // namespace mwdep
