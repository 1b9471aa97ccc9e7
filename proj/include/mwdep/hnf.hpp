#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "gaussian.hpp"

namespace mwdep {

template <class R>
struct EuclideanTraits;

template <>
struct EuclideanTraits<BigInt> {
    static BigInt size(const BigInt& a) { return abs(a); }
    static std::pair<BigInt, BigInt> divrem(const BigInt& a, const BigInt& b) {
        BigInt q = floor_div(a, b);
        return {q, a - q * b};
    }
    static BigInt unit_normalizer(const BigInt& a) { return a.sign() < 0 ? BigInt(-1) : BigInt(1); }
};

template <>
struct EuclideanTraits<GaussianInt> {
    static BigInt size(const GaussianInt& a) { return a.norm(); }
    static std::pair<GaussianInt, GaussianInt> divrem(const GaussianInt& a, const GaussianInt& b) {
        return gi_divrem(a, b);
    }
    static GaussianInt unit_normalizer(const GaussianInt& a) { return canonical_unit(a); }
};

template <class R>
using Matrix = std::vector<std::vector<R>>;

/// Row echelon (Hermite) form H = U * M of a k x n matrix M over a Euclidean
/// domain, with U unimodular. Pivots are normalised by unit_normalizer and
/// entries above a pivot are reduced modulo it.
template <class R>
struct Echelon {
    Matrix<R> h;
    Matrix<R> u;
    std::vector<std::size_t> pivot_cols;   // pivot column of row r, r < rank
    std::size_t rank() const { return pivot_cols.size(); }
};

template <class R>
Echelon<R> hermite_form(Matrix<R> m, std::size_t cols) {
    using T = EuclideanTraits<R>;
    const std::size_t rows = m.size();
    for (auto& row : m)
        if (row.size() != cols) throw InvalidArgument("ragged matrix");
    Matrix<R> u(rows, std::vector<R>(rows, R(0)));
    for (std::size_t i = 0; i < rows; ++i) u[i][i] = R(1);

    auto axpy = [&](std::size_t dst, std::size_t src, const R& q) {   // row_dst -= q*row_src
        for (std::size_t c = 0; c < cols; ++c) m[dst][c] -= q * m[src][c];
        for (std::size_t c = 0; c < rows; ++c) u[dst][c] -= q * u[src][c];
    };

    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            std::optional<std::size_t> best;
            for (std::size_t i = r; i < rows; ++i) {
                if (is_zero(m[i][c])) continue;
                if (!best || T::size(m[i][c]) < T::size(m[*best][c])) best = i;
            }
            if (!best) break;
            std::swap(m[r], m[*best]);
            std::swap(u[r], u[*best]);
            bool clean = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (is_zero(m[i][c])) continue;
                auto [q, rem] = T::divrem(m[i][c], m[r][c]);
                axpy(i, r, q);
                if (!is_zero(m[i][c])) clean = false;
            }
            if (clean) break;
        }
        if (is_zero(m[r][c])) continue;
        R unit = T::unit_normalizer(m[r][c]);
        for (auto& e : m[r]) e = unit * e;
        for (auto& e : u[r]) e = unit * e;
        for (std::size_t i = 0; i < r; ++i) {
            if (is_zero(m[i][c])) continue;
            auto [q, rem] = T::divrem(m[i][c], m[r][c]);
            axpy(i, r, q);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(u), std::move(pivots)};
}

/// Finds x with sum_j x_j * gens[j] = target (gens are row vectors), or empty.
template <class R>
std::optional<std::vector<R>> solve_in_span(const Matrix<R>& gens, const std::vector<R>& target) {
    using T = EuclideanTraits<R>;
    const std::size_t n = target.size();
    for (auto& g : gens)
        if (g.size() != n) throw InvalidArgument("generator and target lengths differ");
    if (gens.empty()) {
        for (auto& t : target)
            if (!is_zero(t)) return std::nullopt;
        return std::vector<R>{};
    }
    Echelon<R> e = hermite_form(gens, n);
    std::vector<R> rest = target;
    std::vector<R> y(gens.size(), R(0));
    for (std::size_t r = 0; r < e.rank(); ++r) {
        const std::size_t c = e.pivot_cols[r];
        // everything left of c must already be cleared
        for (std::size_t k = (r == 0 ? 0 : e.pivot_cols[r - 1] + 1); k < c; ++k)
            if (!is_zero(rest[k])) return std::nullopt;
        auto [q, rem] = T::divrem(rest[c], e.h[r][c]);
        if (!is_zero(rem)) return std::nullopt;
        y[r] = q;
        for (std::size_t k = c; k < n; ++k) rest[k] -= q * e.h[r][k];
    }
    for (auto& t : rest)
        if (!is_zero(t)) return std::nullopt;
    std::vector<R> x(gens.size(), R(0));
    for (std::size_t r = 0; r < gens.size(); ++r) {
        if (is_zero(y[r])) continue;
        for (std::size_t j = 0; j < gens.size(); ++j) x[j] += y[r] * e.u[r][j];
    }
    return x;
}

/// Basis of the relation module {x : sum_j x_j * gens[j] = 0}.
template <class R>
Matrix<R> relation_basis(const Matrix<R>& gens, std::size_t cols) {
    if (gens.empty()) return {};
    Echelon<R> e = hermite_form(gens, cols);
    return Matrix<R>(e.u.begin() + static_cast<std::ptrdiff_t>(e.rank()), e.u.end());
}

/// Membership of a target vector in a finitely generated Z[i]-submodule.
/// Columns of `gens` (given as gens[row][col]) are the generators.
inline std::optional<std::vector<GaussianInt>>
gi_module_membership(const Matrix<GaussianInt>& gens, const std::vector<GaussianInt>& target) {
    if (gens.size() != target.size()) throw InvalidArgument("gi_module_membership: dimension mismatch");
    if (gens.empty()) return std::vector<GaussianInt>{};
    const std::size_t ncols = gens[0].size();
    Matrix<GaussianInt> rows(ncols, std::vector<GaussianInt>(gens.size()));
    for (std::size_t r = 0; r < gens.size(); ++r) {
        if (gens[r].size() != ncols) throw InvalidArgument("gi_module_membership: ragged matrix");
        for (std::size_t c = 0; c < ncols; ++c) rows[c][r] = gens[r][c];
    }
    return solve_in_span(rows, target);
}

} // namespace mwdep
