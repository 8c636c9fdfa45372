#pragma once
// Dense linear algebra over the prime field F_p at desk scale.
//
// Everything here works on row-major matrices of residues.  The reductions
// are deterministic (leftmost pivot, rows scanned top-down) so that callers
// can rely on canonical particular solutions and canonical kernel bases.

#include <cstdint>
#include <optional>
#include <vector>

#include "valmod/errors.hpp"

namespace valmod::fp {

using Residue = std::uint32_t;
using Row = std::vector<Residue>;

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Residue> a;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Residue& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    Residue at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline Residue add(Residue x, Residue y, Residue p) { return (x + y) % p; }
inline Residue sub(Residue x, Residue y, Residue p) { return (x + p - y % p) % p; }
inline Residue mul(Residue x, Residue y, Residue p) {
    return static_cast<Residue>((static_cast<std::uint64_t>(x) * y) % p);
}

inline Residue pow(Residue x, std::uint64_t e, Residue p) {
    Residue r = 1 % p;
    x %= p;
    while (e) {
        if (e & 1) r = mul(r, x, p);
        x = mul(x, x, p);
        e >>= 1;
    }
    return r;
}

inline Residue inv(Residue x, Residue p) {
    x %= p;
    if (x == 0) raise("division-by-zero", "inverse of 0 in F_p");
    return pow(x, p - 2, p);  // p prime
}

// In-place reduced row echelon form.  Returns the pivot column of each pivot
// row, in order.
inline std::vector<std::size_t> rref(Matrix& m, Residue p) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t sel = r;
        while (sel < m.rows && m.at(sel, c) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
        const Residue piv_inv = inv(m.at(r, c), p);
        for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = mul(m.at(r, j), piv_inv, p);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            const Residue f = m.at(i, c);
            for (std::size_t j = c; j < m.cols; ++j)
                m.at(i, j) = sub(m.at(i, j), mul(f, m.at(r, j), p), p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Canonical solution of A x = b (free variables set to 0), or nullopt.
inline std::optional<Row> solve(const Matrix& a, const Row& b, Residue p) {
    Matrix aug(a.rows, a.cols + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j) % p;
        aug.at(i, a.cols) = b[i] % p;
    }
    const auto pivots = rref(aug, p);
    for (std::size_t k = 0; k < pivots.size(); ++k)
        if (pivots[k] == a.cols) return std::nullopt;  // 0 = 1 row
    Row x(a.cols, 0);
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, a.cols);
    return x;
}

// Canonical kernel basis of A (one vector per free column, unit in the free
// position).
inline std::vector<Row> kernel(const Matrix& a, Residue p) {
    Matrix m = a;
    for (auto& v : m.a) v %= p;
    const auto pivots = rref(m, p);
    std::vector<bool> is_pivot(a.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Row> basis;
    for (std::size_t c = 0; c < a.cols; ++c) {
        if (is_pivot[c]) continue;
        Row v(a.cols, 0);
        v[c] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = sub(0, m.at(k, c), p);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t rank(const Matrix& a, Residue p) {
    Matrix m = a;
    for (auto& v : m.a) v %= p;
    return rref(m, p).size();
}

}  // namespace valmod::fp
