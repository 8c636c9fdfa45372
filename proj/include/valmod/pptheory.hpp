#pragma once
// Primitive-positive formulas over R = K[t;phi], their reduction to atomic
// systems over divisible modules, relative annihilator invariants, theory
// descriptors, and the equivalence deciders.
//
// A p.p. formula is EX ybar : ybar A = xbar B with A (k x m) over the bound
// variables and B (n x m) over the free ones.  Triangularization brings A to
// (A1 | 0) with P a row permutation and Q an accumulated product of
// elementary column operations (kept together with its inverse); the A1
// block is solvable in every divisible module, so only the residual columns
// of BQ survive as atomic equations.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valmod/config.hpp"
#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/hensel.hpp"
#include "valmod/series.hpp"
#include "valmod/skewpoly.hpp"

namespace valmod {

struct MatrixOverR {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SkewPoly> e;  // row-major

    MatrixOverR() = default;
    MatrixOverR(std::size_t r, std::size_t c, std::uint32_t m = 1)
        : rows(r), cols(c), e(r * c, poly_zero(m)) {}

    SkewPoly& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const SkewPoly& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

    friend bool operator==(const MatrixOverR&, const MatrixOverR&) = default;
};

inline MatrixOverR identity_over_r(const TowerContext& tw, std::size_t n, std::uint32_t m) {
    MatrixOverR q(n, n, m);
    for (std::size_t i = 0; i < n; ++i) q.at(i, i) = poly_one(tw, m);
    return q;
}

inline MatrixOverR mat_mul(const TowerContext& tw, const MatrixOverR& a, const MatrixOverR& b) {
    if (a.cols != b.rows) raise("shape-mismatch", "matrix product shape mismatch");
    MatrixOverR r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            SkewPoly acc = poly_zero();
            for (std::size_t k = 0; k < a.cols; ++k)
                acc = add(tw, acc, mul(tw, a.at(i, k), b.at(k, j)));
            r.at(i, j) = acc;
        }
    return r;
}

struct PPFormula {
    MatrixOverR a;  // k x m, bound-variable block
    MatrixOverR b;  // n x m, free-variable block
};

inline void check_formula(const PPFormula& f) {
    if (f.a.cols != f.b.cols)
        raise("shape-mismatch", "bound and free blocks must share the column count");
}

struct Triangularization {
    std::vector<std::size_t> perm;  // row i of P A is row perm[i] of A
    MatrixOverR paq;                // P A Q = (A1 | 0)
    MatrixOverR q;
    MatrixOverR q_inv;
    std::size_t pivots = 0;         // l = width of the A1 block
};

// P A Q = (A1 | 0) with A1 lower triangular and nonzero diagonal; P is a row
// permutation, Q a product of column swaps and col_j <- col_j - col_d * c
// with c produced by right division (degrees strictly decrease, so each
// pivot row terminates).
inline Triangularization triangularize(const TowerContext& tw, const MatrixOverR& a) {
    Triangularization tri;
    tri.paq = a;
    const std::size_t rows = a.rows, cols = a.cols;
    std::uint32_t m = 1;
    for (const auto& q : a.e) m = std::lcm(m, q.field_degree);
    tri.perm.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) tri.perm[i] = i;
    tri.q = identity_over_r(tw, cols, m);
    tri.q_inv = identity_over_r(tw, cols, m);
    auto& r = tri.paq;
    std::size_t d = 0;
    while (d < rows && d < cols) {
        // a row with a nonzero tail, searched in the current order
        std::size_t sel = rows;
        for (std::size_t i = d; i < rows && sel == rows; ++i)
            for (std::size_t j = d; j < cols; ++j)
                if (!is_zero(r.at(i, j))) { sel = i; break; }
        if (sel == rows) break;
        if (sel != d) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(r.at(sel, j), r.at(d, j));
            std::swap(tri.perm[sel], tri.perm[d]);
        }
        for (;;) {
            std::size_t piv = cols;
            for (std::size_t j = d; j < cols; ++j) {
                if (is_zero(r.at(d, j))) continue;
                if (piv == cols || deg(r.at(d, j)) < deg(r.at(d, piv))) piv = j;
            }
            if (piv != d) {
                for (std::size_t i = 0; i < rows; ++i) std::swap(r.at(i, piv), r.at(i, d));
                for (std::size_t i = 0; i < cols; ++i) std::swap(tri.q.at(i, piv), tri.q.at(i, d));
                for (std::size_t j = 0; j < cols; ++j)
                    std::swap(tri.q_inv.at(piv, j), tri.q_inv.at(d, j));
            }
            bool done = true;
            for (std::size_t j = d + 1; j < cols; ++j) {
                if (is_zero(r.at(d, j))) continue;
                const SkewPoly c = right_divmod(tw, r.at(d, j), r.at(d, d)).quot;
                if (is_zero(c)) continue;  // already lower degree than the pivot
                // col_j <- col_j - col_d * c
                for (std::size_t i = 0; i < rows; ++i)
                    r.at(i, j) = sub(tw, r.at(i, j), mul(tw, r.at(i, d), c));
                for (std::size_t i = 0; i < cols; ++i)
                    tri.q.at(i, j) = sub(tw, tri.q.at(i, j), mul(tw, tri.q.at(i, d), c));
                for (std::size_t j2 = 0; j2 < cols; ++j2)
                    tri.q_inv.at(d, j2) = add(tw, tri.q_inv.at(d, j2),
                                              mul(tw, c, tri.q_inv.at(j, j2)));
                if (!is_zero(r.at(d, j))) done = false;
            }
            // after one sweep either the tail is clear or a smaller pivot exists
            bool tail_clear = true;
            for (std::size_t j = d + 1; j < cols; ++j)
                if (!is_zero(r.at(d, j))) tail_clear = false;
            if (tail_clear) break;
            (void)done;
        }
        ++d;
    }
    tri.pivots = d;
    return tri;
}

struct AtomicSystem {
    MatrixOverR residual;             // n x (m - l): columns of BQ past the pivot block
    std::optional<SkewPoly> single;   // n == 1: x . gcd = 0 (0 means no constraint)
};

// Reduction over divisible modules: drop the solvable pivot block, keep the
// residual atomic columns; collapse to one equation for one free variable.
inline AtomicSystem pp_to_atomic(const TowerContext& tw, const PPFormula& f) {
    check_formula(f);
    Triangularization tri = triangularize(tw, f.a);
    MatrixOverR bq = f.b.rows == 0 ? f.b : mat_mul(tw, f.b, tri.q);
    if (f.a.rows == 0) {
        bq = f.b;
        tri.pivots = 0;
    }
    AtomicSystem out;
    const std::size_t l = tri.pivots, mcols = f.a.cols, n = f.b.rows;
    out.residual = MatrixOverR(n, mcols - l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = l; j < mcols; ++j) out.residual.at(i, j - l) = bq.at(i, j);
    if (n == 1) {
        SkewPoly g = poly_zero();
        for (std::size_t j = 0; j < out.residual.cols; ++j) {
            const SkewPoly& e = out.residual.at(0, j);
            if (is_zero(e)) continue;
            g = is_zero(g) ? monic(tw, e) : rgcd(tw, g, e);
        }
        out.single = g;
    }
    return out;
}

struct SatResult {
    bool satisfied = false;
    std::vector<SeriesElem> witness;  // ybar on success
    std::string detail;
};

// Decide ybar-solvability of ybar A = xbar B at a point of the series model
// by back-substitution through the triangular block, then checking the
// residual atomic columns at working precision.
inline SatResult pp_satisfies(const TowerContext& tw, const Config& cfg, const PPFormula& f,
                              const std::vector<SeriesElem>& x) {
    check_formula(f);
    if (x.size() != f.b.rows) raise("shape-mismatch", "point arity mismatch");
    Triangularization tri = triangularize(tw, f.a);
    const std::size_t k = f.a.rows, l = tri.pivots, mcols = f.a.cols;
    MatrixOverR bq = f.b.rows == 0 ? f.b : mat_mul(tw, f.b, tri.q);
    std::vector<SeriesElem> c(mcols, series_zero(tw));
    for (std::size_t j = 0; j < mcols; ++j) {
        SeriesElem acc = series_zero(tw);
        for (std::size_t i = 0; i < x.size(); ++i)
            acc = series_add(tw, acc, series_act(tw, x[i], bq.at(i, j)));
        c[j] = acc;
    }
    std::vector<SeriesElem> z(k, series_zero(tw));
    for (std::size_t jj = l; jj-- > 0;) {
        SeriesElem rhs = c[jj];
        for (std::size_t i = jj + 1; i < k; ++i)
            rhs = series_sub(tw, rhs, series_act(tw, z[i], tri.paq.at(i, jj)));
        z[jj] = solve_div(tw, cfg, tri.paq.at(jj, jj), rhs);
    }
    SatResult out;
    for (std::size_t j = l; j < mcols; ++j) {
        if (c[j].terms.empty()) continue;
        out.satisfied = false;
        out.detail = "residual column " + std::to_string(j - l) + " is nonzero";
        return out;
    }
    out.satisfied = true;
    out.witness.assign(k, series_zero(tw));
    for (std::size_t i = 0; i < k; ++i) out.witness[tri.perm[i]] = z[i];
    return out;
}

// ---- theory descriptors -----------------------------------------------------

struct EtaCount {
    bool infinite = false;
    std::uint64_t value = 1;

    static EtaCount inf() { return EtaCount{true, 0}; }
    static EtaCount finite(std::uint64_t v) { return EtaCount{false, v}; }

    friend bool operator==(const EtaCount&, const EtaCount&) = default;
};

// Pure structural order on polynomials (degree, then coefficient vectors in
// counting order): used to keep descriptor tables canonical.
inline bool poly_key_less(const SkewPoly& a, const SkewPoly& b) {
    if (deg(a) != deg(b)) return deg(a) < deg(b);
    if (is_zero(a)) return false;  // both zero
    if (a.field_degree != b.field_degree) return a.field_degree < b.field_degree;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        for (std::uint32_t j = a.c[i].m; j-- > 0;) {
            if (a.c[i].c[j] != b.c[i].c[j]) return a.c[i].c[j] < b.c[i].c[j];
        }
    }
    return false;
}

struct TheoryDescriptor {
    std::uint32_t p = 2;
    std::uint32_t s = 1;
    std::uint32_t m = 1;  // coefficient field F_{p^m}
    std::vector<std::pair<SkewPoly, EtaCount>> table;  // sorted by poly_key_less
    std::optional<std::string> valueset_tag;
    std::optional<bool> theta_realized;

    void sort_table() {
        std::sort(table.begin(), table.end(),
                  [](const auto& a, const auto& b) { return poly_key_less(a.first, b.first); });
    }

    std::optional<EtaCount> lookup(const SkewPoly& key) const {
        for (const auto& [k, v] : table)
            if (k == key) return v;
        return std::nullopt;
    }
};

inline std::string bigmodel_valueset_tag(std::uint32_t p, std::uint32_t s) {
    return "p-power-fraction-chain(p=" + std::to_string(p) + ",s=" + std::to_string(s) + ")";
}

// eta of an arbitrary nonzero polynomial under a descriptor: the product of
// the table entries of its irreducible slices.
inline EtaCount descriptor_eta(const TowerContext& tw, const Config& cfg,
                               const TheoryDescriptor& t, const SkewPoly& q) {
    if (is_zero(q)) return EtaCount::inf();
    if (deg(q) == 0) return EtaCount::finite(1);
    Factorization fac = factorize(tw, q, cfg.factor_deg_bound);
    std::vector<SkewPoly> parts;
    if (fac.t_pow > 0) parts.push_back(poly_t(tw, q.field_degree));
    for (auto& f : fac.factors) parts.push_back(f);
    EtaCount out = EtaCount::finite(1);
    for (std::size_t idx = 0; idx < parts.size(); ++idx) {
        const std::uint32_t reps = (idx == 0 && fac.t_pow > 0) ? fac.t_pow : 1;
        const SkewPoly rep = conjugacy_rep(tw, parts[idx]);
        auto v = t.lookup(rep);
        if (!v) raise("missing-descriptor-entry", "descriptor lacks an eta entry");
        for (std::uint32_t rcount = 0; rcount < reps; ++rcount) {
            if (v->infinite) return EtaCount::inf();
            if (v->value != 0 && out.value > UINT64_MAX / v->value)
                raise("value-overflow", "eta product overflow");
            out.value *= v->value;
        }
    }
    return out;
}

struct QuotientResult {
    SkewPoly r_prime;
    bool precondition_checked = false;  // semantic containment verified in the model
};

namespace detail {

inline bool containment_in_model(const TowerContext& tw, const Config& cfg, const SkewPoly& q,
                                 const SkewPoly& s) {
    AnnSet as = ann_roots(tw, cfg, s);
    for (const auto& x : as.roots)
        if (!tw.is_zero(const_act(tw, x, q))) return false;
    return true;
}

inline SkewPoly quotient_recurse(const TowerContext& tw, const Config& cfg,
                                 const TheoryDescriptor& t, const SkewPoly& q,
                                 const SkewPoly& s) {
    if (deg(s) == 0) return q;  // ann(s) = 0
    if (divides(tw, s, q)) return right_divmod(tw, q, s).quot;
    Factorization fac = factorize(tw, s, cfg.factor_deg_bound);
    std::vector<SkewPoly> parts;
    for (std::uint32_t i = 0; i < fac.t_pow; ++i) parts.push_back(poly_t(tw, s.field_degree));
    for (auto& f : fac.factors) parts.push_back(f);
    const SkewPoly s1 = parts.front();
    SkewPoly rest = poly_one(tw, s.field_degree);
    for (std::size_t i = 1; i < parts.size(); ++i) rest = mul(tw, rest, parts[i]);
    rest = mul_const_right(tw, rest, fac.unit);
    const EtaCount eta_s1 = descriptor_eta(tw, cfg, t, s1);
    if (eta_s1.infinite || eta_s1.value > 1) {
        if (!divides(tw, s1, q))
            raise("precondition-failed",
                  "an irreducible slice of s has roots but does not divide q");
        const SkewPoly r = right_divmod(tw, q, s1).quot;
        const EtaCount eta_rest = descriptor_eta(tw, cfg, t, rest);
        if (!eta_rest.infinite && eta_rest.value == 1) return r;
        return quotient_recurse(tw, cfg, t, r, rest);
    }
    // rootless head: push through the p.p. formula  EX y : y s1 = x  &  y q = 0
    PPFormula f;
    f.a = MatrixOverR(1, 2, s.field_degree);
    f.a.at(0, 0) = s1;
    f.a.at(0, 1) = q;
    f.b = MatrixOverR(1, 2, s.field_degree);
    f.b.at(0, 0) = poly_one(tw, s.field_degree);
    AtomicSystem at = pp_to_atomic(tw, f);
    const SkewPoly q1 = *at.single;
    return quotient_recurse(tw, cfg, t, q1, rest);
}

}  // namespace detail

// r' with ann(q)/ann(s) isomorphic to ann(r'): the contract is
// eta(q) = eta(s) * eta(r') whenever all three are finite.
inline QuotientResult quotient_invariant(const TowerContext& tw, const Config& cfg,
                                         const SkewPoly& q, const SkewPoly& s,
                                         const TheoryDescriptor& t) {
    if (is_zero(q) || is_zero(s)) raise("zero-argument", "quotient invariant needs nonzero q, s");
    QuotientResult out;
    if (t.valueset_tag && *t.valueset_tag == bigmodel_valueset_tag(t.p, t.s)) {
        try {
            if (!detail::containment_in_model(tw, cfg, q, s))
                raise("precondition-failed", "ann(s) is not contained in ann(q)");
            out.precondition_checked = true;
        } catch (const DomainError& e) {
            if (std::string(e.name()) == "precondition-failed") throw;
            out.precondition_checked = false;  // splitting out of reach: trust the table
        }
    }
    out.r_prime = detail::quotient_recurse(tw, cfg, t, q, s);
    return out;
}

// |psi(M)/phi(M)| for single-variable p.p. formulas with phi(M) inside
// psi(M); infinite exactly when psi collapses to x.0 = 0 and phi is a
// genuine torsion condition.  The entailment is checked syntactically via
// divisibility, semantically when the descriptor names the series model,
// and otherwise trusted (entailment_checked reports which happened).
inline EtaCount pp_index(const TowerContext& tw, const Config& cfg, const PPFormula& phi,
                         const PPFormula& psi, const TheoryDescriptor& t,
                         bool* entailment_checked = nullptr) {
    if (phi.b.rows != 1 || psi.b.rows != 1)
        raise("multi-variable-residue", "p.p. indexes live in the single-variable fragment");
    const SkewPoly r = *pp_to_atomic(tw, phi).single;  // phi(x): x.r = 0
    const SkewPoly q = *pp_to_atomic(tw, psi).single;  // psi(x): x.q = 0
    if (entailment_checked) *entailment_checked = true;
    if (is_zero(q)) {
        if (is_zero(r)) return EtaCount::finite(1);
        return EtaCount::inf();
    }
    if (is_zero(r))
        raise("precondition-failed", "phi defines the whole module, psi does not");
    QuotientResult qr = quotient_invariant(tw, cfg, q, r, t);
    if (entailment_checked)
        *entailment_checked = divides(tw, r, q) || qr.precondition_checked;
    return descriptor_eta(tw, cfg, t, qr.r_prime);
}

// The complete-theory table of the series model over K = F_{p^k_degree}:
// eta on every canonical conjugacy representative of degree <= d.
inline TheoryDescriptor theory_of_bigmodel(const TowerContext& tw, const Config& cfg,
                                           std::uint32_t k_degree, std::uint32_t d) {
    if (d > cfg.factor_deg_bound)
        raise("degree-bound-exceeded", "descriptor degree exceeds the factorization bound");
    TheoryDescriptor t;
    t.p = tw.p();
    t.s = tw.s();
    t.m = k_degree;
    t.valueset_tag = bigmodel_valueset_tag(tw.p(), tw.s());
    t.theta_realized = true;
    for (std::uint32_t k = 1; k <= d; ++k) {
        for_each_monic(tw, k_degree, k, [&](const SkewPoly& cand) {
            if (!is_irreducible(tw, cand)) return true;
            const SkewPoly rep = conjugacy_rep(tw, cand);
            if (!t.lookup(rep))
                t.table.emplace_back(rep, EtaCount::finite(eta(tw, cfg, rep).count));
            return true;
        });
    }
    t.sort_table();
    return t;
}

struct EquivResult {
    bool equivalent = false;
    std::optional<SkewPoly> disagreement;  // least disagreeing representative
};

// Tables agree on every shared key; one key range must contain the other.
inline EquivResult decide_equiv_divisible(const TheoryDescriptor& t1, const TheoryDescriptor& t2) {
    if (t1.p != t2.p || t1.s != t2.s || t1.m != t2.m)
        raise("k-mismatch", "descriptors identify different base data");
    auto contains = [](const TheoryDescriptor& big, const TheoryDescriptor& small) {
        for (const auto& [k, v] : small.table)
            if (!big.lookup(k)) return false;
        return true;
    };
    const bool c12 = contains(t1, t2), c21 = contains(t2, t1);
    if (!c12 && !c21)
        raise("incomparable-descriptors", "neither key range covers the other");
    const TheoryDescriptor& small = c12 ? t2 : t1;
    const TheoryDescriptor& big = c12 ? t1 : t2;
    EquivResult out;
    for (const auto& [k, v] : small.table) {
        const auto w = big.lookup(k);
        if (!(*w == v)) {
            out.equivalent = false;
            out.disagreement = k;
            return out;
        }
    }
    out.equivalent = true;
    return out;
}

// Elementary equivalence of henselian divisible valued modules at the
// descriptor level: torsion tables agree and the value-set theories (opaque
// tags, with the theta-realization bit) coincide.
inline EquivResult decide_equiv_ake(const TheoryDescriptor& t1, const TheoryDescriptor& t2) {
    if (!t1.valueset_tag || !t2.valueset_tag)
        raise("missing-tags", "AKE comparison needs value-set tags on both descriptors");
    EquivResult tor = decide_equiv_divisible(t1, t2);
    if (!tor.equivalent) return tor;
    EquivResult out;
    out.equivalent = (*t1.valueset_tag == *t2.valueset_tag) &&
                     (t1.theta_realized == t2.theta_realized);
    return out;
}

}  // namespace valmod
