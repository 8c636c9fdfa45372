#pragma once
// The twisted polynomial ring R = K[t; phi] over a finite field K = F_{p^m}
// from the tower, phi = x -> x^(p^s): arithmetic, right Euclidean division,
// right gcd, least-degree common right multiple, separable splitting,
// factorization into irreducibles, and K-conjugacy of irreducibles.
//
// Divisibility convention: d divides q when q = d * c for some c, i.e. the
// divisor sits on the left and right_divmod(q, d).rem == 0.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/fp_linalg.hpp"
#include "valmod/skew_core.hpp"

namespace valmod {

struct SkewPoly {
    std::uint32_t field_degree = 1;   // m of the coefficient field F_{p^m}
    std::vector<FieldElem> c;         // c[i] multiplies t^i; no trailing zero

    // the zero polynomial is field-agnostic
    friend bool operator==(const SkewPoly& a, const SkewPoly& b) {
        if (a.c.empty() || b.c.empty()) return a.c.empty() && b.c.empty();
        return a.field_degree == b.field_degree && a.c == b.c;
    }
};

// Coefficient-field adapter binding a tower context and a fixed degree.
struct TowerField {
    using Elem = FieldElem;
    const TowerContext* tw;
    std::uint32_t m;

    Elem zero() const { return tw->zero(m); }
    Elem one() const { return tw->one(m); }
    bool is_zero(const Elem& x) const { return tw->is_zero(x); }
    Elem add(const Elem& a, const Elem& b) const { return tw->add(a, b); }
    Elem neg(const Elem& a) const { return tw->neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return tw->mul(a, b); }
    Elem inv(const Elem& a) const { return tw->inv(a); }
    Elem phi(const Elem& a) const { return tw->frob_pow(a, 1); }
};

inline int deg(const SkewPoly& q) { return static_cast<int>(q.c.size()) - 1; }
inline bool is_zero(const SkewPoly& q) { return q.c.empty(); }

inline SkewPoly poly_zero(std::uint32_t m = 1) { return SkewPoly{m, {}}; }

inline SkewPoly make_poly(const TowerContext& tw, std::uint32_t m,
                          std::vector<FieldElem> coeffs) {
    for (auto& e : coeffs) e = tw.embed_lift(e, m);
    SkewPoly q{m, std::move(coeffs)};
    while (!q.c.empty() && tw.is_zero(q.c.back())) q.c.pop_back();
    return q;
}

inline SkewPoly poly_one(const TowerContext& tw, std::uint32_t m = 1) {
    return SkewPoly{m, {tw.one(m)}};
}

inline SkewPoly poly_t(const TowerContext& tw, std::uint32_t m = 1) {
    return SkewPoly{m, {tw.zero(m), tw.one(m)}};
}

inline SkewPoly poly_t_pow(const TowerContext& tw, std::uint32_t n, std::uint32_t m = 1) {
    std::vector<FieldElem> c(n + 1, tw.zero(m));
    c[n] = tw.one(m);
    return SkewPoly{m, std::move(c)};
}

inline SkewPoly poly_const(const TowerContext& tw, const FieldElem& a) {
    if (tw.is_zero(a)) return poly_zero(a.m);
    return SkewPoly{a.m, {a}};
}

// Lift a polynomial's coefficients into F_{p^m2}, m | m2.
inline SkewPoly lift_poly(const TowerContext& tw, const SkewPoly& q, std::uint32_t m2) {
    if (q.field_degree == m2) return q;
    SkewPoly r{m2, {}};
    r.c.reserve(q.c.size());
    for (const auto& e : q.c) r.c.push_back(tw.embed_lift(e, m2));
    return r;
}

inline std::pair<SkewPoly, SkewPoly> to_common_field(const TowerContext& tw,
                                                     const SkewPoly& a, const SkewPoly& b) {
    if (a.field_degree == b.field_degree) return {a, b};
    const std::uint32_t l = std::lcm(a.field_degree, b.field_degree);
    if (l > tw.m_max()) raise("mmax-exceeded", "no admitted common coefficient field");
    return {lift_poly(tw, a, l), lift_poly(tw, b, l)};
}

inline SkewPoly add(const TowerContext& tw, const SkewPoly& a, const SkewPoly& b) {
    auto [x, y] = to_common_field(tw, a, b);
    TowerField f{&tw, x.field_degree};
    return SkewPoly{x.field_degree, skew_add(f, x.c, y.c)};
}

inline SkewPoly neg(const TowerContext& tw, const SkewPoly& a) {
    TowerField f{&tw, a.field_degree};
    return SkewPoly{a.field_degree, skew_neg(f, a.c)};
}

inline SkewPoly sub(const TowerContext& tw, const SkewPoly& a, const SkewPoly& b) {
    return add(tw, a, neg(tw, b));
}

inline SkewPoly mul(const TowerContext& tw, const SkewPoly& a, const SkewPoly& b) {
    auto [x, y] = to_common_field(tw, a, b);
    TowerField f{&tw, x.field_degree};
    return SkewPoly{x.field_degree, skew_mul(f, x.c, y.c)};
}

inline SkewPoly mul_const_right(const TowerContext& tw, const SkewPoly& a, const FieldElem& u) {
    return mul(tw, a, poly_const(tw, u));
}

struct DivModResult {
    SkewPoly quot;
    SkewPoly rem;
};

// q = d * quot + rem, deg rem < deg d.
inline DivModResult right_divmod(const TowerContext& tw, const SkewPoly& q, const SkewPoly& d) {
    if (is_zero(d)) raise("division-by-zero", "right division by zero");
    auto [x, y] = to_common_field(tw, q, d);
    TowerField f{&tw, x.field_degree};
    auto r = skew_divmod(f, x.c, y.c);
    return DivModResult{SkewPoly{x.field_degree, std::move(r.quot)},
                        SkewPoly{x.field_degree, std::move(r.rem)}};
}

inline bool divides(const TowerContext& tw, const SkewPoly& d, const SkewPoly& q) {
    return is_zero(right_divmod(tw, q, d).rem);
}

inline SkewPoly monic(const TowerContext& tw, const SkewPoly& q) {
    if (is_zero(q)) return q;
    return mul_const_right(tw, q, tw.inv(q.c.back()));
}

// Unique monic common divisor of maximal degree, by the Euclidean scheme.
inline SkewPoly rgcd(const TowerContext& tw, const SkewPoly& a0, const SkewPoly& b0) {
    if (is_zero(a0) && is_zero(b0)) raise("both-zero", "gcd of two zero polynomials");
    auto [a, b] = to_common_field(tw, a0, b0);
    while (!is_zero(b)) {
        SkewPoly r = right_divmod(tw, a, b).rem;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(tw, a);
}

// Least-degree monic common right multiple: the smallest D admitting a
// nonzero prime-field solution of a x = b y with deg x <= D - deg a,
// deg y <= D - deg b.  Twisted multiplication is F_p-linear in the
// right-hand factor, so the solutions form an F_p-kernel.
inline SkewPoly lclm(const TowerContext& tw, const SkewPoly& a0, const SkewPoly& b0) {
    if (is_zero(a0) || is_zero(b0)) raise("zero-argument", "lclm requires nonzero arguments");
    auto [a, b] = to_common_field(tw, a0, b0);
    const std::uint32_t m = a.field_degree;
    const int da = deg(a), db = deg(b);
    TowerField f{&tw, m};
    for (int D = std::max(da, db); D <= da + db; ++D) {
        const int nx = D - da + 1, ny = D - db + 1;  // coefficient counts
        fp::Matrix sys((D + 1) * m, static_cast<std::size_t>(nx + ny) * m);
        auto put = [&](const SkewCoeffVec<TowerField>& prod, std::size_t col, Residue sign_p) {
            for (std::size_t i = 0; i < prod.size(); ++i)
                for (std::uint32_t j = 0; j < m; ++j)
                    sys.at(i * m + j, col) =
                        sign_p ? fp::sub(0, prod[i].c[j], tw.p()) : prod[i].c[j];
        };
        for (int k = 0; k < nx; ++k)
            for (std::uint32_t j = 0; j < m; ++j) {
                FieldElem e = tw.zero(m);
                e.c[j] = 1;
                SkewCoeffVec<TowerField> xk(static_cast<std::size_t>(k) + 1, tw.zero(m));
                xk[k] = e;
                put(skew_mul(f, a.c, xk), static_cast<std::size_t>(k) * m + j, 0);
            }
        for (int k = 0; k < ny; ++k)
            for (std::uint32_t j = 0; j < m; ++j) {
                FieldElem e = tw.zero(m);
                e.c[j] = 1;
                SkewCoeffVec<TowerField> yk(static_cast<std::size_t>(k) + 1, tw.zero(m));
                yk[k] = e;
                put(skew_mul(f, b.c, yk), (static_cast<std::size_t>(nx) + k) * m + j, 1);
            }
        auto basis = fp::kernel(sys, tw.p());
        if (basis.empty()) continue;
        const auto& v = basis.front();
        SkewPoly x{m, {}};
        x.c.assign(nx, tw.zero(m));
        for (int k = 0; k < nx; ++k)
            for (std::uint32_t j = 0; j < m; ++j)
                x.c[k].c[j] = v[static_cast<std::size_t>(k) * m + j];
        while (!x.c.empty() && tw.is_zero(x.c.back())) x.c.pop_back();
        return monic(tw, mul(tw, a, x));
    }
    raise("internal-error", "no common right multiple within the Ore bound");
}

struct SepSplit {
    std::uint32_t t_pow = 0;  // deg_is
    SkewPoly separable;       // nonzero constant coefficient
};

// q = t^n s with s separable; pure coefficient shift since t^n (sum t^i a_i)
// = sum t^(n+i) a_i.
inline SepSplit sep_split(const TowerContext& tw, const SkewPoly& q) {
    if (is_zero(q)) raise("zero-input", "cannot split the zero polynomial");
    std::uint32_t n = 0;
    while (n < q.c.size() && tw.is_zero(q.c[n])) ++n;
    SkewPoly s{q.field_degree, std::vector<FieldElem>(q.c.begin() + n, q.c.end())};
    return SepSplit{n, std::move(s)};
}

inline bool is_separable(const TowerContext& tw, const SkewPoly& q) {
    return !is_zero(q) && !tw.is_zero(q.c.front());
}

// Monic polynomials of degree k over F_{p^m}, visited in counting order of
// the non-leading coefficient tuple (index 0 fastest).
template <class Fn>
void for_each_monic(const TowerContext& tw, std::uint32_t m, std::uint32_t k, Fn&& fn) {
    std::vector<std::uint64_t> idx(k, 0);
    const std::uint64_t q = tw.field_size(m);
    for (;;) {
        SkewPoly cand{m, std::vector<FieldElem>(k + 1, tw.zero(m))};
        for (std::uint32_t i = 0; i < k; ++i) cand.c[i] = tw.elem_at(m, idx[i]);
        cand.c[k] = tw.one(m);
        if (!fn(cand)) return;
        std::uint32_t pos = 0;
        while (pos < k) {
            if (++idx[pos] < q) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == k) return;
    }
}

// No monic left divisor of degree strictly between 0 and deg q.
inline bool is_irreducible(const TowerContext& tw, const SkewPoly& q) {
    const int dq = deg(q);
    if (dq <= 0) return false;
    if (dq == 1) return true;
    for (int k = 1; k < dq; ++k) {
        bool found = false;
        for_each_monic(tw, q.field_degree, static_cast<std::uint32_t>(k),
                       [&](const SkewPoly& d) {
                           if (divides(tw, d, q)) {
                               found = true;
                               return false;
                           }
                           return true;
                       });
        if (found) return false;
    }
    return true;
}

struct Factorization {
    std::uint32_t t_pow = 0;
    std::vector<SkewPoly> factors;  // monic irreducibles, composition order
    FieldElem unit;                 // q = t^n f_1 ... f_k * unit
};

// q = t^n q_1 ... q_k u with monic irreducible q_i, found by scanning monic
// left divisors in increasing degree, coefficients in counting order.
inline Factorization factorize(const TowerContext& tw, const SkewPoly& q,
                               std::uint32_t deg_bound = 8) {
    if (is_zero(q)) raise("zero-input", "cannot factor the zero polynomial");
    if (deg(q) > static_cast<int>(deg_bound))
        raise("degree-bound-exceeded", "factorization degree bound exceeded");
    auto [n, s] = sep_split(tw, q);
    Factorization out;
    out.t_pow = n;
    while (deg(s) > 0) {
        SkewPoly factor;
        bool found = false;
        for (int k = 1; k < deg(s) && !found; ++k)
            for_each_monic(tw, s.field_degree, static_cast<std::uint32_t>(k),
                           [&](const SkewPoly& d) {
                               if (divides(tw, d, s)) {
                                   factor = d;
                                   found = true;
                                   return false;
                               }
                               return true;
                           });
        if (!found) factor = monic(tw, s);  // s itself is irreducible
        auto dm = right_divmod(tw, s, factor);
        out.factors.push_back(factor);
        s = dm.quot;
    }
    out.unit = is_zero(s) ? tw.zero(q.field_degree) : s.c[0];
    return out;
}

inline SkewPoly recompose(const TowerContext& tw, const Factorization& f) {
    SkewPoly r = poly_t_pow(tw, f.t_pow, f.unit.m);
    for (const auto& q : f.factors) r = mul(tw, r, q);
    return mul_const_right(tw, r, f.unit);
}

// phi applied coefficientwise: the unique q1 with q t = t q1.
inline SkewPoly t_conjugate(const TowerContext& tw, const SkewPoly& q) {
    SkewPoly r = q;
    for (auto& e : r.c) e = tw.frob_pow(e, 1);
    return r;
}

// K-conjugacy witness: lambda, mu in K^x with q = lambda r mu, by scanning
// all unit pairs.
inline std::optional<std::pair<FieldElem, FieldElem>>
is_k_conjugate(const TowerContext& tw, const SkewPoly& q, const SkewPoly& r) {
    if (!is_irreducible(tw, q) || !is_irreducible(tw, r))
        raise("non-irreducible-input", "conjugacy is defined on irreducibles");
    auto [a, b] = to_common_field(tw, q, r);
    const std::uint64_t sz = tw.field_size(a.field_degree);
    for (std::uint64_t i = 1; i < sz; ++i) {
        const FieldElem lambda = tw.elem_at(a.field_degree, i);
        const SkewPoly lr = mul(tw, poly_const(tw, lambda), b);
        for (std::uint64_t j = 1; j < sz; ++j) {
            const FieldElem mu = tw.elem_at(a.field_degree, j);
            if (mul_const_right(tw, lr, mu) == a) return std::make_pair(lambda, mu);
        }
    }
    return std::nullopt;
}

inline bool poly_counting_less(const TowerContext& tw, const SkewPoly& a, const SkewPoly& b) {
    if (deg(a) != deg(b)) return deg(a) < deg(b);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == b.c[i]) continue;
        return tw.counting_less(a.c[i], b.c[i]);
    }
    return false;
}

// Canonical representative of the K-conjugacy orbit: the least monic
// conjugate under the coefficient counting order.  For a monic q the monic
// conjugates are lambda q phi^deg(lambda)^{-1}, one per unit lambda.
inline SkewPoly conjugacy_rep(const TowerContext& tw, const SkewPoly& q0) {
    if (!is_irreducible(tw, q0))
        raise("non-irreducible-input", "representatives are defined on irreducibles");
    const SkewPoly q = monic(tw, q0);
    SkewPoly best = q;
    const std::uint64_t sz = tw.field_size(q.field_degree);
    for (std::uint64_t i = 1; i < sz; ++i) {
        const FieldElem lambda = tw.elem_at(q.field_degree, i);
        const FieldElem mu = tw.inv(tw.frob_pow(lambda, deg(q)));
        SkewPoly cand = mul_const_right(tw, mul(tw, poly_const(tw, lambda), q), mu);
        if (poly_counting_less(tw, cand, best)) best = cand;
    }
    return best;
}

}  // namespace valmod
