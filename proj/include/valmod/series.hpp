#pragma once
// The concrete henselian divisible valued module at desk scale: truncated
// generalized Laurent series over the field tower, exponents in Z[1/p] with
// denominators capped at p^k_max, coefficients anywhere in the tower.
//
// A SeriesElem knows its terms below an absolute precision cutoff; terms at
// or above the cutoff are unknown.  Every operation propagates the tightest
// sound cutoff, and valuation queries that would have to read at or beyond
// the cutoff raise "indeterminate" rather than guess.
//
// Module action: x.t raises coefficients to the p^s and scales exponents by
// p^s (so v(x.t) = tau(v(x))), x.lambda multiplies coefficients.  Torsion
// elements are exactly the constants (exponent-0 support): the algebraic
// elements of the model.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/skewpoly.hpp"
#include "valmod/value.hpp"

namespace valmod {

struct SeriesTerm {
    Value exponent;
    FieldElem coef;

    friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

struct SeriesElem {
    std::uint32_t field_degree = 1;
    std::vector<SeriesTerm> terms;              // ascending exponents, nonzero coefs
    Value precision = Value::infinity();        // terms with exponent >= precision unknown

    friend bool operator==(const SeriesElem&, const SeriesElem&) = default;
};

inline SeriesElem series_zero(const TowerContext& tw, std::uint32_t m = 1) {
    return SeriesElem{m, {}, Value::infinity(tw.p())};
}

inline bool is_exact_zero(const SeriesElem& x) {
    return x.terms.empty() && x.precision.inf;
}

// Sort, merge equal exponents, drop zero coefficients and terms >= cutoff.
inline SeriesElem series_normalize(const TowerContext& tw, SeriesElem x) {
    std::stable_sort(x.terms.begin(), x.terms.end(),
                     [](const SeriesTerm& a, const SeriesTerm& b) { return a.exponent < b.exponent; });
    std::vector<SeriesTerm> out;
    for (auto& t : x.terms) {
        if (!out.empty() && out.back().exponent == t.exponent) {
            out.back().coef = tw.add(out.back().coef, t.coef);
        } else {
            out.push_back(t);
        }
    }
    std::vector<SeriesTerm> kept;
    for (auto& t : out) {
        if (t.exponent.inf) continue;
        if (!(t.exponent < x.precision)) continue;
        FieldElem c = tw.embed_lift(t.coef, x.field_degree);
        if (!tw.is_zero(c)) kept.push_back(SeriesTerm{t.exponent, std::move(c)});
    }
    x.terms = std::move(kept);
    return x;
}

inline SeriesElem series_monomial(const TowerContext& tw, const FieldElem& c, const Value& e,
                                  Value precision = Value{true}) {
    if (precision.inf) precision = Value::infinity(tw.p());
    SeriesElem x{c.m, {SeriesTerm{e, c}}, precision};
    return series_normalize(tw, std::move(x));
}

inline SeriesElem series_const(const TowerContext& tw, const FieldElem& c) {
    return series_monomial(tw, c, Value::integer(0, tw.p()));
}

inline SeriesElem series_u_pow(const TowerContext& tw, const Value& e) {
    return series_monomial(tw, tw.one(1), e);
}

inline SeriesElem series_with_precision(const TowerContext& tw, SeriesElem x, const Value& prec) {
    x.precision = value_min(x.precision, prec);
    return series_normalize(tw, std::move(x));
}

inline SeriesElem series_lift(const TowerContext& tw, const SeriesElem& x, std::uint32_t m) {
    if (x.field_degree == m) return x;
    SeriesElem r{m, x.terms, x.precision};
    for (auto& t : r.terms) t.coef = tw.embed_lift(t.coef, m);
    return r;
}

inline std::pair<SeriesElem, SeriesElem> series_to_common(const TowerContext& tw,
                                                          const SeriesElem& a,
                                                          const SeriesElem& b) {
    if (a.field_degree == b.field_degree) return {a, b};
    const std::uint32_t l = std::lcm(a.field_degree, b.field_degree);
    if (l > tw.m_max()) raise("mmax-exceeded", "no admitted common coefficient field");
    return {series_lift(tw, a, l), series_lift(tw, b, l)};
}

inline SeriesElem series_add(const TowerContext& tw, const SeriesElem& a, const SeriesElem& b) {
    auto [x, y] = series_to_common(tw, a, b);
    SeriesElem r{x.field_degree, x.terms, value_min(x.precision, y.precision)};
    r.terms.insert(r.terms.end(), y.terms.begin(), y.terms.end());
    return series_normalize(tw, std::move(r));
}

inline SeriesElem series_neg(const TowerContext& tw, SeriesElem x) {
    for (auto& t : x.terms) t.coef = tw.neg(t.coef);
    return x;
}

inline SeriesElem series_sub(const TowerContext& tw, const SeriesElem& a, const SeriesElem& b) {
    return series_add(tw, a, series_neg(tw, b));
}

// x . lambda (coefficientwise scalar action).
inline SeriesElem series_scale(const TowerContext& tw, const SeriesElem& x, const FieldElem& c) {
    if (tw.is_zero(c)) return series_zero(tw, x.field_degree);
    const std::uint32_t l = std::lcm<std::uint32_t>(x.field_degree, c.m);
    if (l > tw.m_max()) raise("mmax-exceeded", "no admitted common coefficient field");
    SeriesElem r = series_lift(tw, x, l);
    const FieldElem cl = tw.embed_lift(c, l);
    for (auto& t : r.terms) t.coef = tw.mul(t.coef, cl);
    return series_normalize(tw, std::move(r));
}

// x . t^k: coefficients through phi^k, exponents (and cutoff) through tau^k.
inline SeriesElem series_t_pow(const TowerContext& tw, const SeriesElem& x, std::uint32_t k) {
    SeriesElem r = x;
    const std::uint32_t e = k * tw.s();
    for (auto& t : r.terms) {
        t.exponent = mul_p_pow(t.exponent, e);
        t.coef = tw.frob_pow(t.coef, k);
    }
    r.precision = mul_p_pow(r.precision, e);
    return series_normalize(tw, std::move(r));
}

// Full module action x . r for a twisted polynomial r.
inline SeriesElem series_act(const TowerContext& tw, const SeriesElem& x, const SkewPoly& r) {
    if (is_zero(r)) return series_zero(tw, x.field_degree);
    SeriesElem acc;
    bool first = true;
    for (std::uint32_t i = 0; i < r.c.size(); ++i) {
        if (tw.is_zero(r.c[i])) continue;
        SeriesElem term = series_scale(tw, series_t_pow(tw, x, i), r.c[i]);
        acc = first ? term : series_add(tw, acc, term);
        first = false;
    }
    return acc;
}

// Least exponent of the support; infinity only for the exact zero.  When the
// support is empty but the cutoff is finite the valuation is unknowable.
inline Value valuation(const SeriesElem& x) {
    if (!x.terms.empty()) return x.terms.front().exponent;
    if (x.precision.inf) return Value::infinity(x.precision.p);
    raise("indeterminate", "valuation unknown at this precision");
}

// Sound lower bound: the valuation when visible, else the cutoff.
inline Value valuation_bound(const SeriesElem& x) {
    if (!x.terms.empty()) return x.terms.front().exponent;
    return x.precision;
}

inline bool equal_at_precision(const TowerContext& tw, const SeriesElem& a, const SeriesElem& b) {
    return series_sub(tw, a, b).terms.empty();
}

// Coefficient of u^gamma (zero if absent); gamma must be visible.
inline FieldElem residue_at(const TowerContext& tw, const SeriesElem& x, const Value& gamma) {
    if (gamma.inf) raise("bad-argument", "residue at infinity");
    if (!(gamma < x.precision)) raise("precision-exceeded", "residue beyond the cutoff");
    for (const auto& t : x.terms)
        if (t.exponent == gamma) return t.coef;
    return tw.zero(x.field_degree);
}

// In this model every ball quotient M_{>=gamma}/M_{>gamma} is a copy of the
// additive group of the coefficient tower, which is unbounded, so R_n holds
// for every n.  Model-specific.
inline bool ball_quotient_at_least(const TowerContext& tw, const Value& gamma, std::uint64_t n) {
    (void)tw;
    (void)n;
    if (gamma.inf) raise("bad-argument", "R_n is defined on finite values");
    return true;
}

struct Decomposition {
    SeriesElem tor;    // exponent-0 part (the torsion constants)
    SeriesElem theta;  // always zero here: M_{>=theta} = M_tor + M_{>theta}
    SeriesElem pos;    // strictly positive exponents
    SeriesElem neg;    // strictly negative exponents
};

inline Decomposition decompose(const TowerContext& tw, const SeriesElem& x) {
    const Value zero_v = Value::integer(0, tw.p());
    Decomposition d{series_zero(tw, x.field_degree), series_zero(tw, x.field_degree),
                    series_zero(tw, x.field_degree), series_zero(tw, x.field_degree)};
    d.pos.precision = x.precision;
    if (!(zero_v < x.precision)) {
        // cutoff at or below theta: the constant term and part of the
        // negative tail are not visible
        d.tor.precision = x.precision;
        d.neg.precision = x.precision;
    }
    for (const auto& t : x.terms) {
        if (t.exponent.is_zero())
            d.tor.terms.push_back(t);
        else if (zero_v < t.exponent)
            d.pos.terms.push_back(t);
        else
            d.neg.terms.push_back(t);
    }
    d.tor = series_normalize(tw, std::move(d.tor));
    d.pos = series_normalize(tw, std::move(d.pos));
    d.neg = series_normalize(tw, std::move(d.neg));
    return d;
}

// Without r: regular iff v(x) != theta or x = 0 (constants sitting at theta
// are exactly the irregular elements here).  With r: regular for r iff
// v(x.r) achieves min_i tau^i(v(x)) over the support of r.
inline bool is_regular(const TowerContext& tw, const SeriesElem& x,
                       const SkewPoly* r = nullptr) {
    if (x.terms.empty() && !x.precision.inf)
        raise("precision-exhausted", "regularity unknown at this precision");
    if (r == nullptr) {
        if (x.terms.empty() && x.precision.inf) return true;  // x = 0
        const Value v = valuation(x);
        return !v.is_zero();
    }
    if (is_zero(*r)) return true;
    const Value v = valuation(x);
    if (v.inf) return true;
    Value best = Value::infinity(tw.p());
    for (std::uint32_t i = 0; i < r->c.size(); ++i) {
        if (tw.is_zero(r->c[i])) continue;
        best = value_min(best, mul_p_pow(v, i * tw.s()));
    }
    const SeriesElem xr = series_act(tw, x, *r);
    if (!xr.terms.empty()) return xr.terms.front().exponent == best;
    if (xr.precision.inf) return false;  // x.r = 0 exactly, so v(x.r) > best
    if (best < xr.precision) return false;  // v(x.r) >= cutoff > best
    raise("precision-exhausted", "regularity unknown at this precision");
}

}  // namespace valmod
