#pragma once
// Constructive divisibility and henselianity in the series model.
//
// t-roots invert the Frobenius action one denominator level at a time.
// Separable polynomials are inverted on the positive part by a contraction
// (the ultrametric forces the error valuation up by tau each pass), on the
// torsion part by prime-field linear algebra over the tower, and on the
// negative part by peeling the dominant exponent through tau^deg.  Exact
// division below theta is impossible with capped exponent denominators
// (every peel consumes s*deg levels), so the negative branch returns a
// result whose precision cutoff records exactly how far it got.
//
// Annihilator sets of twisted polynomials are kernels of the associated
// additive polynomial, computed by F_p-linear algebra in the splitting
// extension; eta is their cardinality, always a power of |K_0| here.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "valmod/config.hpp"
#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/series.hpp"
#include "valmod/skewpoly.hpp"

namespace valmod {

// ---- t-division -----------------------------------------------------------

// The unique x with x.t = y: exponents divided by p^s, coefficients through
// phi^{-1}.
inline SeriesElem t_root(const TowerContext& tw, const Config& cfg, const SeriesElem& y) {
    SeriesElem r = y;
    const std::uint32_t e = tw.s();
    for (auto& t : r.terms) {
        t.exponent = div_p_pow(t.exponent, e, cfg.k_max);
        t.coef = tw.frob_pow(t.coef, -1);
    }
    if (!r.precision.inf) {
        Value prec = r.precision;
        for (std::uint32_t i = 0; i < e; ++i) {
            if (prec.num % static_cast<std::int64_t>(prec.p) == 0)
                prec.num /= static_cast<std::int64_t>(prec.p);
            else
                ++prec.kpow;
        }
        r.precision = floor_to_grid(prec, cfg.k_max);
    }
    return series_normalize(tw, std::move(r));
}

// ---- Hensel lifting on the positive part -----------------------------------

// Solve x.r = y with v(x), v(y) > theta and r separable; fixed point of
// x <- (y - sum_{i>=1} x.t^i a_i) a_0^{-1}, certified by back substitution.
inline SeriesElem hensel_lift(const TowerContext& tw, const Config& cfg, const SkewPoly& r,
                              const SeriesElem& y) {
    if (!is_separable(tw, r)) raise("non-separable", "hensel lift needs a separable polynomial");
    if (is_exact_zero(y)) return series_zero(tw, y.field_degree);
    const Value theta = Value::integer(0, tw.p());
    if (!(theta < valuation(y)))
        raise("valuation-not-positive", "hensel lift needs v(y) > theta");
    const Value work = value_min(y.precision, Value::integer(cfg.precision, tw.p()));
    const SeriesElem yw = series_with_precision(tw, y, work);
    const FieldElem a0_inv = tw.inv(r.c.front());
    SeriesElem x = series_scale(tw, yw, a0_inv);
    std::optional<Value> last_err;
    for (int iter = 0; iter < 10000; ++iter) {
        SeriesElem err = series_sub(tw, series_act(tw, x, r), yw);
        if (err.terms.empty()) return x;
        const Value ev = err.terms.front().exponent;
        if (last_err && !(*last_err < ev))
            raise("precision-exhausted", "hensel iteration stalled");
        last_err = ev;
        SeriesElem acc = yw;
        for (std::uint32_t i = 1; i < r.c.size(); ++i) {
            if (tw.is_zero(r.c[i])) continue;
            acc = series_sub(tw, acc, series_scale(tw, series_t_pow(tw, x, i), r.c[i]));
        }
        x = series_scale(tw, acc, a0_inv);
    }
    raise("precision-exhausted", "hensel iteration did not converge");
}

// ---- torsion (constant) solving --------------------------------------------

namespace detail {

// Matrix of the additive polynomial of a separable s on F_{p^m} (as an
// F_p-linear map), with s's coefficients lifted into F_{p^m}.
inline fp::Matrix additive_matrix(const TowerContext& tw, const SkewPoly& s, std::uint32_t m) {
    std::vector<FieldElem> lifted;
    lifted.reserve(s.c.size());
    for (const auto& a : s.c) lifted.push_back(tw.embed_lift(a, m));
    fp::Matrix mat(m, m);
    for (std::uint32_t j = 0; j < m; ++j) {
        FieldElem e = tw.zero(m);
        e.c[j] = 1;
        FieldElem acc = tw.zero(m);
        for (std::uint32_t i = 0; i < s.c.size(); ++i) {
            if (tw.is_zero(lifted[i])) continue;
            acc = tw.add(acc, tw.mul(tw.frob_pow(e, i), lifted[i]));
        }
        for (std::uint32_t i = 0; i < m; ++i) mat.at(i, j) = acc.c[i];
    }
    return mat;
}

}  // namespace detail

// One constant x with x.r = c, searching extensions of increasing degree;
// ties broken by the counting order on coefficient vectors.
inline FieldElem torsion_solve(const TowerContext& tw, const Config& cfg, const SkewPoly& r,
                               const FieldElem& c) {
    if (is_zero(r)) raise("zero-argument", "cannot divide by the zero polynomial");
    auto [n, s] = sep_split(tw, r);
    const std::uint32_t base = std::lcm(s.field_degree, c.m);
    for (std::uint32_t m = base; m <= cfg.m_max; m += base) {
        fp::Matrix mat = detail::additive_matrix(tw, s, m);
        const FieldElem cl = tw.embed_lift(c, m);
        fp::Row rhs(cl.c.begin(), cl.c.end());
        auto sol = fp::solve(mat, rhs, tw.p());
        if (!sol) continue;
        FieldElem w = tw.zero(m);
        for (std::uint32_t i = 0; i < m; ++i) w.c[i] = (*sol)[i];
        auto ker = fp::kernel(mat, tw.p());
        if (!ker.empty() && tw.field_size(static_cast<std::uint32_t>(ker.size())) <= 4096) {
            FieldElem best = w;
            const std::uint64_t total = tw.field_size(static_cast<std::uint32_t>(ker.size()));
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                FieldElem cand = w;
                std::uint64_t v = idx;
                for (std::size_t b = 0; b < ker.size(); ++b) {
                    const Residue k = static_cast<Residue>(v % tw.p());
                    v /= tw.p();
                    if (k == 0) continue;
                    for (std::uint32_t i = 0; i < m; ++i)
                        cand.c[i] = fp::add(cand.c[i], fp::mul(k, ker[b][i], tw.p()), tw.p());
                }
                if (tw.counting_less(cand, best)) best = cand;
            }
            w = best;
        }
        return tw.frob_pow(w, -static_cast<std::int64_t>(n));
    }
    raise("mmax-exhausted", "no torsion solution within the tower bound");
}

// ---- annihilator sets -------------------------------------------------------

struct AnnSet {
    SkewPoly r;
    std::uint32_t field_degree = 1;      // minimal m with all roots inside F_{p^m}
    std::vector<FieldElem> roots;        // sorted by counting order
};

namespace detail {

// Minimal working degree for K = F_p: the kernel of P(Frob), P = sum a_i
// X^{s i}, has dimension deg gcd(P, X^m - 1) on F_{p^m}; full exactly when
// P | X^m - 1.
inline std::optional<std::uint32_t> splitting_degree_prime_base(const TowerContext& tw,
                                                                const SkewPoly& s,
                                                                std::uint32_t m_cap) {
    FpPoly P(static_cast<std::size_t>(deg(s)) * tw.s() + 1, 0);
    for (std::uint32_t i = 0; i < s.c.size(); ++i) P[i * tw.s()] = s.c[i].c[0];
    detail::fp_trim(P);
    FpPoly x_pow{0, 1};
    x_pow = detail::fp_mod(x_pow, P, tw.p());
    for (std::uint32_t m = 1; m <= m_cap; ++m) {
        if (x_pow == FpPoly{1}) return m;
        x_pow = detail::fp_mod(detail::fp_mul(x_pow, FpPoly{0, 1}, tw.p()), P, tw.p());
    }
    return std::nullopt;
}

}  // namespace detail

// All roots of r in the model: the kernel of the separable part's additive
// polynomial, pulled back through t^n by phi^{-n}.
inline AnnSet ann_roots(const TowerContext& tw, const Config& cfg, const SkewPoly& r) {
    if (is_zero(r)) raise("zero-argument", "the zero polynomial annihilates everything");
    auto [n, s] = sep_split(tw, r);
    if (deg(s) == 0)  // only 0 is annihilated (phi is injective)
        return AnnSet{r, 1, {tw.zero(1)}};
    const std::uint32_t target_dim = static_cast<std::uint32_t>(deg(s)) * tw.s();
    std::uint32_t m_work = 0;
    std::vector<fp::Row> kernel_basis;
    if (s.field_degree == 1) {
        auto md = detail::splitting_degree_prime_base(tw, s, cfg.m_max);
        if (!md) raise("mmax-exhausted", "splitting degree exceeds the tower bound");
        m_work = *md;
        kernel_basis = fp::kernel(detail::additive_matrix(tw, s, m_work), tw.p());
    } else {
        for (std::uint32_t m = s.field_degree; m <= cfg.m_max; m += s.field_degree) {
            auto ker = fp::kernel(detail::additive_matrix(tw, s, m), tw.p());
            if (ker.size() == target_dim) {
                m_work = m;
                kernel_basis = std::move(ker);
                break;
            }
        }
        if (m_work == 0) raise("mmax-exhausted", "splitting degree exceeds the tower bound");
    }
    if (kernel_basis.size() != target_dim)
        raise("internal-error", "kernel dimension mismatch");
    if (tw.field_size_exceeds(target_dim, cfg.embed_cap))
        raise("value-overflow", "annihilator too large to enumerate");
    std::vector<FieldElem> roots;
    const std::uint64_t total = tw.field_size(target_dim);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        FieldElem cand = tw.zero(m_work);
        std::uint64_t v = idx;
        for (std::size_t b = 0; b < kernel_basis.size(); ++b) {
            const Residue k = static_cast<Residue>(v % tw.p());
            v /= tw.p();
            if (k == 0) continue;
            for (std::uint32_t i = 0; i < m_work; ++i)
                cand.c[i] = fp::add(cand.c[i], fp::mul(k, kernel_basis[b][i], tw.p()), tw.p());
        }
        roots.push_back(tw.frob_pow(cand, -static_cast<std::int64_t>(n)));
    }
    // field_degree: lcm of the individual root degrees; keep the list at the
    // working degree if the rewrite is blocked by the embedding caps.
    std::uint32_t m_min = 1;
    for (const auto& x : roots) m_min = std::lcm(m_min, tw.element_degree(x));
    if (m_min < m_work) {
        try {
            std::vector<FieldElem> small;
            small.reserve(roots.size());
            for (const auto& x : roots)
                small.push_back(tw.embed_lift(tw.canonicalize(x), m_min));
            roots = std::move(small);
        } catch (const DomainError&) {
            m_min = m_work;  // report the working field instead
        }
    }
    std::sort(roots.begin(), roots.end(),
              [&](const FieldElem& a, const FieldElem& b) { return tw.counting_less(a, b); });
    return AnnSet{r, m_min == 0 ? m_work : m_min, std::move(roots)};
}

struct EtaResult {
    std::uint64_t count = 1;
    std::uint64_t k0 = 1;           // |K_0| for the coefficient field of r
    std::uint32_t k0_exponent = 0;  // count = k0 ^ k0_exponent
};

inline EtaResult eta(const TowerContext& tw, const Config& cfg, const SkewPoly& r) {
    AnnSet a = ann_roots(tw, cfg, r);
    EtaResult e;
    e.count = a.roots.size();
    e.k0 = tw.fixed_subfield_size(r.field_degree);
    std::uint64_t v = 1;
    while (v < e.count) {
        v *= e.k0;
        ++e.k0_exponent;
    }
    if (v != e.count) raise("internal-error", "eta is not a power of |K_0|");
    return e;
}

// ---- general divisibility ---------------------------------------------------

namespace detail {

// Solve w.s = y for y supported strictly below theta by peeling the dominant
// exponent through tau^deg(s).  Each peel costs s*deg denominator levels, so
// the loop stops when the grid is exhausted and records the frontier in the
// precision of the result.
inline SeriesElem solve_negative(const TowerContext& tw, const Config& cfg, const SkewPoly& s,
                                 SeriesElem res) {
    const std::uint32_t e = static_cast<std::uint32_t>(deg(s)) * tw.s();
    const FieldElem top_inv = tw.inv(s.c.back());
    SeriesElem x = series_zero(tw, res.field_degree);
    for (int guard = 0; guard < 100000; ++guard) {
        if (res.terms.empty()) return x;
        const Value v = res.terms.front().exponent;
        Value gamma;
        try {
            gamma = div_p_pow(v, e, cfg.k_max);
        } catch (const DomainError&) {
            // one more level would leave the grid: record the frontier
            Value raw = v;
            for (std::uint32_t i = 0; i < e; ++i) {
                if (raw.num % static_cast<std::int64_t>(raw.p) == 0)
                    raw.num /= static_cast<std::int64_t>(raw.p);
                else
                    ++raw.kpow;
            }
            x.precision = value_min(x.precision, floor_to_grid(raw, cfg.k_max));
            return series_normalize(tw, std::move(x));
        }
        const FieldElem cy = res.terms.front().coef;
        const FieldElem cx = tw.frob_pow(tw.mul(cy, top_inv), -deg(s));
        const SeriesElem term = series_monomial(tw, cx, gamma);
        x = series_add(tw, x, term);
        res = series_sub(tw, res, series_act(tw, term, s));
    }
    raise("precision-exhausted", "negative-branch peeling did not terminate");
}

}  // namespace detail

// Solve x.r = y to working precision: split r = t^n s, decompose y, solve
// each component against the separable part, then take n t-roots.
inline SeriesElem solve_div(const TowerContext& tw, const Config& cfg, const SkewPoly& r,
                            const SeriesElem& y) {
    if (is_zero(r)) raise("zero-argument", "cannot divide by the zero polynomial");
    if (is_exact_zero(y)) return series_zero(tw, y.field_degree);
    auto [n, s] = sep_split(tw, r);
    // reserve denominator headroom for the trailing t-roots
    Config branch = cfg;
    const std::uint32_t spent = n * tw.s();
    branch.k_max = cfg.k_max > spent ? cfg.k_max - spent : 0;
    Decomposition d = decompose(tw, y);
    SeriesElem w = series_zero(tw, y.field_degree);
    if (!d.neg.terms.empty())
        w = series_add(tw, w, detail::solve_negative(tw, branch, s, d.neg));
    if (!d.tor.terms.empty()) {
        const FieldElem c = d.tor.terms.front().coef;
        w = series_add(tw, w, series_const(tw, torsion_solve(tw, cfg, s, c)));
    }
    if (!d.pos.terms.empty() || (!d.pos.precision.inf)) {
        if (!d.pos.terms.empty())
            w = series_add(tw, w, hensel_lift(tw, cfg, s, d.pos));
        else
            w.precision = value_min(w.precision, d.pos.precision);
    }
    for (std::uint32_t i = 0; i < n; ++i) w = t_root(tw, cfg, w);
    return w;
}

// ---- minimal polynomials and embedding extension ----------------------------

namespace detail {

struct ElemKey {
    std::uint32_t m;
    std::vector<Residue> c;
    friend auto operator<=>(const ElemKey&, const ElemKey&) = default;
};

inline ElemKey key_of(const TowerContext& tw, const FieldElem& x) {
    FieldElem cx = tw.canonicalize(x);
    return ElemKey{cx.m, cx.c};
}

}  // namespace detail

// A finite set of torsion constants closed under the module operations.
inline bool is_torsion_submodule(const TowerContext& tw, std::uint32_t k_degree,
                                 const std::vector<FieldElem>& a) {
    std::set<detail::ElemKey> keys;
    for (const auto& x : a) keys.insert(detail::key_of(tw, x));
    if (!keys.count(detail::key_of(tw, tw.zero(1)))) return false;
    const FieldElem g = tw.generator(k_degree);
    for (const auto& x : a) {
        if (!keys.count(detail::key_of(tw, tw.frob_pow(x, 1)))) return false;
        if (!keys.count(detail::key_of(tw, tw.mul(x, g)))) return false;
        for (const auto& y : a)
            if (!keys.count(detail::key_of(tw, tw.add(x, y)))) return false;
    }
    return true;
}

// Constant action x.q for a constant x: sum phi^i(x) q_i.
inline FieldElem const_act(const TowerContext& tw, const FieldElem& x, const SkewPoly& q) {
    FieldElem acc = tw.zero(x.m);
    for (std::uint32_t i = 0; i < q.c.size(); ++i) {
        if (tw.is_zero(q.c[i])) continue;
        acc = tw.add(acc, tw.mul(tw.frob_pow(x, i), q.c[i]));
    }
    return acc;
}

// Monic q over K = F_{p^k_degree} of minimal degree with x.q in A (A = {0}
// when absent); unique, and it divides every r with x.r in A.
inline SkewPoly min_poly(const TowerContext& tw, std::uint32_t k_degree, const FieldElem& x,
                         const std::vector<FieldElem>* a_opt = nullptr) {
    std::vector<FieldElem> a;
    if (a_opt) {
        if (!is_torsion_submodule(tw, k_degree, *a_opt))
            raise("closure-check-failed", "A is not a submodule");
        a = *a_opt;
    } else {
        a = {tw.zero(1)};
    }
    std::sort(a.begin(), a.end(), [&](const FieldElem& u, const FieldElem& v) {
        return detail::key_of(tw, u) < detail::key_of(tw, v);
    });
    std::uint32_t m_work = std::lcm(x.m, k_degree);
    for (const auto& e : a) m_work = std::lcm<std::uint32_t>(m_work, e.m);
    const std::uint32_t p = tw.p();
    for (std::uint32_t d = 0; d <= x.m + 1; ++d) {
        const FieldElem top = tw.embed_lift(tw.frob_pow(x, d), m_work);
        // columns: phi^i(x) * g^j coordinates, i < d, j < k_degree
        fp::Matrix mat(m_work, static_cast<std::size_t>(d) * k_degree);
        for (std::uint32_t i = 0; i < d; ++i) {
            const FieldElem xi = tw.embed_lift(tw.frob_pow(x, i), m_work);
            FieldElem gj = tw.one(k_degree);
            for (std::uint32_t j = 0; j < k_degree; ++j) {
                const FieldElem col = tw.mul(xi, tw.embed_lift(gj, m_work));
                for (std::uint32_t row = 0; row < m_work; ++row)
                    mat.at(row, static_cast<std::size_t>(i) * k_degree + j) = col.c[row];
                gj = tw.mul(gj, tw.generator(k_degree));
            }
        }
        for (const auto& target : a) {
            const FieldElem rhs_e = tw.sub(tw.embed_lift(target, m_work), top);
            fp::Row rhs(rhs_e.c.begin(), rhs_e.c.end());
            auto sol = fp::solve(mat, rhs, p);
            if (!sol) continue;
            SkewPoly q{k_degree, std::vector<FieldElem>(d + 1, tw.zero(k_degree))};
            for (std::uint32_t i = 0; i < d; ++i) {
                FieldElem coef = tw.zero(k_degree);
                FieldElem gj = tw.one(k_degree);
                for (std::uint32_t j = 0; j < k_degree; ++j) {
                    coef = tw.add(coef,
                                  tw.mul_residue(gj, (*sol)[static_cast<std::size_t>(i) * k_degree + j]));
                    gj = tw.mul(gj, tw.generator(k_degree));
                }
                q.c[i] = coef;
            }
            q.c[d] = tw.one(k_degree);
            return q;
        }
    }
    raise("internal-error", "minimal polynomial search exceeded its bound");
}

struct TorsionEmbedding {
    std::vector<std::pair<FieldElem, FieldElem>> graph;  // (domain, image)
};

inline std::optional<FieldElem> embedding_image(const TowerContext& tw,
                                                const TorsionEmbedding& f, const FieldElem& x) {
    for (const auto& [a, b] : f.graph)
        if (tw.tower_equal(a, x)) return b;
    return std::nullopt;
}

struct EmbeddingStep {
    FieldElem y;             // image chosen for the new generator
    TorsionEmbedding next;   // embedding on A + z.R
    FieldElem z;             // the generator actually adjoined
    SkewPoly minimal;        // its (irreducible) minimal polynomial over A
};

// One extension step: adjoin to the domain the last irreducible slice of x's
// minimal polynomial over A, solving y.r = f(z.r) with y outside f(A).
inline EmbeddingStep extend_embedding_step(const TowerContext& tw, const Config& cfg,
                                           std::uint32_t k_degree,
                                           const std::vector<FieldElem>& a,
                                           const TorsionEmbedding& f, const FieldElem& x) {
    if (!is_torsion_submodule(tw, k_degree, a))
        raise("closure-check-failed", "A is not a submodule");
    for (const auto& e : a)
        if (tw.tower_equal(e, x)) raise("precondition-failed", "x already lies in A");
    // verify f is a module embedding of A
    std::set<detail::ElemKey> image_keys;
    for (const auto& e : a) {
        auto img = embedding_image(tw, f, e);
        if (!img) raise("precondition-failed", "f is not defined on all of A");
        if (!image_keys.insert(detail::key_of(tw, *img)).second)
            raise("precondition-failed", "f is not injective");
    }
    const SkewPoly q = min_poly(tw, k_degree, x, &a);
    Factorization fac = factorize(tw, q, cfg.factor_deg_bound);
    std::vector<SkewPoly> factors;
    for (std::uint32_t i = 0; i < fac.t_pow; ++i) factors.push_back(poly_t(tw, k_degree));
    for (auto& g : fac.factors) factors.push_back(g);
    if (factors.empty()) raise("precondition-failed", "x generates nothing over A");
    SkewPoly prefix = poly_one(tw, k_degree);
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) prefix = mul(tw, prefix, factors[i]);
    const SkewPoly r = factors.back();
    const FieldElem z = const_act(tw, x, prefix);
    const FieldElem zr = const_act(tw, z, r);
    auto fz = embedding_image(tw, f, zr);
    if (!fz) raise("precondition-failed", "z.r does not land in A");
    FieldElem y = torsion_solve(tw, cfg, r, *fz);
    if (image_keys.count(detail::key_of(tw, y))) {
        AnnSet ann = ann_roots(tw, cfg, r);
        bool shifted = false;
        for (const auto& b0 : ann.roots) {
            const FieldElem cand = tw.add(y, b0);
            if (!image_keys.count(detail::key_of(tw, cand))) {
                y = cand;
                shifted = true;
                break;
            }
        }
        if (!shifted)
            raise("eta-hypothesis-violated",
                  "every solution lies in f(A): the annihilator count hypothesis fails");
    }
    // span of z over R: additive closure of z.t^i g^j, i < deg(min poly of z)
    const SkewPoly qz = min_poly(tw, k_degree, z, nullptr);
    std::vector<std::pair<FieldElem, SkewPoly>> gens;  // (z.w, w)
    for (int i = 0; i < std::max(deg(qz), 1); ++i) {
        FieldElem gj = tw.one(k_degree);
        for (std::uint32_t j = 0; j < k_degree; ++j) {
            SkewPoly w = mul_const_right(tw, poly_t_pow(tw, static_cast<std::uint32_t>(i), k_degree), gj);
            gens.emplace_back(const_act(tw, z, w), w);
            gj = tw.mul(gj, tw.generator(k_degree));
        }
    }
    // enumerate the extended domain A + z.R with witnesses, building the map
    std::map<detail::ElemKey, FieldElem> ext;
    std::map<detail::ElemKey, std::pair<FieldElem, SkewPoly>> span;  // z.w -> (elem, w)
    span.emplace(detail::key_of(tw, tw.zero(1)),
                 std::make_pair(tw.zero(1), poly_zero(k_degree)));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<FieldElem, SkewPoly>> cur;
        for (auto& [k, v] : span) cur.push_back(v);
        for (const auto& [el, w] : cur)
            for (const auto& [gel, gw] : gens) {
                const FieldElem ne = tw.add(el, gel);
                const auto key = detail::key_of(tw, ne);
                if (!span.count(key)) {
                    span.emplace(key, std::make_pair(ne, add(tw, w, gw)));
                    grew = true;
                }
            }
    }
    for (const auto& ae : a) {
        const FieldElem fa = *embedding_image(tw, f, ae);
        for (const auto& [k, v] : span) {
            const FieldElem dom = tw.add(ae, v.first);
            const FieldElem img = tw.add(fa, const_act(tw, y, v.second));
            const auto dk = detail::key_of(tw, dom);
            auto it = ext.find(dk);
            if (it == ext.end()) {
                ext.emplace(dk, img);
            } else if (!tw.tower_equal(it->second, img)) {
                raise("internal-error", "embedding extension is not well defined");
            }
        }
    }
    EmbeddingStep out;
    out.y = y;
    out.z = z;
    out.minimal = r;
    std::set<detail::ElemKey> img_check;
    for (auto& [k, img] : ext) {
        out.next.graph.emplace_back(FieldElem{k.m, k.c}, img);
        if (!img_check.insert(detail::key_of(tw, img)).second)
            raise("internal-error", "extended embedding is not injective");
    }
    return out;
}

}  // namespace valmod
