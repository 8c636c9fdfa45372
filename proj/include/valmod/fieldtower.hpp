#pragma once
// A compatible tower of finite fields F_{p^m} with the Frobenius-power
// endomorphism phi : x -> x^(p^s).
//
// Each admitted degree m gets a fixed defining polynomial: the first monic
// irreducible of degree m over F_p in counting order of the non-leading
// coefficient vector (c_0 + c_1 p + ...).  Elements are coefficient vectors
// in the power basis of that polynomial.  Subfield embeddings are chosen
// lazily but compatibly: when a target degree M is first used, images of the
// generators of all proper subfields are fixed in increasing degree order,
// each constrained to agree with the embeddings already fixed below it, so
// every diagram F_{p^a} -> F_{p^b} -> F_{p^c} commutes.
//
// The context is immutable after construction except for the defining
// polynomial and embedding caches, which behave as write-once memos guarded
// by a lock; element values are plain data.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valmod/errors.hpp"
#include "valmod/fp_linalg.hpp"

namespace valmod {

using fp::Residue;

// Dense polynomial over F_p, little-endian coefficients, no trailing zeros.
using FpPoly = std::vector<Residue>;

struct FieldElem {
    std::uint32_t m = 1;          // extension degree: the element lives in F_{p^m}
    std::vector<Residue> c;       // power-basis coordinates, length m

    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

namespace detail {

inline void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int fp_deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, Residue p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        Residue x = i < a.size() ? a[i] : 0;
        Residue y = i < b.size() ? b[i] : 0;
        r[i] = fp::add(x, y, p);
    }
    fp_trim(r);
    return r;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, Residue p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        Residue x = i < a.size() ? a[i] : 0;
        Residue y = i < b.size() ? b[i] : 0;
        r[i] = fp::sub(x, y, p);
    }
    fp_trim(r);
    return r;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, Residue p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = fp::add(r[i + j], fp::mul(a[i], b[j], p), p);
    }
    fp_trim(r);
    return r;
}

inline FpPoly fp_scale(const FpPoly& a, Residue k, Residue p) {
    FpPoly r = a;
    for (auto& v : r) v = fp::mul(v, k, p);
    fp_trim(r);
    return r;
}

// Remainder of a modulo f (f nonzero).
inline FpPoly fp_mod(FpPoly a, const FpPoly& f, Residue p) {
    const int df = fp_deg(f);
    const Residue lead_inv = fp::inv(f.back(), p);
    while (fp_deg(a) >= df) {
        const int k = fp_deg(a) - df;
        const Residue q = fp::mul(a.back(), lead_inv, p);
        for (int i = 0; i <= df; ++i)
            a[k + i] = fp::sub(a[k + i], fp::mul(q, f[i], p), p);
        fp_trim(a);
    }
    return a;
}

inline FpPoly fp_divq(FpPoly a, const FpPoly& f, Residue p) {
    const int df = fp_deg(f);
    const Residue lead_inv = fp::inv(f.back(), p);
    if (fp_deg(a) < df) return {};
    FpPoly q(fp_deg(a) - df + 1, 0);
    while (fp_deg(a) >= df) {
        const int k = fp_deg(a) - df;
        const Residue qc = fp::mul(a.back(), lead_inv, p);
        q[k] = qc;
        for (int i = 0; i <= df; ++i)
            a[k + i] = fp::sub(a[k + i], fp::mul(qc, f[i], p), p);
        fp_trim(a);
    }
    fp_trim(q);
    return q;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, Residue p) {
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) a = fp_scale(a, fp::inv(a.back(), p), p);
    return a;
}

inline FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, Residue p) {
    return fp_mod(fp_mul(a, b, p), f, p);
}

inline FpPoly fp_powmod(FpPoly a, std::uint64_t e, const FpPoly& f, Residue p) {
    FpPoly r{1};
    a = fp_mod(std::move(a), f, p);
    while (e) {
        if (e & 1) r = fp_mulmod(r, a, f, p);
        a = fp_mulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

// X^(p^k) mod f, by k successive p-th powers.
inline FpPoly fp_frob_x(std::uint32_t k, const FpPoly& f, Residue p) {
    FpPoly r{0, 1};
    r = fp_mod(std::move(r), f, p);
    for (std::uint32_t i = 0; i < k; ++i) r = fp_powmod(std::move(r), p, f, p);
    return r;
}

// Rabin irreducibility test for a monic f of degree m over F_p.
inline bool fp_irreducible(const FpPoly& f, Residue p) {
    const int m = fp_deg(f);
    if (m <= 0) return false;
    if (m == 1) return true;
    const FpPoly x{0, 1};
    if (fp_sub(fp_frob_x(static_cast<std::uint32_t>(m), f, p), x, p) != FpPoly{})
        return false;
    for (int q = 2, n = m; n > 1; ++q) {
        if (n % q != 0) continue;
        while (n % q == 0) n /= q;
        FpPoly h = fp_sub(fp_frob_x(static_cast<std::uint32_t>(m / q), f, p), x, p);
        FpPoly g = fp_gcd(f, h, p);
        if (fp_deg(g) != 0) return false;
    }
    return true;
}

inline std::vector<std::uint32_t> divisors_of(std::uint32_t n) {
    std::vector<std::uint32_t> d;
    for (std::uint32_t i = 1; i <= n; ++i)
        if (n % i == 0) d.push_back(i);
    return d;
}

inline std::uint64_t checked_pow_u64(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            raise("value-overflow", "cardinality does not fit in 64 bits");
        r *= base;
    }
    return r;
}

}  // namespace detail

class TowerContext {
  public:
    TowerContext(std::uint32_t p, std::uint32_t s = 1, std::uint32_t m_max = 24,
                 std::uint64_t embed_cap = std::uint64_t{1} << 20)
        : p_(p), s_(s), m_max_(m_max), embed_cap_(embed_cap) {
        if (p < 2 || !is_prime(p)) raise("not-prime", "p must be a prime");
        if (p > 46337) raise("value-overflow", "p too large for residue arithmetic");
        if (s == 0) raise("bad-config", "phi exponent s must be positive");
        if (m_max == 0) raise("bad-config", "m_max must be positive");
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t s() const { return s_; }
    std::uint32_t m_max() const { return m_max_; }

    // ---- defining polynomials -------------------------------------------

    // First monic irreducible of degree m in counting order; cached.
    FpPoly defining_poly(std::uint32_t m) const {
        check_degree(m);
        std::scoped_lock lk(mu_);
        auto it = defpoly_.find(m);
        if (it != defpoly_.end()) return it->second;
        FpPoly f(m + 1, 0);
        f[m] = 1;
        for (std::uint64_t n = 0;; ++n) {
            std::uint64_t v = n;
            for (std::uint32_t i = 0; i < m; ++i) {
                f[i] = static_cast<Residue>(v % p_);
                v /= p_;
            }
            if (v != 0) raise("no-irreducible", "exhausted candidates (internal)");
            if (detail::fp_irreducible(f, p_)) break;
        }
        defpoly_.emplace(m, f);
        return f;
    }

    // ---- element construction -------------------------------------------

    FieldElem zero(std::uint32_t m = 1) const {
        check_degree(m);
        return FieldElem{m, std::vector<Residue>(m, 0)};
    }

    FieldElem one(std::uint32_t m = 1) const {
        FieldElem e = zero(m);
        e.c[0] = 1;
        return e;
    }

    FieldElem from_residue(std::int64_t r, std::uint32_t m = 1) const {
        FieldElem e = zero(m);
        std::int64_t v = r % static_cast<std::int64_t>(p_);
        if (v < 0) v += p_;
        e.c[0] = static_cast<Residue>(v);
        return e;
    }

    FieldElem generator(std::uint32_t m) const {
        check_degree(m);
        FieldElem e = zero(m);
        if (m == 1)
            e.c[0] = 1;  // degree 1: the power basis is {1}
        else
            e.c[1] = 1;
        return e;
    }

    FieldElem make(std::uint32_t m, std::vector<Residue> coeffs) const {
        check_degree(m);
        coeffs.resize(m, 0);
        for (auto& v : coeffs) v %= p_;
        return FieldElem{m, std::move(coeffs)};
    }

    // Element with counting index n in [0, p^m): base-p digits of n.
    FieldElem elem_at(std::uint32_t m, std::uint64_t n) const {
        FieldElem e = zero(m);
        for (std::uint32_t i = 0; i < m && n; ++i) {
            e.c[i] = static_cast<Residue>(n % p_);
            n /= p_;
        }
        return e;
    }

    std::uint64_t counting_index(const FieldElem& x) const {
        std::uint64_t n = 0;
        for (std::uint32_t i = x.m; i-- > 0;) n = n * p_ + x.c[i];
        return n;
    }

    std::uint64_t field_size(std::uint32_t m) const {
        return detail::checked_pow_u64(p_, m);
    }

    // p^m > cap, without overflow.
    bool field_size_exceeds(std::uint32_t m, std::uint64_t cap) const {
        std::uint64_t r = 1;
        for (std::uint32_t i = 0; i < m; ++i) {
            r *= p_;
            if (r > cap) return true;
        }
        return false;
    }

    bool counting_less(const FieldElem& a, const FieldElem& b) const {
        if (a.m != b.m) return a.m < b.m;
        for (std::uint32_t i = a.m; i-- > 0;)
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        return false;
    }

    // ---- arithmetic -------------------------------------------------------

    bool is_zero(const FieldElem& x) const {
        return std::all_of(x.c.begin(), x.c.end(), [](Residue v) { return v == 0; });
    }

    FieldElem add(const FieldElem& a, const FieldElem& b) const {
        auto [x, y] = to_common(a, b);
        FieldElem r = x;
        for (std::uint32_t i = 0; i < r.m; ++i) r.c[i] = fp::add(x.c[i], y.c[i], p_);
        return r;
    }

    FieldElem sub(const FieldElem& a, const FieldElem& b) const {
        auto [x, y] = to_common(a, b);
        FieldElem r = x;
        for (std::uint32_t i = 0; i < r.m; ++i) r.c[i] = fp::sub(x.c[i], y.c[i], p_);
        return r;
    }

    FieldElem neg(const FieldElem& a) const {
        FieldElem r = a;
        for (auto& v : r.c) v = fp::sub(0, v, p_);
        return r;
    }

    FieldElem mul(const FieldElem& a, const FieldElem& b) const {
        auto [x, y] = to_common(a, b);
        FpPoly prod = detail::fp_mod(detail::fp_mul(FpPoly(x.c.begin(), x.c.end()),
                                                    FpPoly(y.c.begin(), y.c.end()), p_),
                                     defining_poly(x.m), p_);
        FieldElem r = zero(x.m);
        for (std::size_t i = 0; i < prod.size(); ++i) r.c[i] = prod[i];
        return r;
    }

    FieldElem mul_residue(const FieldElem& a, Residue k) const {
        FieldElem r = a;
        for (auto& v : r.c) v = fp::mul(v, k % p_, p_);
        return r;
    }

    FieldElem inv(const FieldElem& a) const {
        if (is_zero(a)) raise("division-by-zero", "inverse of 0");
        // extended Euclid in F_p[X] against the defining polynomial
        FpPoly f = defining_poly(a.m);
        FpPoly r0 = f, r1(a.c.begin(), a.c.end());
        detail::fp_trim(r1);
        FpPoly t0{}, t1{1};
        while (!r1.empty()) {
            FpPoly q = detail::fp_divq(r0, r1, p_);
            FpPoly r2 = detail::fp_sub(r0, detail::fp_mul(q, r1, p_), p_);
            FpPoly t2 = detail::fp_sub(t0, detail::fp_mul(q, t1, p_), p_);
            r0 = std::move(r1); r1 = std::move(r2);
            t0 = std::move(t1); t1 = std::move(t2);
        }
        // r0 is a nonzero constant gcd
        FpPoly res = detail::fp_scale(t0, fp::inv(r0[0], p_), p_);
        FieldElem out = zero(a.m);
        for (std::size_t i = 0; i < res.size(); ++i) out.c[i] = res[i];
        return out;
    }

    FieldElem pow(FieldElem x, std::uint64_t e) const {
        FieldElem r = one(x.m);
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }

    // phi^k with phi : x -> x^(p^s); k may be negative (phi is an
    // automorphism of every finite field, of order m / gcd(s, m)).
    FieldElem frob_pow(const FieldElem& x, std::int64_t k) const {
        const std::int64_t ord = x.m / std::gcd<std::int64_t>(s_, x.m);
        std::int64_t e = ((k % ord) + ord) % ord;
        FieldElem r = x;
        for (std::int64_t i = 0; i < e * s_; ++i) r = pow(r, p_);
        return r;
    }

    // Plain p-power Frobenius iterated k times (independent of s).
    FieldElem frobenius(const FieldElem& x, std::uint32_t k) const {
        FieldElem r = x;
        for (std::uint32_t i = 0; i < k; ++i) r = pow(r, p_);
        return r;
    }

    // |K_0| = p^gcd(s, m) for K = F_{p^m}: the fixed field of phi.
    std::uint64_t fixed_subfield_size(std::uint32_t m) const {
        check_degree(m);
        return detail::checked_pow_u64(p_, std::gcd(s_, m));
    }

    // ---- tower embeddings -------------------------------------------------

    // Image of x under the cached embedding F_{p^m} -> F_{p^m2}, m | m2.
    FieldElem embed_lift(const FieldElem& x, std::uint32_t m2) const {
        if (m2 == x.m) return x;
        if (m2 > m_max_) raise("mmax-exceeded", "embedding target exceeds m_max");
        if (m2 % x.m != 0)
            raise("degree-not-multiple", "source degree does not divide target degree");
        if (x.m == 1) {
            FieldElem r = zero(m2);
            r.c[0] = x.c[0];
            return r;
        }
        FieldElem rho = generator_image(x.m, m2);
        return eval_coords(x, rho);
    }

    // Minimal d | x.m with x in the image of F_{p^d}.
    std::uint32_t element_degree(const FieldElem& x) const {
        for (std::uint32_t d : detail::divisors_of(x.m)) {
            FieldElem y = frobenius(x, d);
            if (y == x) return d;
        }
        return x.m;  // unreachable
    }

    // Rewrite x at its minimal degree (inverse of the cached embedding).
    FieldElem canonicalize(const FieldElem& x) const {
        const std::uint32_t d = element_degree(x);
        if (d == x.m) return x;
        if (d == 1) {
            FieldElem r = zero(1);
            r.c[0] = x.c[0];
            return r;
        }
        FieldElem rho = generator_image(d, x.m);
        // solve sum_j c_j rho^j = x over F_p
        fp::Matrix a(x.m, d);
        FieldElem pw = one(x.m);
        for (std::uint32_t j = 0; j < d; ++j) {
            for (std::uint32_t i = 0; i < x.m; ++i) a.at(i, j) = pw.c[i];
            pw = mul(pw, rho);
        }
        fp::Row b(x.c.begin(), x.c.end());
        auto sol = fp::solve(a, b, p_);
        if (!sol) raise("internal-error", "inverse embedding solve failed");
        FieldElem r = zero(d);
        for (std::uint32_t j = 0; j < d; ++j) r.c[j] = (*sol)[j];
        return r;
    }

    // Equality as elements of the tower (representations may differ).
    bool tower_equal(const FieldElem& a, const FieldElem& b) const {
        const std::uint32_t l = std::lcm(a.m, b.m);
        if (l > m_max_) raise("mmax-exceeded", "no admitted common extension");
        return embed_lift(a, l) == embed_lift(b, l);
    }

    // Matrix of the F_p-linear map x -> x^p on F_{p^m}.
    fp::Matrix frobenius_matrix(std::uint32_t m) const {
        fp::Matrix fm(m, m);
        FieldElem gp = pow(generator(m), p_);
        FieldElem col = one(m);
        for (std::uint32_t j = 0; j < m; ++j) {
            for (std::uint32_t i = 0; i < m; ++i) fm.at(i, j) = col.c[i];
            col = mul(col, gp);
        }
        return fm;
    }

  private:
    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    void check_degree(std::uint32_t m) const {
        if (m == 0) raise("bad-degree", "degree must be positive");
        if (m > m_max_) raise("mmax-exceeded", "degree exceeds m_max");
    }

    std::pair<FieldElem, FieldElem> to_common(const FieldElem& a, const FieldElem& b) const {
        if (a.m == b.m) return {a, b};
        const std::uint32_t l = std::lcm(a.m, b.m);
        if (l > m_max_) raise("mmax-exceeded", "no admitted common extension");
        return {embed_lift(a, l), embed_lift(b, l)};
    }

    // Evaluate the coordinate polynomial of x at rho (Horner in F_{p^M}).
    FieldElem eval_coords(const FieldElem& x, const FieldElem& rho) const {
        FieldElem acc = zero(rho.m);
        for (std::uint32_t i = x.m; i-- > 0;) {
            acc = mul(acc, rho);
            FieldElem t = zero(rho.m);
            t.c[0] = x.c[i];
            acc = add(acc, t);
        }
        return acc;
    }

    // rho_{d -> M}: fixed image in F_{p^M} of the degree-d generator.
    FieldElem generator_image(std::uint32_t d, std::uint32_t M) const {
        std::scoped_lock lk(mu_);
        auto it = gen_image_.find({d, M});
        if (it != gen_image_.end()) return it->second;
        ensure_target(M);
        it = gen_image_.find({d, M});
        if (it == gen_image_.end())
            raise("embedding-cap-exceeded",
                  "the root search for this embedding exceeds the configured cap");
        return it->second;
    }

    // All roots of defining_poly(d) inside F_{p^M}: enumerate the fixed space
    // of Frobenius^d (the copy of F_{p^d}) and test; search size is p^d.
    std::vector<FieldElem> roots_of_defpoly(std::uint32_t d, std::uint32_t M) const {
        if (field_size_exceeds(d, embed_cap_))
            raise("embedding-cap-exceeded", "subfield root search too large");
        fp::Matrix fm = frobenius_matrix(M);
        fp::Matrix fd(M, M);
        for (std::uint32_t i = 0; i < M; ++i) fd.at(i, i) = 1;
        for (std::uint32_t k = 0; k < d; ++k) {
            fp::Matrix nxt(M, M);
            for (std::uint32_t i = 0; i < M; ++i)
                for (std::uint32_t j = 0; j < M; ++j) {
                    std::uint64_t acc = 0;
                    for (std::uint32_t t = 0; t < M; ++t)
                        acc += static_cast<std::uint64_t>(fm.at(i, t)) * fd.at(t, j);
                    nxt.at(i, j) = static_cast<Residue>(acc % p_);
                }
            fd = std::move(nxt);
        }
        for (std::uint32_t i = 0; i < M; ++i) fd.at(i, i) = fp::sub(fd.at(i, i), 1, p_);
        auto basis = fp::kernel(fd, p_);
        const FpPoly f = defining_poly(d);
        std::vector<FieldElem> roots;
        std::vector<Residue> combo(basis.size(), 0);
        const std::uint64_t total = detail::checked_pow_u64(p_, static_cast<std::uint32_t>(basis.size()));
        for (std::uint64_t n = 0; n < total; ++n) {
            std::uint64_t v = n;
            FieldElem cand = zero(M);
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const Residue k = static_cast<Residue>(v % p_);
                v /= p_;
                if (k == 0) continue;
                for (std::uint32_t i = 0; i < M; ++i)
                    cand.c[i] = fp::add(cand.c[i], fp::mul(k, basis[b][i], p_), p_);
            }
            // Horner: f(cand) == 0 ?
            FieldElem acc = zero(M);
            for (std::size_t i = f.size(); i-- > 0;) {
                acc = mul(acc, cand);
                FieldElem t = zero(M);
                t.c[0] = f[i];
                acc = add(acc, t);
            }
            if (is_zero(acc)) roots.push_back(cand);
        }
        std::sort(roots.begin(), roots.end(), [&](const FieldElem& a, const FieldElem& b) {
            return counting_less(a, b);
        });
        return roots;
    }

    // Fix rho_{d -> M} for every proper divisor d of M whose root search fits
    // under the cap, compatibly with the lattice below; the surviving family
    // is closed downward (e | d keeps p^e <= p^d), so its constraints never
    // reference a skipped pair.  Callers hold the lock.
    void ensure_target(std::uint32_t M) const {
        if (lattice_built_.count(M)) return;
        auto divs = detail::divisors_of(M);
        for (std::uint32_t d : divs)
            if (d > 1 && d < M && !field_size_exceeds(d, embed_cap_)) ensure_target(d);
        for (std::uint32_t d : divs) {
            if (d < 2 || d == M) continue;
            if (field_size_exceeds(d, embed_cap_)) continue;
            auto roots = roots_of_defpoly(d, M);
            std::optional<FieldElem> chosen;
            for (const FieldElem& rho : roots) {
                bool ok = true;
                for (std::uint32_t e : detail::divisors_of(d)) {
                    if (e < 2 || e == d) continue;
                    const FieldElem& lo = gen_image_.at({e, d});
                    const FieldElem& hi = gen_image_.at({e, M});
                    if (eval_coords(lo, rho) != hi) { ok = false; break; }
                }
                if (ok) { chosen = rho; break; }
            }
            if (!chosen) raise("internal-error", "no compatible embedding root");
            gen_image_.emplace(std::make_pair(d, M), *chosen);
        }
        lattice_built_.insert(M);
    }

    std::uint32_t p_, s_, m_max_;
    std::uint64_t embed_cap_;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::uint32_t, FpPoly> defpoly_;
    mutable std::map<std::pair<std::uint32_t, std::uint32_t>, FieldElem> gen_image_;
    mutable std::set<std::uint32_t> lattice_built_;
};

}  // namespace valmod
