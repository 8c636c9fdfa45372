#pragma once
// Generic-coefficient witness for the one-sided Euclidean theory: twisted
// polynomials over the rational function field F_p(z) with the endomorphism
// phi : f(z) -> f(z^p).  This phi is not surjective (z itself has no
// preimage: images have numerator and denominator supported on exponents
// divisible by p), yet right division still works because it only applies
// phi forward.  Only ring arithmetic and right_divmod are exposed here; the
// solver and theory machinery never touch this field.

#include <cstdint>
#include <optional>
#include <utility>

#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/skew_core.hpp"

namespace valmod::generic {

struct RatFun {
    FpPoly num;       // little-endian over F_p
    FpPoly den{1};    // monic after normalization

    friend bool operator==(const RatFun&, const RatFun&) = default;
};

struct RatFunField {
    using Elem = RatFun;
    Residue p;

    Elem normalize(FpPoly num, FpPoly den) const {
        detail::fp_trim(num);
        detail::fp_trim(den);
        if (den.empty()) raise("division-by-zero", "zero denominator");
        if (num.empty()) return Elem{{}, {1}};
        FpPoly g = detail::fp_gcd(num, den, p);
        if (detail::fp_deg(g) > 0) {
            num = detail::fp_divq(num, g, p);
            den = detail::fp_divq(den, g, p);
        }
        const Residue lead_inv = fp::inv(den.back(), p);
        return Elem{detail::fp_scale(num, lead_inv, p), detail::fp_scale(den, lead_inv, p)};
    }

    Elem zero() const { return Elem{{}, {1}}; }
    Elem one() const { return Elem{{1}, {1}}; }
    Elem from_poly(FpPoly f) const { return normalize(std::move(f), {1}); }
    Elem z() const { return Elem{{0, 1}, {1}}; }

    bool is_zero(const Elem& x) const { return x.num.empty(); }

    Elem add(const Elem& a, const Elem& b) const {
        FpPoly num = detail::fp_add(detail::fp_mul(a.num, b.den, p),
                                    detail::fp_mul(b.num, a.den, p), p);
        return normalize(std::move(num), detail::fp_mul(a.den, b.den, p));
    }

    Elem neg(const Elem& a) const {
        return Elem{detail::fp_scale(a.num, p - 1, p), a.den};
    }

    Elem mul(const Elem& a, const Elem& b) const {
        return normalize(detail::fp_mul(a.num, b.num, p), detail::fp_mul(a.den, b.den, p));
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) raise("division-by-zero", "inverse of 0");
        return normalize(a.den, a.num);
    }

    // Substitute z -> z^p in one polynomial.
    FpPoly stretch(const FpPoly& f) const {
        if (f.empty()) return {};
        FpPoly r((f.size() - 1) * p + 1, 0);
        for (std::size_t i = 0; i < f.size(); ++i) r[i * p] = f[i];
        return r;
    }

    Elem phi(const Elem& a) const { return normalize(stretch(a.num), stretch(a.den)); }

    // Exact preimage under phi, when it exists: both numerator and
    // denominator of a normalized element must live in F_p[z^p].
    std::optional<Elem> phi_preimage(const Elem& a) const {
        auto contract = [&](const FpPoly& f) -> std::optional<FpPoly> {
            if (f.empty()) return FpPoly{};
            if ((f.size() - 1) % p != 0) return std::nullopt;
            FpPoly r((f.size() - 1) / p + 1, 0);
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (i % p == 0)
                    r[i / p] = f[i];
                else if (f[i] != 0)
                    return std::nullopt;
            }
            return r;
        };
        auto n = contract(a.num);
        auto d = contract(a.den);
        if (!n || !d) return std::nullopt;
        return normalize(std::move(*n), std::move(*d));
    }
};

using GenPoly = SkewCoeffVec<RatFunField>;

inline GenPoly gen_mul(const RatFunField& f, const GenPoly& a, const GenPoly& b) {
    return skew_mul(f, a, b);
}

inline SkewDivMod<RatFunField> gen_divmod(const RatFunField& f, const GenPoly& q,
                                          const GenPoly& d) {
    return skew_divmod(f, q, d);
}

}  // namespace valmod::generic
