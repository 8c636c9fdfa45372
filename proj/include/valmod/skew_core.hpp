#pragma once
// Twisted polynomial arithmetic over an arbitrary coefficient field.
//
// A polynomial is a little-endian coefficient vector (entry i multiplies
// t^i) with no trailing zero.  Multiplication follows the commutation rule
// a t = t phi(a), so the product coefficients are
//     c_i = sum_{k+l=i} phi^l(a_k) b_l.
// Division keeps the divisor on the left (q = d * quot + rem); it only needs
// phi applied forward, so it works even when phi is not surjective.  The
// concrete tower-field instantiation lives in skewpoly.hpp; the generic
// demo instantiation in skew_generic.hpp.

#include <concepts>
#include <vector>

#include "valmod/errors.hpp"

namespace valmod {

template <class F>
concept SkewCoefficients = requires(const F f, const typename F::Elem a, const typename F::Elem b) {
    { f.zero() } -> std::convertible_to<typename F::Elem>;
    { f.one() } -> std::convertible_to<typename F::Elem>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.add(a, b) } -> std::convertible_to<typename F::Elem>;
    { f.neg(a) } -> std::convertible_to<typename F::Elem>;
    { f.mul(a, b) } -> std::convertible_to<typename F::Elem>;
    { f.inv(a) } -> std::convertible_to<typename F::Elem>;
    { f.phi(a) } -> std::convertible_to<typename F::Elem>;
};

template <SkewCoefficients F>
using SkewCoeffVec = std::vector<typename F::Elem>;

template <SkewCoefficients F>
void skew_trim(const F& f, SkewCoeffVec<F>& a) {
    while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <SkewCoefficients F>
SkewCoeffVec<F> skew_add(const F& f, const SkewCoeffVec<F>& a, const SkewCoeffVec<F>& b) {
    SkewCoeffVec<F> r;
    const std::size_t n = std::max(a.size(), b.size());
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < a.size() && i < b.size())
            r.push_back(f.add(a[i], b[i]));
        else if (i < a.size())
            r.push_back(a[i]);
        else
            r.push_back(b[i]);
    }
    skew_trim(f, r);
    return r;
}

template <SkewCoefficients F>
SkewCoeffVec<F> skew_neg(const F& f, SkewCoeffVec<F> a) {
    for (auto& v : a) v = f.neg(v);
    return a;
}

template <SkewCoefficients F>
SkewCoeffVec<F> skew_mul(const F& f, const SkewCoeffVec<F>& a, const SkewCoeffVec<F>& b) {
    if (a.empty() || b.empty()) return {};
    SkewCoeffVec<F> r(a.size() + b.size() - 1, f.zero());
    SkewCoeffVec<F> pa = a;  // phi^l(a) maintained incrementally over l
    for (std::size_t l = 0; l < b.size(); ++l) {
        if (l > 0)
            for (auto& v : pa) v = f.phi(v);
        if (f.is_zero(b[l])) continue;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (f.is_zero(pa[k])) continue;
            r[k + l] = f.add(r[k + l], f.mul(pa[k], b[l]));
        }
    }
    skew_trim(f, r);
    return r;
}

template <SkewCoefficients F>
struct SkewDivMod {
    SkewCoeffVec<F> quot;
    SkewCoeffVec<F> rem;
};

// q = d * quot + rem with deg rem < deg d.
template <SkewCoefficients F>
SkewDivMod<F> skew_divmod(const F& f, SkewCoeffVec<F> q, const SkewCoeffVec<F>& d) {
    if (d.empty()) raise("division-by-zero", "right division by the zero polynomial");
    SkewDivMod<F> out;
    skew_trim(f, q);
    if (q.size() < d.size()) {
        out.rem = std::move(q);
        return out;
    }
    const std::size_t k_top = q.size() - d.size();
    std::vector<SkewCoeffVec<F>> phid(k_top + 1);
    phid[0] = d;
    for (std::size_t k = 1; k <= k_top; ++k) {
        phid[k] = phid[k - 1];
        for (auto& v : phid[k]) v = f.phi(v);
    }
    out.quot.assign(k_top + 1, f.zero());
    while (q.size() >= d.size()) {
        const std::size_t k = q.size() - d.size();
        // leading term of d * t^k c is t^(deg d + k) phi^k(lead d) c
        const typename F::Elem c = f.mul(f.inv(phid[k].back()), q.back());
        out.quot[k] = c;
        for (std::size_t i = 0; i < d.size(); ++i)
            q[i + k] = f.add(q[i + k], f.neg(f.mul(phid[k][i], c)));
        skew_trim(f, q);  // the top coefficient cancels exactly
    }
    out.rem = std::move(q);
    return out;
}

}  // namespace valmod
