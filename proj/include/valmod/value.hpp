#pragma once
// The value set of the concrete model: rationals with p-power denominators,
// plus a maximum element infinity.  tau acts by multiplication with p^s and
// theta = 0 is its unique finite fixed point.

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "valmod/errors.hpp"

namespace valmod {

struct Value {
    bool inf = false;
    std::int64_t num = 0;     // reduced: p does not divide num while kpow > 0
    std::uint32_t kpow = 0;   // denominator p^kpow
    std::uint32_t p = 2;

    static Value infinity(std::uint32_t p = 2) { return Value{true, 0, 0, p}; }

    static Value integer(std::int64_t n, std::uint32_t p) { return Value{false, n, 0, p}; }

    static Value fraction(std::int64_t n, std::uint32_t kpow, std::uint32_t p) {
        Value v{false, n, kpow, p};
        v.reduce();
        return v;
    }

    bool is_zero() const { return !inf && num == 0; }

    void reduce() {
        if (inf) { num = 0; kpow = 0; return; }
        if (num == 0) { kpow = 0; return; }
        while (kpow > 0 && num % static_cast<std::int64_t>(p) == 0) {
            num /= static_cast<std::int64_t>(p);
            --kpow;
        }
    }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.inf || b.inf) return a.inf == b.inf;
        return a.num == b.num && a.kpow == b.kpow;
    }

    friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
        if (a.inf && b.inf) return std::strong_ordering::equal;
        if (a.inf) return std::strong_ordering::greater;
        if (b.inf) return std::strong_ordering::less;
        // a.num / p^a.kpow  vs  b.num / p^b.kpow
        const std::uint32_t k = std::max(a.kpow, b.kpow);
        return a.scaled(k) <=> b.scaled(k);
    }

    // num * p^(k - kpow); k >= kpow.
    std::int64_t scaled(std::uint32_t k) const {
        std::int64_t v = num;
        for (std::uint32_t i = kpow; i < k; ++i) {
            if (v > INT64_MAX / static_cast<std::int64_t>(p) ||
                v < INT64_MIN / static_cast<std::int64_t>(p))
                raise("value-overflow", "exponent comparison overflow");
            v *= static_cast<std::int64_t>(p);
        }
        return v;
    }
};

inline Value value_min(const Value& a, const Value& b) { return a < b ? a : b; }

// gamma * p^e  (tau^i is e = s*i).
inline Value mul_p_pow(Value v, std::uint32_t e) {
    if (v.inf || v.num == 0) return v;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (v.kpow > 0) {
            --v.kpow;
        } else {
            if (v.num > INT64_MAX / static_cast<std::int64_t>(v.p) ||
                v.num < INT64_MIN / static_cast<std::int64_t>(v.p))
                raise("value-overflow", "tau overflow");
            v.num *= static_cast<std::int64_t>(v.p);
        }
    }
    return v;
}

// gamma / p^e, subject to the denominator budget.
inline Value div_p_pow(Value v, std::uint32_t e, std::uint32_t k_max) {
    if (v.inf || v.num == 0) return v;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (v.num % static_cast<std::int64_t>(v.p) == 0)
            v.num /= static_cast<std::int64_t>(v.p);
        else
            ++v.kpow;
    }
    if (v.kpow > k_max)
        raise("denominator-budget-exhausted", "exponent denominator exceeds p^k_max");
    return v;
}

// Largest grid point a/p^k_max that is <= gamma; used to round a sound but
// unrepresentable precision bound down onto the exponent grid.
inline Value floor_to_grid(const Value& v, std::uint32_t k_max) {
    if (v.inf) return v;
    if (v.kpow <= k_max) return v;
    std::int64_t q = v.num;
    std::int64_t denom = 1;
    for (std::uint32_t i = k_max; i < v.kpow; ++i) denom *= static_cast<std::int64_t>(v.p);
    std::int64_t fl = q / denom;
    if (q % denom != 0 && q < 0) --fl;
    return Value::fraction(fl, k_max, v.p);
}

}  // namespace valmod
