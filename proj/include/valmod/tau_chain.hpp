#pragma once
// Finite tau-chain windows and the axiom checker.
//
// A chain is a finite list of abstract points in ascending order with a
// designated maximum "inf" and a partial map tau.  The checker reports every
// violated instantiable instance of the chain axioms:
//   1. inf is the maximum (and tau(inf) = inf when defined),
//   2. tau is strictly increasing where defined,
//   3. for gamma != inf with tau(gamma) <= gamma and delta < gamma:
//      tau(delta) < delta.
// The dual of axiom 3 (tau(gamma) >= gamma and gamma < delta != inf implies
// tau(delta) > delta) follows from the axioms on total chains but can fail
// independently on a partial window, so it is reported as a separate
// derived check.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "valmod/errors.hpp"

namespace valmod {

struct FiniteTauChain {
    std::vector<std::string> labels;      // ascending order; order = list position
    std::size_t infinity = 0;             // index of the designated maximum
    std::map<std::size_t, std::size_t> tau;  // partial
};

struct ChainViolation {
    std::string axiom;   // "order-max", "tau-increasing", "tau-inf-fixed",
                         // "unique-fixed-point", "unique-fixed-point-dual"
    std::string detail;
};

inline std::vector<ChainViolation> tau_chain_check(const FiniteTauChain& c) {
    std::vector<ChainViolation> out;
    const std::size_t n = c.labels.size();
    if (n == 0 || c.infinity >= n) {
        out.push_back({"order-max", "no designated infinity point"});
        return out;
    }
    const std::size_t inf = c.infinity;
    if (inf != n - 1)
        out.push_back({"order-max", "infinity is not the maximum of the chain"});
    for (const auto& [a, b] : c.tau)
        if (a >= n || b >= n) {
            out.push_back({"order-max", "tau maps outside the chain"});
            return out;
        }
    if (auto it = c.tau.find(inf); it != c.tau.end() && it->second != inf)
        out.push_back({"tau-inf-fixed", "tau(inf) = " + c.labels[it->second]});
    // strict monotonicity on defined pairs
    for (const auto& [a, ta] : c.tau)
        for (const auto& [b, tb] : c.tau)
            if (a < b && !(ta < tb))
                out.push_back({"tau-increasing",
                               "tau(" + c.labels[a] + ") = " + c.labels[ta] + " !< tau(" +
                                   c.labels[b] + ") = " + c.labels[tb]});
    // axiom 3 and its dual
    for (const auto& [g, tg] : c.tau) {
        if (g == inf) continue;
        if (tg <= g) {
            for (const auto& [d, td] : c.tau) {
                if (d < g && !(td < d))
                    out.push_back({"unique-fixed-point",
                                   "tau(" + c.labels[g] + ") <= " + c.labels[g] + " but tau(" +
                                       c.labels[d] + ") = " + c.labels[td] + " is not below " +
                                       c.labels[d]});
            }
        }
        if (tg >= g) {
            for (const auto& [d, td] : c.tau) {
                if (d == inf) continue;
                if (g < d && !(td > d))
                    out.push_back({"unique-fixed-point-dual",
                                   "tau(" + c.labels[g] + ") >= " + c.labels[g] + " but tau(" +
                                       c.labels[d] + ") = " + c.labels[td] + " is not above " +
                                       c.labels[d]});
            }
        }
    }
    return out;
}

}  // namespace valmod
