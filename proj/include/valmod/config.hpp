#pragma once
// Runtime configuration shared by the solver layers and the CLI.

#include <cstdint>

namespace valmod {

struct Config {
    std::uint32_t p = 2;
    std::uint32_t s = 1;               // phi = x -> x^(p^s)
    std::uint32_t m_max = 24;          // largest admitted extension degree
    std::int64_t precision = 64;       // default absolute series cutoff
    std::uint32_t k_max = 8;           // exponent denominators capped at p^k_max
    std::uint32_t factor_deg_bound = 8;
    std::uint32_t hull_deg_bound = 4;
    std::uint64_t seed = 0x5eed;       // deterministic seed for randomized suites
    std::uint64_t embed_cap = std::uint64_t{1} << 20;
};

}  // namespace valmod
