#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pusnec/ffield.hpp"

namespace pusnec {

// Systematic Reed-Solomon [n_h, k_h] over F_q, n_h <= q - 1. Decodes
// 2*tau + rho <= n_h - k_h symbol errata; comparison baseline only.
class ReedSolomon {
public:
    ReedSolomon(const GroundField& gf, int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }

    std::vector<uint16_t> encode(const std::vector<uint16_t>& msg) const;

    // erasure positions may be empty; returns the message or nullopt on
    // decode failure (includes the miscorrection guard via re-encoding)
    std::optional<std::vector<uint16_t>> decode(const std::vector<uint16_t>& word,
                                                const std::vector<int>& erasures = {}) const;

private:
    const GroundField& gf_;
    int n_, k_;
    std::vector<uint16_t> gen_;  // generator polynomial, low degree first
};

}  // namespace pusnec
