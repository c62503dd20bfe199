#pragma once

#include <cstdint>
#include <vector>

#include "pusnec/ffield.hpp"
#include "pusnec/fqmat.hpp"
#include "pusnec/gabidulin.hpp"
#include "pusnec/rng.hpp"

namespace pusnec {

struct IndegreeViolation : FieldError {
    using FieldError::FieldError;
};

// One in-flight packet: l payload symbols plus the global encoding vector
// describing it as a combination of the outer codeword columns. A zero
// vector marks an erased packet travelling as a tombstone.
struct Packet {
    std::vector<Elem> payload;      // l entries
    std::vector<uint16_t> gev;      // n0 entries over F_q

    bool tombstone() const {
        for (uint16_t c : gev)
            if (c) return false;
        return true;
    }
};

Packet zero_packet(int l, int n0);

// Alice's spread of the outer word into n1 random-combination packets.
// strict_rank redraws until the n0 x n1 coefficient matrix has full rank;
// the default emits the draw as-is (finite-size effects included).
std::vector<Packet> alice_spread(const Field& f, const ExtMat& x, int n1, Rng& rng, bool strict_rank = false);

// F_q-RLNC mixing at one relay: out = R_v * in with R_v uniform O x I.
// indegree_cap enforces |in| < k.
std::vector<Packet> relay(const Field& f, const std::vector<Packet>& in, int out_degree, int indegree_cap, Rng& rng);

// Pass-through relay used on disjoint-path graphs (plain routing).
std::vector<Packet> relay_passthrough(const std::vector<Packet>& in, int out_degree);

struct InvertResult {
    ExtMat ytilde;        // l x n0 partial solution, free directions zeroed
    FqMat erasure_rows;   // rho' x n0 erasure locations for the outer decoder
    int rank = 0;
};

// Gaussian elimination of the transfer matrix assembled from the packets'
// encoding vectors. Rank deficiency is reported as data, not an error.
InvertResult bob_invert(const Field& f, const std::vector<Packet>& packets, int l);

}  // namespace pusnec
