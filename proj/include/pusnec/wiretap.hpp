#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pusnec/ffield.hpp"
#include "pusnec/fqmat.hpp"
#include "pusnec/gabidulin.hpp"

namespace pusnec {

struct TooLarge : FieldError {
    using FieldError::FieldError;
};
struct StructureMismatch : FieldError {
    using FieldError::FieldError;
};

// p(mu) for mu = 0..n0, analytic or Monte Carlo.
struct WiretapDistribution {
    std::vector<double> p;
    std::string provenance;  // "monte-carlo" | "analytic"

    double sum() const {
        double s = 0;
        for (double v : p) s += v;
        return s;
    }
};

// Leakage quantities in multiples of log2 q^m, plus the bit scaling.
struct SecrecyReport {
    int xi = 1;
    double plp = 0;
    double ramp_index = 0;     // I_R
    double leakage_index = 0;  // I_L = I_R + xi * PLP
    double symbol_bits = 0;    // log2 q^m
    double leakage_bits = 0;   // I_L * log2 q^m
};

SecrecyReport leakage_indices(const WiretapDistribution& dist, int k, int xi, double symbol_bits);

struct DisjointPathAnalytics {
    WiretapDistribution dist;
    double fer = 0;
    SecrecyReport report;
};
// Closed forms for 1-to-N multicast over n0 disjoint eta-hop paths with
// uniform compromise rate gamma and erasure rate eps.
DisjointPathAnalytics disjoint_path_analytics(double gamma, double eps, int eta, int n0, int k, int n_bobs, int xi,
                                              double symbol_bits = 1.0);
double disjoint_path_mu_prob(double gamma, int eta, int n0, int mu);
double disjoint_path_fer(double eps, int eta, int n0, int k, int n_bobs);

// Threshold-model mutual information staircase, in multiples of log2 q^m.
double threshold_model_mi(int k, int mu0, int mu, int xi);

// Exact mutual informations by exhaustive channel enumeration. The message
// space is the k-fold product of an alphabet of size q_alpha; encode maps a
// message (k digits) to the tapped observation (digits in the same
// alphabet). Returns I(U_S; Z) in bits for every nonempty S of the first k0
// positions.
struct ToyMiEntry {
    std::vector<int> subset;
    double bits;
};
std::vector<ToyMiEntry> toy_mi_oracle(int k, uint64_t q_alpha, int k0,
                                      const std::function<std::vector<uint32_t>(const std::vector<uint32_t>&)>& encode);
double toy_mi_lookup(const std::vector<ToyMiEntry>& table, const std::vector<int>& subset);

// Ground-field linear code wrapper: x = u G, observation = tapped columns.
std::vector<ToyMiEntry> toy_mi_linear_code(const GroundField& gf, const FqMat& gen, const std::vector<int>& taps,
                                           int k0);

// Exhaustive oracle for a tiny Gabidulin configuration: enumerates f,
// derives [u r] = f G1 and z = (f G2) B.
std::vector<ToyMiEntry> toy_mi_gabidulin(const Codec& codec, const FqMat& wiretap_cols);

struct CosetCheckReport {
    int mu = 0;
    int kept_coords = 0;
    bool bijective = false;
    bool independent = false;
    bool block_structure = false;
    std::string detail;
};
// Verifies the coset decomposition behind the leakage theorem on a tiny
// code: builds the selector T, checks G T nonsingular, and verifies the
// channel-matrix structure by exhaustion. Throws StructureMismatch on
// failure (never expected on MRD inputs).
CosetCheckReport coset_structure_check(const Codec& codec, const FqMat& wiretap_cols, int xi);

}  // namespace pusnec
