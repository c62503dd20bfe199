#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pusnec/rng.hpp"

namespace pusnec {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedPair : FieldError {
    using FieldError::FieldError;
};
struct DivisionByZero : FieldError {
    using FieldError::FieldError;
};

// Ground field F_q, q = 2^w, w <= 10. Elements are w-bit integers,
// addition is XOR, multiplication through log/antilog tables.
class GroundField {
public:
    explicit GroundField(unsigned w);

    unsigned w() const { return w_; }
    uint32_t q() const { return q_; }

    uint16_t add(uint16_t a, uint16_t b) const { return a ^ b; }
    uint16_t mul(uint16_t a, uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    uint16_t inv(uint16_t a) const {
        if (a == 0) throw DivisionByZero("F_q inverse of zero");
        return exp_[q_ - 1 - log_[a]];
    }
    uint16_t pow_generator(uint32_t e) const { return exp_[e % (q_ - 1)]; }

private:
    unsigned w_;
    uint32_t q_;
    std::vector<uint16_t> exp_;  // size 2(q-1), doubled to skip a mod
    std::vector<uint16_t> log_;  // size q
};

inline constexpr int kMaxN = 24;

// Element of F_{q^n} in beta-normal-basis coordinates. Coordinates beyond n
// stay zero so default equality works.
struct Elem {
    std::array<uint16_t, kMaxN> c{};
    bool operator==(const Elem&) const = default;
};

// Per-thread operation counters for the complexity checks.
struct OpCounts {
    uint64_t mul = 0;
    uint64_t fast_mul = 0;
    uint64_t add = 0;
    uint64_t qpow = 0;
    uint64_t inv = 0;
    void reset() { *this = OpCounts{}; }
};
OpCounts& op_counts();

// F_{q^n} in a self-dual normal basis beta^[0..n-1]. The multiplication
// table T0 holds t_{i,j}^{(0)} of the beta^[i]beta^[j] expansion; all other
// slices follow from cyclic shifts.
class Field {
public:
    const GroundField& ground() const { return gf_; }
    unsigned w() const { return gf_.w(); }
    uint32_t q() const { return gf_.q(); }
    int n() const { return n_; }
    int complexity() const { return ct_; }         // C_T, nonzero entries of T0
    bool optimal() const { return ct_ == 2 * n_ - 1; }
    bool self_dual() const { return self_dual_; }
    uint16_t t0(int i, int j) const { return t0_[size_t(i) * n_ + j]; }

    Elem zero() const { return Elem{}; }
    Elem one() const { return one_; }
    Elem basis_elem(int j) const;
    Elem from_coords(const std::vector<uint16_t>& coords) const;

    bool is_zero(const Elem& a) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem scale(const Elem& a, uint16_t c) const;     // F_q scalar times element
    Elem mul(const Elem& a, const Elem& b) const;
    Elem fast_mul(const Elem& b, int j) const;       // b * beta^[j]
    Elem qpow(const Elem& x, int i) const;           // x^[i], cyclic shift by i
    Elem inv(const Elem& x) const;                   // Itoh inversion
    Elem pow_q_minus(const Elem& x) const { return qpow(x, n_ - 1); }  // x^[-1]

    uint16_t trace(const Elem& a) const;             // Tr to F_q, = sum of coords
    Elem random_elem(Rng& rng) const;
    Elem random_nonzero(Rng& rng) const;

    // Construction + persistence. cache_dir == "" disables the disk cache.
    static Field build(unsigned w, int n, const std::string& cache_dir = "");
    static bool pair_supported(unsigned w, int n);
    static Field from_table(unsigned w, int n, std::vector<uint16_t> t0);

    void save(const std::string& path) const;
    static Field load(const std::string& path);

private:
    Field(GroundField gf, int n);
    void finalize();  // sparse lists, identity, duality verification

    GroundField gf_;
    int n_;
    int ct_ = 0;
    bool self_dual_ = false;
    Elem one_{};
    std::vector<uint16_t> t0_;  // dense n*n
    struct Entry {
        uint8_t i, j;
        uint16_t t;
    };
    std::vector<Entry> sparse_;                    // nonzero T0 entries
    std::vector<std::vector<Entry>> by_col_;       // grouped by j for fast_mul
};

}  // namespace pusnec
