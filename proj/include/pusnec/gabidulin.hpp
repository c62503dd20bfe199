#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pusnec/ffield.hpp"
#include "pusnec/fqmat.hpp"
#include "pusnec/linpoly.hpp"

namespace pusnec {

struct SingularSystem : FieldError {
    using FieldError::FieldError;
};

// Matrix over F_{q^n}.
struct ExtMat {
    int rows = 0;
    int cols = 0;
    std::vector<Elem> data;

    ExtMat() = default;
    ExtMat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}
    Elem& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    const Elem& at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    bool operator==(const ExtMat&) const = default;
};

ExtMat ext_mul(const Field& f, const ExtMat& x, const ExtMat& y);
std::optional<ExtMat> ext_inverse(const Field& f, const ExtMat& m);
int ext_rank(const Field& f, ExtMat m);  // rank over F_{q^n}

// Code parameters. n = k1 + n0; k = k0 + mu0. k1 > 0 means the first k1
// codeword symbols are withheld by Alice and decoded as erasures (the
// distribution configurations of the good-code table). k1 = 0 is the plain
// full-length code used for codec-level analysis.
struct CodecSpec {
    std::string name = "custom";
    unsigned w = 8;
    int n = 9;
    int k = 3;
    int n0 = 9;
    int k0 = 3;
    int mu0 = 0;
    int k1 = 0;
    int l = 3;
    std::string key_consumption;  // C_key annotation for registry rows
    bool minimal_length = false;

    int capability() const { return n0 - k; }  // 2*tau + rho <= n0 - k on received columns
    void validate() const;
};

// Named presets from the good-code selection table.
const std::vector<CodecSpec>& codec_registry();
std::optional<CodecSpec> find_codec(const std::string& name);
CodecSpec full_length_spec(unsigned w, int n, int k, int l);

// Linearized Berlekamp-Massey: shortest LFSR with f'_0 = 1 for the sequence.
LinPoly lbma(const Field& f, const std::vector<Elem>& syndromes);

// LBMA over the Cartesian product space: recursive across components,
// combining through symbolic products.
LinPoly cps_lbma(const Field& f, const std::vector<std::vector<Elem>>& component_syndromes);

// Gabidulin's recursive O(tau^2) solver for s_i = sum_j z_j x_j^[i].
struct SharedGraTables {
    // A[v][j-v] = A_j^(v), S[v] = (A_v^(v))^-1, R[v] = A_v^(v) (S[v])^[-1]
    std::vector<std::vector<Elem>> A;
    std::vector<Elem> S;
    std::vector<Elem> R;
    int tau = 0;
};
SharedGraTables shared_gra_precompute(const Field& f, const std::vector<Elem>& z);
std::vector<Elem> shared_gra_solve(const Field& f, const SharedGraTables& t, const std::vector<Elem>& s);
std::vector<Elem> gra(const Field& f, const std::vector<Elem>& z, const std::vector<Elem>& s);

struct DecodeOutput {
    enum class Status { ok, failure, invalid_erasures };
    Status status = Status::failure;
    std::string reason;
    ExtMat u;  // l x k0
    ExtMat r;  // l x mu0
    int tau = 0;
    int rho_received = 0;

    bool ok() const { return status == Status::ok; }
};

class Codec {
public:
    Codec(CodecSpec spec, Field field);
    static Codec make(const CodecSpec& spec, const std::string& cache_dir = "");

    const CodecSpec& spec() const { return spec_; }
    const Field& field() const { return field_; }

    // Explicit generator/parity-check matrices of the q-cyclic code.
    ExtMat g_full() const;   // k x n
    ExtMat g1() const;       // k x k
    ExtMat g2() const;       // k x n0
    ExtMat h_mat() const;    // (n-k) x n

    // f * G1 = [u r], solved per component by GRA in O(k^2).
    ExtMat pre_encode(const ExtMat& u, const ExtMat& r) const;
    ExtMat encode(const ExtMat& f) const;       // l x n0 outer word (withheld prefix dropped)
    ExtMat encode_full(const ExtMat& f) const;  // l x n word x'

    // received: l x n0 word from the RLNC decoder; erasure_rows: rho' x n0
    // locations over F_q (zero-size matrix when none). The withheld prefix
    // is prepended as k1 additional known erasures.
    DecodeOutput decode(const ExtMat& received, const FqMat& erasure_rows) const;

    ExtMat random_message(Rng& rng) const;  // l x k0
    ExtMat random_mask(Rng& rng) const;     // l x mu0

    // Column-major packed bytes, w-bit symbols little-endian within bytes.
    std::vector<uint8_t> pack_outer(const ExtMat& word) const;
    ExtMat unpack_outer(const std::vector<uint8_t>& bytes) const;

private:
    std::vector<Elem> syndromes(const std::vector<Elem>& word_row) const;

    CodecSpec spec_;
    Field field_;
};

}  // namespace pusnec
