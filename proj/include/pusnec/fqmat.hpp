#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pusnec/ffield.hpp"

namespace pusnec {

// Dense matrix over F_q. Row-major, entries are ground-field values.
struct FqMat {
    int rows = 0;
    int cols = 0;
    std::vector<uint16_t> a;

    FqMat() = default;
    FqMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    uint16_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    uint16_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static FqMat identity(int n) {
        FqMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    bool operator==(const FqMat&) const = default;
};

FqMat fq_mul(const GroundField& gf, const FqMat& x, const FqMat& y);
FqMat fq_transpose(const FqMat& x);
int fq_rank(const GroundField& gf, FqMat m);

// Basis of the right kernel {v : m v = 0}; columns of the result.
FqMat fq_kernel_basis(const GroundField& gf, FqMat m);

// Solve m x = b for x (b may have several columns). Returns the particular
// solution with free variables set to zero, or nullopt when inconsistent.
std::optional<FqMat> fq_solve(const GroundField& gf, FqMat m, FqMat b);

std::optional<FqMat> fq_inverse(const GroundField& gf, const FqMat& m);

}  // namespace pusnec
