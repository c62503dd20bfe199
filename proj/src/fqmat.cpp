#include "pusnec/fqmat.hpp"

namespace pusnec {

FqMat fq_mul(const GroundField& gf, const FqMat& x, const FqMat& y) {
    FqMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            uint16_t v = x.at(i, k);
            if (!v) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) ^= gf.mul(v, y.at(k, j));
        }
    }
    return r;
}

FqMat fq_transpose(const FqMat& x) {
    FqMat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

namespace {

// In-place Gauss-Jordan. Pivot choice: lowest column index, first nonzero
// row, for reproducible eliminations. Returns pivot (row -> col) list.
std::vector<int> gauss_jordan(const GroundField& gf, FqMat& m, FqMat* rhs) {
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pr = -1;
        for (int i = r; i < m.rows; ++i) {
            if (m.at(i, c)) {
                pr = i;
                break;
            }
        }
        if (pr < 0) continue;
        if (pr != r) {
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
            if (rhs)
                for (int j = 0; j < rhs->cols; ++j) std::swap(rhs->at(pr, j), rhs->at(r, j));
        }
        uint16_t piv_inv = gf.inv(m.at(r, c));
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = gf.mul(m.at(r, j), piv_inv);
        if (rhs)
            for (int j = 0; j < rhs->cols; ++j) rhs->at(r, j) = gf.mul(rhs->at(r, j), piv_inv);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            uint16_t f = m.at(i, c);
            if (!f) continue;
            for (int j = 0; j < m.cols; ++j) m.at(i, j) ^= gf.mul(f, m.at(r, j));
            if (rhs)
                for (int j = 0; j < rhs->cols; ++j) rhs->at(i, j) ^= gf.mul(f, rhs->at(r, j));
        }
        pivot_col.push_back(c);
        ++r;
    }
    return pivot_col;
}

}  // namespace

int fq_rank(const GroundField& gf, FqMat m) {
    return static_cast<int>(gauss_jordan(gf, m, nullptr).size());
}

FqMat fq_kernel_basis(const GroundField& gf, FqMat m) {
    int ncols = m.cols;
    std::vector<int> pivots = gauss_jordan(gf, m, nullptr);
    std::vector<char> is_pivot(ncols, 0);
    for (int c : pivots) is_pivot[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < ncols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FqMat basis(ncols, static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        basis.at(fc, static_cast<int>(k)) = 1;
        for (size_t r = 0; r < pivots.size(); ++r) basis.at(pivots[r], static_cast<int>(k)) = m.at(static_cast<int>(r), fc);
    }
    return basis;
}

std::optional<FqMat> fq_solve(const GroundField& gf, FqMat m, FqMat b) {
    std::vector<int> pivots = gauss_jordan(gf, m, &b);
    int r = static_cast<int>(pivots.size());
    for (int i = r; i < m.rows; ++i)
        for (int j = 0; j < b.cols; ++j)
            if (b.at(i, j)) return std::nullopt;
    FqMat x(m.cols, b.cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < b.cols; ++j) x.at(pivots[i], j) = b.at(i, j);
    return x;
}

std::optional<FqMat> fq_inverse(const GroundField& gf, const FqMat& m) {
    if (m.rows != m.cols) return std::nullopt;
    FqMat work = m;
    FqMat rhs = FqMat::identity(m.rows);
    std::vector<int> pivots = gauss_jordan(gf, work, &rhs);
    if (static_cast<int>(pivots.size()) != m.rows) return std::nullopt;
    return rhs;
}

}  // namespace pusnec
