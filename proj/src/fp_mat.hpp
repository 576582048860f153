#ifndef CHARP_FP_MAT_HPP
#define CHARP_FP_MAT_HPP

#include <vector>

#include "fp.hpp"

namespace charp {

// Dense matrix over F_p, row major.
struct FpMat {
    size_t rows = 0, cols = 0;
    std::vector<u32> a;

    FpMat() = default;
    FpMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

    u32& at(size_t i, size_t j) { return a[i * cols + j]; }
    u32 at(size_t i, size_t j) const { return a[i * cols + j]; }

    static FpMat identity(size_t n) {
        FpMat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const FpMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

FpMat mat_mul(const FpCtx& F, const FpMat& A, const FpMat& B);
FpMat mat_add(const FpCtx& F, const FpMat& A, const FpMat& B);
FpMat mat_scale(const FpCtx& F, const FpMat& A, u32 s);

// Basis of the right kernel {v : Av = 0}, as column vectors (each rows = A.cols,
// cols = 1), from the reduced row echelon form; empty list for a trivial kernel.
std::vector<FpMat> nullspace(const FpCtx& F, const FpMat& A);

size_t mat_rank(const FpCtx& F, FpMat A);

}  // namespace charp

#endif
