#include "fp_mat.hpp"

#include <cassert>

namespace charp {

FpMat mat_mul(const FpCtx& F, const FpMat& A, const FpMat& B) {
    if (A.cols != B.rows) throw precondition_error("mat_mul: dimension mismatch");
    FpMat C(A.rows, B.cols);
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t k = 0; k < A.cols; ++k) {
            u64 v = A.at(i, k);
            if (!v) continue;
            for (size_t j = 0; j < B.cols; ++j)
                C.at(i, j) = F.reduce(C.at(i, j) + v * B.at(k, j));
        }
    return C;
}

FpMat mat_add(const FpCtx& F, const FpMat& A, const FpMat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    FpMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
    return C;
}

FpMat mat_scale(const FpCtx& F, const FpMat& A, u32 s) {
    FpMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.mul(A.a[i], s);
    return C;
}

namespace {

// reduced row echelon form in place; returns pivot column list
std::vector<size_t> rref(const FpCtx& F, FpMat& M) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < M.cols && row < M.rows; ++col) {
        size_t sel = row;
        while (sel < M.rows && M.at(sel, col) == 0) ++sel;
        if (sel == M.rows) continue;
        if (sel != row)
            for (size_t j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(row, j));
        u32 iv = F.inv(M.at(row, col));
        for (size_t j = col; j < M.cols; ++j) M.at(row, j) = F.mul(M.at(row, j), iv);
        for (size_t i = 0; i < M.rows; ++i) {
            if (i == row) continue;
            u32 f = M.at(i, col);
            if (!f) continue;
            for (size_t j = col; j < M.cols; ++j) M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<FpMat> nullspace(const FpCtx& F, const FpMat& A) {
    FpMat M = A;
    auto pivots = rref(F, M);
    std::vector<bool> is_pivot(A.cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<FpMat> basis;
    for (size_t free_col = 0; free_col < A.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        FpMat v(A.cols, 1);
        v.at(free_col, 0) = 1;
        for (size_t r = 0; r < pivots.size(); ++r) {
            // pivot row r has leading 1 at pivots[r]
            v.at(pivots[r], 0) = F.neg(M.at(r, free_col));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

size_t mat_rank(const FpCtx& F, FpMat A) { return rref(F, A).size(); }

}  // namespace charp
