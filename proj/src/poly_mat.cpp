#include "poly_mat.hpp"

#include <cassert>
#include <cmath>

namespace charp {

PolyMat poly_mat_mul(const FpCtx& F, const PolyMat& A, const PolyMat& B) {
    if (A.cols != B.rows) throw precondition_error("poly_mat_mul: dimension mismatch");
    PolyMat C(A.rows, B.cols);
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t k = 0; k < A.cols; ++k) {
            const FpPoly& v = A.at(i, k);
            if (v.is_zero()) continue;
            for (size_t j = 0; j < B.cols; ++j) {
                if (B.at(k, j).is_zero()) continue;
                C.at(i, j) = poly_add(F, C.at(i, j), poly_mul(F, v, B.at(k, j)));
            }
        }
    return C;
}

PolyMat poly_mat_add(const FpCtx& F, const PolyMat& A, const PolyMat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    PolyMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = poly_add(F, A.a[i], B.a[i]);
    return C;
}

PolyMat poly_mat_sub(const FpCtx& F, const PolyMat& A, const PolyMat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    PolyMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = poly_sub(F, A.a[i], B.a[i]);
    return C;
}

PolyMat poly_mat_scale(const FpCtx& F, const PolyMat& A, const FpPoly& s) {
    PolyMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = poly_mul(F, A.a[i], s);
    return C;
}

PolyMat poly_mat_derivative(const FpCtx& F, const PolyMat& A) {
    PolyMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = poly_derivative(F, A.a[i]);
    return C;
}

FpMat poly_mat_eval(const FpCtx& F, const PolyMat& A, u32 x) {
    FpMat C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = poly_eval(F, A.a[i], x);
    return C;
}

FpPoly poly_mat_det(const FpCtx& F, const PolyMat& A) {
    if (A.rows != A.cols) throw precondition_error("determinant of non-square matrix");
    size_t n = A.rows;
    if (n == 0) return poly_one();
    // Berkowitz: iterate over leading principal minors; c holds the char poly
    // coefficients of the current principal submatrix, highest first.
    std::vector<FpPoly> c{poly_from_ints(F, {-1}), A.at(0, 0)};
    for (size_t k = 1; k < n; ++k) {
        // R = row (a_{k,0..k-1}), S = col (a_{0..k-1,k}), M = leading k x k block
        std::vector<FpPoly> q(k + 2);
        q[0] = poly_from_ints(F, {-1});
        q[1] = A.at(k, k);
        std::vector<FpPoly> w(k);
        for (size_t i = 0; i < k; ++i) w[i] = A.at(i, k);
        for (size_t t = 2; t <= k + 1; ++t) {
            FpPoly dot;
            for (size_t i = 0; i < k; ++i) dot = poly_add(F, dot, poly_mul(F, A.at(k, i), w[i]));
            q[t] = dot;
            if (t <= k) {
                std::vector<FpPoly> w2(k);
                for (size_t i = 0; i < k; ++i) {
                    FpPoly acc;
                    for (size_t j = 0; j < k; ++j) acc = poly_add(F, acc, poly_mul(F, A.at(i, j), w[j]));
                    w2[i] = std::move(acc);
                }
                w = std::move(w2);
            }
        }
        // c_new = conv(q, c)
        std::vector<FpPoly> c2(k + 2);
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i].is_zero()) continue;
            for (size_t j = 0; j < c.size(); ++j) {
                if (i + j > k + 1) break;
                c2[i + j] = poly_add(F, c2[i + j], poly_mul(F, q[i], c[j]));
            }
        }
        c = std::move(c2);
    }
    // stored polynomial is (-1)^n det(lambda I - A), highest coefficient first,
    // so the constant slot c[n] is exactly det(A)
    return c[n];
}

size_t poly_mat_rank(const FpCtx& F, PolyMat M) {
    size_t rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < M.cols && row < M.rows; ++col) {
        size_t sel = row;
        while (sel < M.rows && M.at(sel, col).is_zero()) ++sel;
        if (sel == M.rows) continue;
        if (sel != row)
            for (size_t j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(row, j));
        const FpPoly piv = M.at(row, col);
        for (size_t i = row + 1; i < M.rows; ++i) {
            if (M.at(i, col).is_zero()) continue;
            const FpPoly f = M.at(i, col);
            for (size_t j = col; j < M.cols; ++j) {
                // fraction-free row op: row_i <- piv*row_i - f*row_row
                M.at(i, j) = poly_sub(F, poly_mul(F, piv, M.at(i, j)), poly_mul(F, f, M.at(row, j)));
            }
        }
        ++row;
        ++rank;
    }
    return rank;
}

bool RatMat::same_value(const FpCtx& F, const RatMat& o) const {
    if (num.rows != o.num.rows || num.cols != o.num.cols) return false;
    // cross-multiply: num * o.den^o.exp == o.num * den^exp
    FpPoly d1 = poly_pow(F, o.den, o.exp);
    FpPoly d2 = poly_pow(F, den, exp);
    for (size_t i = 0; i < num.a.size(); ++i)
        if (poly_mul(F, num.a[i], d1) != poly_mul(F, o.num.a[i], d2)) return false;
    return true;
}

size_t wronskian_rank(const FpCtx& F, const std::vector<FpPoly>& us, std::vector<size_t>* keep) {
    std::vector<size_t> picked;
    std::vector<std::vector<FpPoly>> cols;  // derivative columns of the picked family
    for (size_t idx = 0; idx < us.size(); ++idx) {
        if (us[idx].is_zero()) continue;
        size_t m = picked.size() + 1;
        // candidate Wronskian of picked + us[idx]
        PolyMat W(m, m);
        for (size_t j = 0; j + 1 < m; ++j)
            for (size_t i = 0; i < m; ++i) W.at(i, j) = i < cols[j].size() ? cols[j][i] : FpPoly();
        FpPoly der = us[idx];
        for (size_t i = 0; i < m; ++i) {
            W.at(i, m - 1) = der;
            der = poly_derivative(F, der);
        }
        if (!poly_mat_det(F, W).is_zero()) {
            picked.push_back(idx);
            std::vector<FpPoly> col;
            FpPoly d = us[idx];
            for (size_t i = 0; i < us.size() + 1; ++i) {
                col.push_back(d);
                d = poly_derivative(F, d);
            }
            cols.push_back(std::move(col));
        }
    }
    if (keep) *keep = picked;
    return picked.size();
}

FpMat matrix_factorial_naive(const FpCtx& F, const PolyMat& M, u64 a, u64 k) {
    if (M.rows != M.cols) throw precondition_error("matrix_factorial: non-square matrix");
    if (a > k) throw precondition_error("matrix_factorial: a > k");
    FpMat acc = FpMat::identity(M.rows);
    for (u64 j = a; j < k; ++j) acc = mat_mul(F, poly_mat_eval(F, M, (u32)(j % F.p)), acc);
    return acc;
}

namespace {

// ordered product tree: prod(t0, t1) = M(n + t1 - 1) * ... * M(n + t0) as a
// polynomial matrix in n
PolyMat shifted_product(const FpCtx& F, const PolyMat& M, u64 t0, u64 t1) {
    if (t1 - t0 == 1) {
        // M(n + t0): shift the variable
        PolyMat R(M.rows, M.cols);
        for (size_t i = 0; i < M.a.size(); ++i) R.a[i] = taylor_shift(F, M.a[i], (u32)(t0 % F.p));
        return R;
    }
    u64 mid = t0 + (t1 - t0) / 2;
    PolyMat lo = shifted_product(F, M, t0, mid);
    PolyMat hi = shifted_product(F, M, mid, t1);
    return poly_mat_mul(F, hi, lo);
}

}  // namespace

FpMat matrix_factorial(const FpCtx& F, const PolyMat& M, u64 a, u64 k) {
    if (M.rows != M.cols) throw precondition_error("matrix_factorial: non-square matrix");
    if (a > k) throw precondition_error("matrix_factorial: a > k");
    u64 len = k - a;
    if (len >= F.p) throw precondition_error("matrix_factorial: k - a must be < p");
    if (len < 32) return matrix_factorial_naive(F, M, a, k);

    u64 s = (u64)std::sqrt((double)len);
    while (s * s > len) --s;
    // P(n) = M(n+s-1) ... M(n), degree <= s * deg M
    PolyMat P = shifted_product(F, M, 0, s);
    u64 m = len / s;
    std::vector<u32> points(m);
    for (u64 i = 0; i < m; ++i) points[i] = (u32)((a + i * s) % F.p);

    // evaluate P entrywise at the giant-step points, sharing the point tree
    std::vector<const FpPoly*> entries(P.a.size());
    for (size_t e = 0; e < P.a.size(); ++e) entries[e] = &P.a[e];
    auto evals = multipoint_eval_many(F, entries, points);
    std::vector<FpMat> vals(m, FpMat(M.rows, M.cols));
    for (size_t e = 0; e < P.a.size(); ++e)
        for (u64 i = 0; i < m; ++i) vals[i].a[e] = evals[e][i];
    FpMat acc = FpMat::identity(M.rows);
    for (u64 i = 0; i < m; ++i) acc = mat_mul(F, vals[i], acc);
    // leftover factors
    for (u64 j = a + m * s; j < k; ++j) acc = mat_mul(F, poly_mat_eval(F, M, (u32)(j % F.p)), acc);
    return acc;
}

}  // namespace charp
