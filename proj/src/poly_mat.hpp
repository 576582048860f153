#ifndef CHARP_POLY_MAT_HPP
#define CHARP_POLY_MAT_HPP

#include <vector>

#include "fp_mat.hpp"
#include "fp_poly.hpp"

namespace charp {

// Dense matrix over F_p[x], row major.
struct PolyMat {
    size_t rows = 0, cols = 0;
    std::vector<FpPoly> a;

    PolyMat() = default;
    PolyMat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

    FpPoly& at(size_t i, size_t j) { return a[i * cols + j]; }
    const FpPoly& at(size_t i, size_t j) const { return a[i * cols + j]; }

    static PolyMat identity(size_t n) {
        PolyMat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = poly_one();
        return m;
    }
    static PolyMat from_scalar(const FpMat& s) {
        PolyMat m(s.rows, s.cols);
        for (size_t i = 0; i < s.a.size(); ++i) m.a[i] = constant_poly(s.a[i]);
        return m;
    }

    bool is_zero() const {
        for (auto& f : a)
            if (!f.is_zero()) return false;
        return true;
    }
    i64 max_degree() const {
        i64 d = -1;
        for (auto& f : a) d = std::max(d, f.degree());
        return d;
    }

    bool operator==(const PolyMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

PolyMat poly_mat_mul(const FpCtx& F, const PolyMat& A, const PolyMat& B);
PolyMat poly_mat_add(const FpCtx& F, const PolyMat& A, const PolyMat& B);
PolyMat poly_mat_sub(const FpCtx& F, const PolyMat& A, const PolyMat& B);
PolyMat poly_mat_scale(const FpCtx& F, const PolyMat& A, const FpPoly& s);
PolyMat poly_mat_derivative(const FpCtx& F, const PolyMat& A);
FpMat poly_mat_eval(const FpCtx& F, const PolyMat& A, u32 x);

// Division-free determinant (Berkowitz).
FpPoly poly_mat_det(const FpCtx& F, const PolyMat& A);

// Rank over the fraction field F_p(x), by fraction-free elimination.
size_t poly_mat_rank(const FpCtx& F, PolyMat A);

// num / den^exp with den monic is the normal form used throughout; entries of
// num are polynomials. Equality is tested after aligning exponents.
struct RatMat {
    PolyMat num;
    FpPoly den;
    u64 exp = 0;

    bool same_value(const FpCtx& F, const RatMat& o) const;
    bool is_zero() const { return num.is_zero(); }
};

// Greedy size of a maximal subfamily independent over F_p(x^p), testing by the
// Wronskian determinant; `keep` (optional) receives the selected indices.
size_t wronskian_rank(const FpCtx& F, const std::vector<FpPoly>& us, std::vector<size_t>* keep = nullptr);

// M(k-1) * M(k-2) * ... * M(a) over F_p, where M is a square matrix with
// entries polynomial in the index. Requires a <= k and k - a < p.
FpMat matrix_factorial_naive(const FpCtx& F, const PolyMat& M, u64 a, u64 k);
FpMat matrix_factorial(const FpCtx& F, const PolyMat& M, u64 a, u64 k);

}  // namespace charp

#endif
