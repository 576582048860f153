#ifndef CHARP_FP_POLY_HPP
#define CHARP_FP_POLY_HPP

#include <utility>
#include <vector>

#include "fp.hpp"

namespace charp {

// Dense polynomial over F_p, ascending degree, no trailing zeros.
// The zero polynomial is the empty sequence (degree -1 stands for -infinity).
struct FpPoly {
    std::vector<u32> c;

    FpPoly() = default;
    explicit FpPoly(std::vector<u32> coeffs) : c(std::move(coeffs)) { trim(); }

    i64 degree() const { return (i64)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    u32 coeff(size_t i) const { return i < c.size() ? c[i] : 0; }
    u32 lc() const { return c.empty() ? 0 : c.back(); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool operator==(const FpPoly& o) const { return c == o.c; }
    bool operator!=(const FpPoly& o) const { return !(*this == o); }
};

// Truncated power series: exactly `precision` stored coefficients.
struct FpSeries {
    std::vector<u32> coeffs;
    size_t precision = 0;

    FpSeries() = default;
    FpSeries(std::vector<u32> cs, size_t prec) : coeffs(std::move(cs)), precision(prec) {
        coeffs.resize(precision, 0);
    }
};

FpPoly poly_from_ints(const FpCtx& F, std::initializer_list<i64> cs);
FpPoly poly_one();
FpPoly poly_x();
FpPoly constant_poly(u32 v);

FpPoly poly_add(const FpCtx& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_sub(const FpCtx& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_neg(const FpCtx& F, const FpPoly& f);
FpPoly poly_scale(const FpCtx& F, const FpPoly& f, u32 s);
FpPoly poly_mul(const FpCtx& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_mul_xk(const FpPoly& f, size_t k);
// quotient by x^k; asserts the low coefficients are zero
FpPoly poly_div_xk(const FpPoly& f, size_t k);
FpPoly poly_pow(const FpCtx& F, const FpPoly& f, u64 e);

u32 poly_eval(const FpCtx& F, const FpPoly& f, u32 x);
FpPoly poly_derivative(const FpCtx& F, const FpPoly& f);
// theta = x * d/dx
FpPoly poly_theta(const FpCtx& F, const FpPoly& f);

std::pair<FpPoly, FpPoly> poly_divrem(const FpCtx& F, const FpPoly& f, const FpPoly& g);
// exact division; throws if the remainder is nonzero
FpPoly poly_divexact(const FpCtx& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_gcd(const FpCtx& F, const FpPoly& f, const FpPoly& g);
FpPoly poly_monic(const FpCtx& F, const FpPoly& f);

FpPoly taylor_shift(const FpCtx& F, const FpPoly& f, u32 x0);

std::vector<u32> multipoint_eval(const FpCtx& F, const FpPoly& f, const std::vector<u32>& points);
// evaluate several polynomials at the same points, sharing the subproduct tree
std::vector<std::vector<u32>> multipoint_eval_many(const FpCtx& F, const std::vector<const FpPoly*>& fs,
                                                   const std::vector<u32>& points);
FpPoly interpolate(const FpCtx& F, const std::vector<std::pair<u32, u32>>& points);

// series helpers on raw coefficient vectors (length = precision)
std::vector<u32> series_mul(const FpCtx& F, const std::vector<u32>& a, const std::vector<u32>& b, size_t prec);
std::vector<u32> series_inv_raw(const FpCtx& F, const std::vector<u32>& f, size_t prec);
FpSeries series_inv(const FpCtx& F, const FpSeries& f);
// b/a as a power series to `prec` terms; a(0) != 0
std::vector<u32> series_div(const FpCtx& F, const FpPoly& b, const FpPoly& a, size_t prec);
std::vector<u32> series_pow_poly(const FpCtx& F, const FpPoly& f, u64 e, size_t prec);

// Coefficients u_N..u_{N+window-1} of the series u = b/a for each target N,
// jumping to index N with binary powering modulo the reversal of a.
std::vector<std::vector<u32>> coeff_jump(const FpCtx& F, const FpPoly& a, const FpPoly& b,
                                         const std::vector<u64>& targets, size_t window);

FpPoly pth_root_poly(const FpCtx& F, const FpPoly& f);
// f(x^p) from f(x)
FpPoly poly_expand_pth(const FpCtx& F, const FpPoly& f);

// polynomial square root; returns false if f is not a square
bool poly_sqrt(const FpCtx& F, const FpPoly& f, FpPoly& out);

std::string poly_to_string(const FpCtx& F, const FpPoly& f, const char* var = "x");

}  // namespace charp

#endif
