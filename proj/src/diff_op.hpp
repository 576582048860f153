#ifndef CHARP_DIFF_OP_HPP
#define CHARP_DIFF_OP_HPP

#include <optional>
#include <vector>

#include "poly_mat.hpp"

namespace charp {

enum class OpBasis { Derivation, Euler };  // X = d/dx  or  X = theta = x*d/dx
enum class OpForm { Right, Left };         // sum l_j(x) X^j  or  sum X^j l*_j(x)

// Linear differential operator with matrix polynomial coefficients
// (n = 1 is the scalar case). coeffs[j] multiplies X^j.
struct DiffOp {
    OpBasis basis = OpBasis::Derivation;
    OpForm form = OpForm::Right;
    size_t n = 1;
    std::vector<PolyMat> coeffs;

    size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    i64 max_coeff_degree() const {
        i64 d = -1;
        for (auto& m : coeffs) d = std::max(d, m.max_degree());
        return d;
    }
    bool is_zero() const {
        for (auto& m : coeffs)
            if (!m.is_zero()) return false;
        return true;
    }
    void trim() {
        while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
    }

    const PolyMat& leading() const { return coeffs.back(); }
    bool operator==(const DiffOp& o) const {
        return basis == o.basis && form == o.form && n == o.n && coeffs == o.coeffs;
    }
};

DiffOp scalar_op(OpBasis basis, std::vector<FpPoly> cs, OpForm form = OpForm::Right);

// Operator of the shape sum_j (g_j / b^{h-j}) D^j with b(0) != 0.
// dbound is the degree parameter D >= deg b with deg g_j <= D*(h-j); it is the
// operator-level coefficient bound, which can exceed deg b.
struct ScaledOp {
    FpPoly b;
    u32 dbound = 0;
    size_t h = 0;
    size_t n = 1;
    std::vector<PolyMat> g;  // g[j] for j = 0..h

    void check_degrees() const;
};

// Banded matrix of the map S |-> sum_t ghat_t * S^(t) on truncated series,
// with ghat_t polynomial. Column profiles are periodic in the index mod p.
struct BandedOperator {
    size_t lo = 0;     // contributions land at out[m - lo .. m + width - 1 - lo]
    size_t width = 0;
    size_t ncols = 0;  // min(needed columns, p)
    u32 p = 0;
    std::vector<u32> prof;  // ncols x width

    const u32* column(size_t m) const { return prof.data() + (m < ncols ? m : m % p) * width; }
};

BandedOperator build_banded(const FpCtx& F, const std::vector<FpPoly>& ghat, size_t max_col);
// out (length out_len, zero-initialized by caller as u64) += band applied to S
void banded_accumulate(const FpCtx& F, const BandedOperator& B, const std::vector<u32>& S,
                       std::vector<u64>& out, bool lazy);
std::vector<u32> banded_apply(const FpCtx& F, const BandedOperator& B, const std::vector<u32>& S, size_t out_len);

// --- operator algebra ---

// product by repeated commutation (oracle); same basis, Right form
DiffOp op_mul_naive(const FpCtx& F, const DiffOp& L1, const DiffOp& L2);

// evaluation/interpolation product of two ScaledOps with equal (b, h); 2h <= p-1
ScaledOp scaled_op_mul(const FpCtx& F, const ScaledOp& gamma, const ScaledOp& mu);

// x^r * L rewritten in the Euler basis; input Right form in d/dx
DiffOp to_euler(const FpCtx& F, const DiffOp& L);

// toggle Right <-> Left form of an Euler-basis operator
DiffOp left_right_convert(const FpCtx& F, const DiffOp& L);

// L applied to a polynomial matrix, termwise
PolyMat apply_poly_naive(const FpCtx& F, const DiffOp& L, const PolyMat& E);

// baby-step/giant-step application (Euler basis, Right form); falls back to
// the naive path outside its regime, never fails
PolyMat apply_poly_bsgs(const FpCtx& F, const DiffOp& L, const PolyMat& E);

// L (in d/dx, polynomial coefficients) applied to B/b^kappa; result as
// B*/b^{kappa+rho}
RatMat apply_rat(const FpCtx& F, const DiffOp& L, const RatMat& A);

// companion matrix of a scalar operator, as B1/l_r
RatMat companion(const FpCtx& F, const DiffOp& L);

struct Regularized {
    DiffOp op;
    u32 shift = 0;  // x -> x + shift was applied
};

// Hypothesis H test and shift so that the leading coefficient is a unit at 0.
Regularized regularize(const FpCtx& F, const DiffOp& L);

// shared helpers
FpPoly falling_factorial_poly(const FpCtx& F, u32 j);  // y(y-1)...(y-j+1)
u32 falling_factorial_at(const FpCtx& F, u64 m, u32 j);

}  // namespace charp

#endif
