#ifndef CHARP_PCURV_HPP
#define CHARP_PCURV_HPP

#include <optional>

#include "polsol.hpp"

namespace charp {

// p-curvature in the normal form B_p / l_r^p.
struct Curvature {
    RatMat Ap;
    std::optional<FpPoly> pth_root;  // order 1: B_p = pth_root(x^p)
};

// A_k = B_k / l_r^k by the integral matrix recurrence
// B_{k+1} = l_r B_k' + (B_1 - k l_r' I) B_k. k = p gives the p-curvature.
RatMat katz_recurrence(const FpCtx& F, const DiffOp& L, u64 k);

// Same output as katz_recurrence(L, p): propagates the coefficient column of
// D^m mod L, a factor r cheaper; independent cross-check.
RatMat katz_vector(const FpCtx& F, const DiffOp& L);

// Closed form for L = a D - b of order 1, satisfying a(0) != 0:
// curvature u^{(p-1)} + u^p with u = b/a, computed in O(d M(d) log p).
Curvature pcurvature_order1(const FpCtx& F, const DiffOp& L);

// trace of the p-curvature of v D^2 + w D + u, as a 1x1 B/v^p
RatMat trace_pcurvature(const FpCtx& F, const DiffOp& L);

// nilpotence of A_p without computing it: zero trace + existence of a
// nonzero rational solution
bool nilpotence_test(const FpCtx& F, const DiffOp& L);

// coefficient polynomials of the linear system characterizing the eigenring
// of an order-2 operator
struct EigenringSystem {
    FpPoly A, B, R, S, T;
};
EigenringSystem eigenring_system(const FpCtx& F, const DiffOp& L);

// order-3 auxiliary operator v^3 D^3 + A D + B whose solutions carry the
// lower-left entry of eigenring members
DiffOp eigenring_entry_operator(const FpCtx& F, const DiffOp& L);

enum class Order2Kind { Exact, UpToConstant, TwoCandidates };

// Structural description of A_p for order 2: exact matrix; base + c*pattern
// for an unknown constant c in F_p[x^p]; or a two-candidate list.
struct Order2Report {
    u32 gamma = 0;  // dim of the eigenring over the constants, 2 or 4
    u32 beta = 0;   // dim of rational solutions of L
    RatMat trace;   // 1x1
    Order2Kind kind = Order2Kind::Exact;
    RatMat exact;        // kind == Exact
    FpPoly u0;           // minimal solution used by the patterns
    RatMat base;         // kind == UpToConstant: A_p = base + c * pattern
    RatMat pattern;
    bool undetermined = false;  // gamma=2, tau != 0, beta=0: c not pinned
    RatMat cand1, cand2;        // kind == TwoCandidates
};

Order2Report pcurvature_order2(const FpCtx& F, const DiffOp& L);

struct LambdaPower {
    u64 k = 0;
    ScaledOp op;  // (D + A)^k with b = l_r, h = k
};

// Lambda^k by divide-and-conquer squaring of ScaledOps; k <= p-1
LambdaPower lambda_power(const FpCtx& F, const DiffOp& L, u64 k);

// A_p = Lambda^{p-1}(A) via giant Lambda^k jumps applied to the running
// coefficient column, finishing with single steps.
Curvature pcurvature_general(const FpCtx& F, const DiffOp& L);

}  // namespace charp

#endif
