#ifndef CHARP_POLSOL_HPP
#define CHARP_POLSOL_HPP

#include "diff_op.hpp"

namespace charp {

// Coefficient recurrence of L(u) = 0: the x^n-coefficient of L(u) is
// C_n = sum_i c_i(n) u_{n-d+i}, i = 0..d+r, with d the padded degree bound.
struct RecurrenceData {
    size_t d = 0;  // padded: max(coefficient degree, r)
    size_t r = 0;
    u32 lambda = 0;  // l_r(0)
    std::vector<FpPoly> c;  // polynomials in n, degree <= r
};

struct StepMatrix {
    PolyMat Ahat;   // (d+r) x (d+r), polynomial in n: denom(n) * A(n)
    FpPoly denom;   // c_{d+r}(n-r)
};

struct SolutionSpace {
    size_t dimension = 0;
    std::vector<FpPoly> basis;
    u64 degree_bound = 0;  // pd - 1
};

RecurrenceData recurrence_data(const FpCtx& F, const DiffOp& L);
StepMatrix step_matrix(const FpCtx& F, const RecurrenceData& rec);

// Residual equations on the non-eliminable unknowns [u_n : n in A],
// a d(r+1) x dr matrix over F_p.
FpMat residual_system(const FpCtx& F, const DiffOp& L);

// dim of the space of polynomial solutions of degree <= pd-1
size_t dimension_G(const FpCtx& F, const DiffOp& L);

// full basis of that space, every element verified exactly
SolutionSpace basis_G(const FpCtx& F, const DiffOp& L);

// basis over the constants F_p(x^p), by greedy Wronskian filtering
SolutionSpace rational_solution_space(const FpCtx& F, const DiffOp& L);

// minimal-degree basis element with its F_p[x^p] content removed
FpPoly min_degree_solution(const FpCtx& F, const SolutionSpace& space);

// reference implementation: dense band system on u_0..u_{pd-1} built from the
// monomial images L(x^m); used for cross-checking
size_t dense_dimension(const FpCtx& F, const DiffOp& L);
std::vector<FpPoly> dense_basis(const FpCtx& F, const DiffOp& L);

}  // namespace charp

#endif
