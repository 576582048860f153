#include "polsol.hpp"

#include <algorithm>
#include <cassert>

namespace charp {

namespace {

void check_solvable_shape(const FpCtx& F, const DiffOp& L) {
    if (L.n != 1) throw precondition_error("polynomial solutions: scalar operator required");
    if (L.is_zero()) throw precondition_error("polynomial solutions: zero operator");
    size_t r = L.order();
    if (r > F.p) throw precondition_error("the assumption r <= p is necessary");
    if (r >= 1 && L.coeffs[r].at(0, 0).coeff(0) == 0)
        throw precondition_error("polynomial solutions: operator must be regularized (l_r(0) != 0)");
}

}  // namespace

RecurrenceData recurrence_data(const FpCtx& F, const DiffOp& L) {
    check_solvable_shape(F, L);
    size_t r = L.order();
    size_t dact = (size_t)std::max<i64>(0, L.max_coeff_degree());
    RecurrenceData rec;
    rec.r = r;
    rec.d = std::max(dact, r);
    rec.lambda = L.coeffs[r].at(0, 0).coeff(0);
    size_t d = rec.d;
    rec.c.assign(d + r + 1, FpPoly());
    // c_i(n) = sum_j l_j[d-i+j] * (n-d+i)(n-d+i-1)...(n-d+i-j+1)
    FpPoly ff = poly_one();
    for (size_t j = 0; j <= r; ++j) {
        const FpPoly& lj = L.coeffs[j].at(0, 0);
        for (size_t i = 0; i <= d + r; ++i) {
            if (d + j < i) continue;  // need d-i+j >= 0
            u32 co = lj.coeff(d - i + j);
            if (!co) continue;
            FpPoly ffs = taylor_shift(F, ff, F.from_int((i64)i - (i64)d));
            rec.c[i] = poly_add(F, rec.c[i], poly_scale(F, ffs, co));
        }
        if (j < r) ff = poly_mul(F, ff, FpPoly(std::vector<u32>{F.neg((u32)(j % F.p)), 1u}));
    }
    return rec;
}

StepMatrix step_matrix(const FpCtx& F, const RecurrenceData& rec) {
    size_t w = rec.d + rec.r;
    StepMatrix S;
    u32 shift = F.neg((u32)(rec.r % F.p));
    S.denom = taylor_shift(F, rec.c[w], shift);
    S.Ahat = PolyMat(w, w);
    for (size_t t = 0; t + 1 < w; ++t) S.Ahat.at(t, t + 1) = S.denom;
    for (size_t i = 0; i < w; ++i)
        S.Ahat.at(w - 1, i) = poly_neg(F, taylor_shift(F, rec.c[i], shift));
    return S;
}

FpMat residual_system(const FpCtx& F, const DiffOp& L) {
    RecurrenceData rec = recurrence_data(F, L);
    const size_t d = rec.d, r = rec.r;
    const u64 p = F.p;
    StepMatrix S = step_matrix(F, rec);

    // B = Ahat(p-1)...Ahat(r) normalized by the scalar factorial of denom
    FpMat Bmat = matrix_factorial(F, S.Ahat, r, p);
    PolyMat denom1(1, 1);
    denom1.at(0, 0) = S.denom;
    u32 sden = matrix_factorial(F, denom1, r, p).at(0, 0);
    if (sden == 0) throw charp_error("residual_system: scalar factorial vanished");
    FpMat B = mat_scale(F, Bmat, F.inv(sden));

    // C_i recursion
    size_t w = d + r;
    std::vector<FpMat> C(d + 1);
    C[0] = FpMat(w, d * r);
    for (size_t i = 1; i <= d; ++i) {
        FpMat T(w, d * r);
        // top d rows: last d rows of C_{i-1}
        for (size_t t = 0; t < d; ++t)
            for (size_t cconst = 0; cconst < d * r; ++cconst) T.at(t, cconst) = C[i - 1].at(r + t, cconst);
        // bottom r rows: selector of block i-1
        for (size_t t = 0; t < r; ++t) T.at(d + t, (i - 1) * r + t) = 1;
        C[i] = mat_mul(F, B, T);
    }

    // D: stacked D_1..D_d, each (d+2r) x dr; D_d has zero selector rows
    size_t blk = d + 2 * r;
    FpMat D(d * blk, d * r);
    for (size_t j = 1; j <= d; ++j) {
        size_t row0 = (j - 1) * blk;
        for (size_t t = 0; t < w; ++t)
            for (size_t cc = 0; cc < d * r; ++cc) D.at(row0 + t, cc) = C[j].at(t, cc);
        if (j < d)
            for (size_t t = 0; t < r; ++t) D.at(row0 + w + t, j * r + t) = 1;
    }

    // D': residual equations C_{n-r} = 0 for n in B1 (j=1..d-1) then B2
    size_t nb = d * (r + 1);
    FpMat Dp(nb, d * blk);
    // per-point evaluation of the c_i at n - r
    auto eval_c = [&](u64 n, size_t i) { return poly_eval(F, rec.c[i], (u32)((n + p - (r % p)) % p)); };
    size_t row = 0;
    for (size_t j = 1; j < d; ++j) {
        for (size_t t = 0; t < r; ++t) {
            u64 n = (u64)j * p + t;
            size_t col0 = (j - 1) * blk;
            for (size_t i = 0; i <= d + r; ++i) Dp.at(row, col0 + t + i) = eval_c(n, i);
            ++row;
        }
    }
    for (u64 n = p * d; n <= (p + 1) * d + r - 1; ++n) {
        size_t col0 = (d - 1) * blk;
        u64 t = n - p * d;
        for (size_t i = 0; i <= d + r; ++i) {
            u64 pos = t + i;
            if (pos < blk) Dp.at(row, col0 + pos) = eval_c(n, i);
        }
        ++row;
    }
    assert(row == nb);

    return mat_mul(F, Dp, D);
}

size_t dimension_G(const FpCtx& F, const DiffOp& L) {
    check_solvable_shape(F, L);
    if (L.order() == 0) return 0;  // c*u = 0 has only the zero solution
    FpMat E = residual_system(F, L);
    return E.cols - mat_rank(F, E);
}

SolutionSpace basis_G(const FpCtx& F, const DiffOp& L) {
    check_solvable_shape(F, L);
    SolutionSpace out;
    if (L.order() == 0) return out;
    RecurrenceData rec = recurrence_data(F, L);
    const size_t d = rec.d, r = rec.r;
    const u64 p = F.p;
    out.degree_bound = p * d - 1;

    FpMat E = residual_system(F, L);
    auto kernel = nullspace(F, E);
    out.dimension = kernel.size();
    if (kernel.empty()) return out;

    // tables c_i((n - r) mod p) for the sweep
    std::vector<u32> residues(p);
    for (u64 t = 0; t < p; ++t) residues[t] = (u32)t;
    std::vector<std::vector<u32>> ctab(d + r + 1);
    for (size_t i = 0; i <= d + r; ++i) ctab[i] = multipoint_eval(F, rec.c[i], residues);
    auto cval = [&](u64 n, size_t i) { return ctab[i][(n + p - (r % p)) % p]; };

    for (auto& kv : kernel) {
        std::vector<u32> u(p * d, 0);
        for (size_t i = 0; i < d; ++i)
            for (size_t t = 0; t < r; ++t) u[i * p + t] = kv.at(i * r + t, 0);
        for (u64 n = r; n < p * d; ++n) {
            if (n % p < r) continue;  // index in A, already known
            // c_{d+r}(n-r) u_n = -sum_{i<d+r} c_i(n-r) u_{n-r-d+i}
            u64 acc = 0;
            for (size_t i = 0; i < d + r; ++i) {
                i64 idx = (i64)n - (i64)r - (i64)d + (i64)i;
                if (idx < 0) continue;
                u32 ci = cval(n, i);
                if (ci) acc = F.reduce(acc + (u64)ci * u[idx]);
            }
            u32 den = cval(n, d + r);
            assert(den != 0);
            u[n] = F.mul(F.neg((u32)acc), F.inv(den));
        }
        FpPoly up{std::move(u)};
        // exact verification
        PolyMat E1(1, 1);
        E1.at(0, 0) = up;
        if (!apply_poly_naive(F, L, E1).is_zero())
            throw charp_error("basis_G: reconstructed candidate fails L(u) = 0 (internal error)");
        out.basis.push_back(std::move(up));
    }
    return out;
}

SolutionSpace rational_solution_space(const FpCtx& F, const DiffOp& L) {
    SolutionSpace G = basis_G(F, L);
    SolutionSpace out;
    out.degree_bound = G.degree_bound;
    if (G.basis.empty()) return out;
    std::stable_sort(G.basis.begin(), G.basis.end(),
                     [](const FpPoly& a, const FpPoly& b) { return a.degree() < b.degree(); });
    std::vector<size_t> keep;
    wronskian_rank(F, G.basis, &keep);
    for (size_t idx : keep) out.basis.push_back(G.basis[idx]);
    out.dimension = out.basis.size();
    if (out.dimension > L.order()) throw charp_error("rational_solution_space: dimension exceeds the order");
    return out;
}

FpPoly min_degree_solution(const FpCtx& F, const SolutionSpace& space) {
    if (space.basis.empty()) throw precondition_error("min_degree_solution: empty solution space");
    const FpPoly* best = &space.basis[0];
    for (auto& u : space.basis)
        if (u.degree() < best->degree()) best = &u;
    const FpPoly& u0 = *best;
    // p-sections u0 = sum_j s_j(x^p) x^j
    std::vector<FpPoly> secs(F.p);
    for (size_t j = 0; j < F.p; ++j) {
        std::vector<u32> cs;
        for (size_t m = 0; j + m * F.p < u0.c.size(); ++m) cs.push_back(u0.c[j + m * F.p]);
        secs[j] = FpPoly(std::move(cs));
    }
    FpPoly g;
    bool have = false;
    for (auto& s : secs) {
        if (s.is_zero()) continue;
        g = have ? poly_gcd(F, g, s) : poly_monic(F, s);
        have = true;
    }
    if (!have || g.degree() < 1) return u0;
    std::vector<u32> res;
    for (size_t j = 0; j < F.p; ++j) {
        if (secs[j].is_zero()) continue;
        FpPoly q = poly_divexact(F, secs[j], g);
        for (size_t m = 0; m < q.c.size(); ++m) {
            size_t pos = j + m * F.p;
            if (res.size() <= pos) res.resize(pos + 1, 0);
            res[pos] = q.c[m];
        }
    }
    return FpPoly(std::move(res));
}

namespace {

FpMat dense_system(const FpCtx& F, const DiffOp& L) {
    size_t r = L.order();
    size_t dact = (size_t)std::max<i64>(0, L.max_coeff_degree());
    size_t d = std::max(dact, r);
    u64 p = F.p;
    size_t cols = (size_t)(p * d);
    size_t rows = cols + d + r + 1;
    FpMat M(rows, cols);
    for (size_t m = 0; m < cols; ++m) {
        PolyMat xm(1, 1);
        std::vector<u32> mono(m + 1, 0);
        mono[m] = 1;
        xm.at(0, 0) = FpPoly(std::move(mono));
        PolyMat im = apply_poly_naive(F, L, xm);
        const FpPoly& f = im.at(0, 0);
        for (size_t t = 0; t < f.c.size(); ++t)
            if (f.c[t]) M.at(t, m) = f.c[t];
    }
    return M;
}

}  // namespace

size_t dense_dimension(const FpCtx& F, const DiffOp& L) {
    check_solvable_shape(F, L);
    if (L.order() == 0) return 0;
    FpMat M = dense_system(F, L);
    return M.cols - mat_rank(F, M);
}

std::vector<FpPoly> dense_basis(const FpCtx& F, const DiffOp& L) {
    std::vector<FpPoly> out;
    if (L.order() == 0) return out;
    FpMat M = dense_system(F, L);
    for (auto& v : nullspace(F, M)) {
        std::vector<u32> cs(v.rows);
        for (size_t i = 0; i < v.rows; ++i) cs[i] = v.at(i, 0);
        out.push_back(FpPoly(std::move(cs)));
    }
    return out;
}

}  // namespace charp
