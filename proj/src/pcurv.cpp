#include "pcurv.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace charp {

namespace {

void require_scalar_regular(const FpCtx& F, const DiffOp& L, const char* who) {
    if (L.n != 1) throw precondition_error(std::string(who) + ": scalar operator required");
    if (L.is_zero() || L.order() < 1) throw precondition_error(std::string(who) + ": order >= 1 required");
}

FpPoly leading_coeff(const DiffOp& L) { return L.coeffs[L.order()].at(0, 0); }

}  // namespace

RatMat katz_recurrence(const FpCtx& F, const DiffOp& L, u64 k) {
    require_scalar_regular(F, L, "katz_recurrence");
    FpPoly lr = leading_coeff(L);
    if (lr.is_zero()) throw precondition_error("katz_recurrence: zero leading coefficient");
    size_t r = L.order();
    RatMat A = companion(F, L);  // B_1 / l_r
    if (k == 0) return RatMat{PolyMat::identity(r), lr, 0};
    PolyMat B1 = A.num;
    PolyMat Bk = B1;
    FpPoly dlr = poly_derivative(F, lr);
    for (u64 m = 1; m < k; ++m) {
        // B_{m+1} = l_r B_m' + (B_1 - m l_r' I) B_m
        PolyMat t = poly_mat_scale(F, poly_mat_derivative(F, Bk), lr);
        PolyMat head = B1;
        FpPoly mdl = poly_scale(F, dlr, (u32)(m % F.p));
        for (size_t i = 0; i < r; ++i) head.at(i, i) = poly_sub(F, head.at(i, i), mdl);
        Bk = poly_mat_add(F, t, poly_mat_mul(F, head, Bk));
    }
    return RatMat{std::move(Bk), lr, k};
}

namespace {

// column chain w_m = l_r^m * (coefficients of D^m mod L); one step is
// w_{m+1} = l_r w' + (B_1 - m l_r' I) w
struct KatzChain {
    const FpCtx& F;
    size_t r;
    i64 D;
    std::vector<u32> lr, dlr;
    std::vector<std::vector<u32>> B1;  // row-major entries
    std::vector<std::vector<u32>> w;
    u64 m = 0;
    bool lazy;
    std::vector<u64> acc;
    std::vector<u32> wd, mdl;
    std::vector<std::vector<u32>> next;

    KatzChain(const FpCtx& f, const DiffOp& L) : F(f) {
        r = L.order();
        D = std::max<i64>(L.max_coeff_degree(), 0);
        FpPoly l = leading_coeff(L);
        lr = l.c;
        dlr = poly_derivative(F, l).c;
        RatMat A = companion(F, L);
        B1.resize(r * r);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) B1[i * r + j] = A.num.at(i, j).c;
        w.assign(r, {});
        w[0] = {1};
        next.assign(r, {});
        u64 terms = (u64)(r + 2) * (u64)(D + 1) + 2;
        lazy = (u128)(F.p - 1) * (F.p - 1) * terms < ((u128)1 << 63);
    }

    void conv_acc(const std::vector<u32>& small, const std::vector<u32>& big) {
        if (small.empty() || big.empty()) return;
        if (lazy) {
            for (size_t i = 0; i < small.size(); ++i) {
                u64 c = small[i];
                if (!c) continue;
                u64* dst = acc.data() + i;
                for (size_t j = 0; j < big.size(); ++j) dst[j] += c * big[j];
            }
        } else {
            for (size_t i = 0; i < small.size(); ++i) {
                u64 c = small[i];
                if (!c) continue;
                u64* dst = acc.data() + i;
                for (size_t j = 0; j < big.size(); ++j) dst[j] = F.reduce(dst[j] + c * big[j]);
            }
        }
    }

    void step() {
        size_t maxlen = 0;
        for (auto& e : w) maxlen = std::max(maxlen, e.size());
        size_t newlen = maxlen + (size_t)D + 1;
        u32 mm = (u32)(m % F.p);
        mdl.resize(dlr.size());
        for (size_t i = 0; i < dlr.size(); ++i) mdl[i] = F.neg(F.mul(dlr[i], mm));
        for (size_t e = 0; e < r; ++e) {
            acc.assign(newlen, 0);
            // l_r * w_e'
            if (w[e].size() > 1) {
                wd.resize(w[e].size() - 1);
                for (size_t j = 1; j < w[e].size(); ++j) wd[j - 1] = F.reduce((u64)w[e][j] * (j % F.p));
                conv_acc(lr, wd);
            }
            for (size_t l = 0; l < r; ++l) conv_acc(B1[e * r + l], w[l]);
            conv_acc(mdl, w[e]);
            auto& ne = next[e];
            ne.assign(newlen, 0);
            size_t top = 0;
            for (size_t i = 0; i < newlen; ++i) {
                ne[i] = F.reduce(acc[i]);
                if (ne[i]) top = i + 1;
            }
            ne.resize(top);
        }
        for (size_t e = 0; e < r; ++e) w[e].swap(next[e]);
        ++m;
    }
};

PolyMat assemble_curvature_columns(const FpCtx& F, const FpPoly& lr, size_t r,
                                   const std::vector<std::vector<FpPoly>>& cols) {
    PolyMat Bp(r, r);
    FpPoly lpow = poly_one();
    for (size_t j = 0; j < r; ++j) {
        for (size_t i = 0; i < r; ++i) Bp.at(i, j) = poly_divexact(F, cols[j][i], lpow);
        if (j + 1 < r) lpow = poly_mul(F, lpow, lr);
    }
    return Bp;
}

}  // namespace

RatMat katz_vector(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "katz_vector");
    FpPoly lr = leading_coeff(L);
    if (lr.is_zero()) throw precondition_error("katz_vector: zero leading coefficient");
    size_t r = L.order();
    KatzChain chain(F, L);
    std::vector<std::vector<FpPoly>> cols(r);
    u64 last = (u64)F.p + r - 1;
    while (chain.m < last) {
        chain.step();
        if (chain.m >= F.p) {
            size_t j = (size_t)(chain.m - F.p);
            cols[j].resize(r);
            for (size_t i = 0; i < r; ++i) cols[j][i] = FpPoly(std::vector<u32>(chain.w[i]));
        }
    }
    return RatMat{assemble_curvature_columns(F, lr, r, cols), lr, F.p};
}

Curvature pcurvature_order1(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "pcurvature_order1");
    if (L.order() != 1) throw precondition_error("pcurvature_order1: order 1 required");
    FpPoly a = L.coeffs[1].at(0, 0);
    FpPoly b = poly_neg(F, L.coeffs[0].at(0, 0));
    if (a.is_zero() || a.c[0] == 0)
        throw precondition_error("pcurvature_order1: a(0) = 0, regularize first");
    size_t d = (size_t)std::max<i64>({a.degree(), b.degree(), 1});

    // s = (u^{(p-1)})^{1/p} with u = b/a; by Wilson only the coefficients
    // u_{(i+1)p-1} survive: s_i = -u_{(i+1)p-1} for i < d
    std::vector<u64> targets(d);
    for (size_t i = 0; i < d; ++i) targets[i] = (u64)(i + 1) * F.p - 1;
    auto jumps = coeff_jump(F, a, b, targets, 1);
    std::vector<u32> sc(d);
    for (size_t i = 0; i < d; ++i) sc[i] = F.neg(jumps[i][0]);

    // a*s is a polynomial of degree < d, recovered from the truncated product
    auto as = series_mul(F, a.c, sc, d);
    FpPoly asb = poly_add(F, FpPoly(std::move(as)), b);
    if (asb.degree() >= (i64)d + 1) throw charp_error("pcurvature_order1: degree bound violated");

    Curvature out;
    out.pth_root = asb;
    PolyMat num(1, 1);
    num.at(0, 0) = poly_expand_pth(F, asb);
    out.Ap = RatMat{std::move(num), a, F.p};
    return out;
}

RatMat trace_pcurvature(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "trace_pcurvature");
    if (L.order() != 2) throw precondition_error("trace_pcurvature: order 2 required");
    FpPoly v = L.coeffs[2].at(0, 0);
    FpPoly w = L.coeffs[1].at(0, 0);
    // trace of A_p equals the p-curvature of v D + w
    DiffOp first = scalar_op(OpBasis::Derivation, {w, v});
    return pcurvature_order1(F, first).Ap;
}

bool nilpotence_test(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "nilpotence_test");
    if (L.order() != 2) throw precondition_error("nilpotence_test: order 2 required");
    if (F.p <= 2) throw precondition_error("nilpotence_test: p > 2 required");
    RatMat tau = trace_pcurvature(F, L);
    if (!tau.num.at(0, 0).is_zero()) return false;
    // det(A_p) = 0 iff L has a nonzero rational solution
    return dimension_G(F, L) > 0;
}

EigenringSystem eigenring_system(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "eigenring_system");
    if (L.order() != 2) throw precondition_error("eigenring_system: order 2 required");
    if (F.p <= 2) throw precondition_error("eigenring_system: p > 2 required");
    FpPoly v = L.coeffs[2].at(0, 0);
    FpPoly w = L.coeffs[1].at(0, 0);
    FpPoly u = L.coeffs[0].at(0, 0);
    FpPoly dv = poly_derivative(F, v), dw = poly_derivative(F, w), du = poly_derivative(F, u);
    FpPoly ddv = poly_derivative(F, dv), ddw = poly_derivative(F, dw);
    u32 inv2 = F.inv(2 % F.p);

    EigenringSystem E;
    // A = v(-2w'v + 2wv' + 4uv - w^2)
    FpPoly inner = poly_sub(F, poly_add(F, poly_scale(F, poly_mul(F, w, dv), 2),
                                        poly_scale(F, poly_mul(F, u, v), 4)),
                            poly_add(F, poly_scale(F, poly_mul(F, dw, v), 2), poly_mul(F, w, w)));
    E.A = poly_mul(F, v, inner);
    // B = vw(v''-w') + v'w(w-2v') + 2u'v^2 - 2vuv' - w''v^2 + 2v'w'v
    FpPoly vv = poly_mul(F, v, v);
    FpPoly t1 = poly_mul(F, poly_mul(F, v, w), poly_sub(F, ddv, dw));
    FpPoly t2 = poly_mul(F, poly_mul(F, dv, w), poly_sub(F, w, poly_scale(F, dv, 2)));
    FpPoly t3 = poly_scale(F, poly_mul(F, du, vv), 2);
    FpPoly t4 = poly_scale(F, poly_mul(F, poly_mul(F, v, u), dv), 2);
    FpPoly t5 = poly_mul(F, ddw, vv);
    FpPoly t6 = poly_scale(F, poly_mul(F, poly_mul(F, dv, dw), v), 2);
    E.B = poly_add(F, poly_add(F, t1, t2), poly_sub(F, poly_add(F, t3, t6), poly_add(F, t4, t5)));
    // R = v^2/2, S = -vw/2, T = (v'w - vw')/2 + uv
    E.R = poly_scale(F, vv, inv2);
    E.S = poly_neg(F, poly_scale(F, poly_mul(F, v, w), inv2));
    E.T = poly_add(F, poly_scale(F, poly_sub(F, poly_mul(F, dv, w), poly_mul(F, v, dw)), inv2),
                   poly_mul(F, u, v));
    return E;
}

DiffOp eigenring_entry_operator(const FpCtx& F, const DiffOp& L) {
    EigenringSystem E = eigenring_system(F, L);
    FpPoly v = L.coeffs[2].at(0, 0);
    FpPoly v3 = poly_mul(F, poly_mul(F, v, v), v);
    return scalar_op(OpBasis::Derivation, {E.B, E.A, FpPoly(), v3});
}

Order2Report pcurvature_order2(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "pcurvature_order2");
    if (L.order() != 2) throw precondition_error("pcurvature_order2: order 2 required");
    if (F.p <= 2) throw precondition_error("pcurvature_order2: p > 2 required");
    FpPoly v = L.coeffs[2].at(0, 0);
    FpPoly w = L.coeffs[1].at(0, 0);
    if (v.c[0] == 0) throw precondition_error("pcurvature_order2: regularize first (v(0) != 0)");
    u32 inv2 = F.inv(2 % F.p);

    Order2Report rep;
    rep.trace = trace_pcurvature(F, L);
    const FpPoly& taunum = rep.trace.num.at(0, 0);

    DiffOp L3 = eigenring_entry_operator(F, L);
    SolutionSpace S3 = rational_solution_space(F, L3);
    if (S3.dimension != 1 && S3.dimension != 3)
        throw charp_error("pcurvature_order2: eigenring dimension outside {2,4}");
    rep.gamma = (u32)S3.dimension + 1;
    rep.beta = (u32)rational_solution_space(F, L).dimension;

    auto diag_tau_half = [&] {
        RatMat M;
        M.num = PolyMat(2, 2);
        M.num.at(0, 0) = poly_scale(F, taunum, inv2);
        M.num.at(1, 1) = M.num.at(0, 0);
        M.den = v;
        M.exp = F.p;
        return M;
    };

    if (rep.gamma == 4) {
        rep.kind = Order2Kind::Exact;
        rep.exact = diag_tau_half();
        return rep;
    }
    if (rep.beta == 2) {
        rep.kind = Order2Kind::Exact;
        rep.exact = RatMat{PolyMat(2, 2), v, F.p};
        return rep;
    }

    // gamma = 2: the entries follow the pattern of the minimal solution of the
    // order-3 equation, up to a constant c in F_p[x^p]
    rep.u0 = min_degree_solution(F, S3);
    const FpPoly& u0 = rep.u0;
    EigenringSystem E = eigenring_system(F, L);
    FpPoly du0 = poly_derivative(F, u0);
    FpPoly ddu0 = poly_derivative(F, du0);
    // g = w u0 - v u0'; q = R u0'' + S u0' + T u0
    FpPoly g = poly_sub(F, poly_mul(F, w, u0), poly_mul(F, v, du0));
    FpPoly q = poly_add(F, poly_add(F, poly_mul(F, E.R, ddu0), poly_mul(F, E.S, du0)),
                        poly_mul(F, E.T, u0));
    // pattern K over v^{p+2}: A_p = (tau/2) I + c K
    RatMat K;
    K.num = PolyMat(2, 2);
    K.num.at(0, 0) = poly_scale(F, poly_mul(F, v, g), inv2);
    K.num.at(0, 1) = poly_neg(F, q);
    K.num.at(1, 0) = poly_mul(F, poly_mul(F, v, v), u0);
    K.num.at(1, 1) = poly_neg(F, K.num.at(0, 0));
    K.den = v;
    K.exp = (u64)F.p + 2;

    if (taunum.is_zero()) {
        rep.kind = Order2Kind::UpToConstant;
        rep.base = diag_tau_half();  // zero matrix here
        rep.pattern = std::move(K);
        return rep;
    }
    if (rep.beta == 1) {
        // det A_p = 0 pins c^2 = taunum^2 v^2 / (4 Q), Q = g^2/4 - u0 q
        FpPoly Q = poly_sub(F, poly_scale(F, poly_mul(F, g, g), F.mul(inv2, inv2)),
                            poly_mul(F, u0, q));
        FpPoly numcc = poly_mul(F, poly_mul(F, taunum, taunum), poly_mul(F, v, v));
        FpPoly cc;
        try {
            cc = poly_divexact(F, numcc, poly_scale(F, Q, 4 % F.p));
        } catch (const charp_error&) {
            throw charp_error("pcurvature_order2: c^2 is not polynomial (contradicts the entry pattern)");
        }
        FpPoly ccY = pth_root_poly(F, cc);  // c^2 = (C^2)(x^p)
        FpPoly C;
        if (!poly_sqrt(F, ccY, C))
            throw charp_error("pcurvature_order2: c^2 has no polynomial square root (contradicts the entry pattern)");
        FpPoly cpos = poly_expand_pth(F, C);
        auto make_cand = [&](const FpPoly& c) {
            RatMat M;
            M.num = PolyMat(2, 2);
            FpPoly cvg2 = poly_scale(F, poly_mul(F, c, poly_mul(F, v, g)), inv2);
            FpPoly tv2 = poly_scale(F, poly_mul(F, taunum, poly_mul(F, v, v)), inv2);
            M.num.at(0, 0) = poly_add(F, tv2, cvg2);
            M.num.at(0, 1) = poly_neg(F, poly_mul(F, c, q));
            M.num.at(1, 0) = poly_mul(F, c, poly_mul(F, poly_mul(F, v, v), u0));
            M.num.at(1, 1) = poly_sub(F, tv2, cvg2);
            M.den = v;
            M.exp = (u64)F.p + 2;
            return M;
        };
        rep.kind = Order2Kind::TwoCandidates;
        rep.cand1 = make_cand(cpos);
        rep.cand2 = make_cand(poly_neg(F, cpos));
        return rep;
    }
    rep.kind = Order2Kind::UpToConstant;
    rep.base = diag_tau_half();
    rep.pattern = std::move(K);
    rep.undetermined = true;
    return rep;
}

namespace {

ScaledOp lambda_scaled(const FpCtx& F, const DiffOp& L) {
    RatMat A = companion(F, L);
    size_t r = L.order();
    ScaledOp lam;
    lam.b = A.den;
    lam.dbound = (u32)std::max<i64>(L.max_coeff_degree(), 0);
    lam.h = 1;
    lam.n = r;
    lam.g.assign(2, PolyMat(r, r));
    lam.g[0] = A.num;
    lam.g[1] = PolyMat::identity(r);
    return lam;
}

// eta = Lambda * S for Lambda = D + B1/b; raises h by one
ScaledOp lambda_leftmul(const FpCtx& F, const ScaledOp& S, const PolyMat& B1) {
    size_t m = S.h, n = S.n;
    const FpPoly& b = S.b;
    FpPoly db = poly_derivative(F, b);
    ScaledOp out;
    out.b = b;
    out.dbound = S.dbound;
    out.h = m + 1;
    out.n = n;
    out.g.assign(m + 2, PolyMat(n, n));
    for (size_t j = 0; j <= m + 1; ++j) {
        PolyMat acc(n, n);
        if (j >= 1) acc = S.g[j - 1];
        if (j <= m) {
            // (g_j / b^{m-j})' numerator: g_j' b - (m-j) g_j b'
            PolyMat t = poly_mat_scale(F, poly_mat_derivative(F, S.g[j]), b);
            PolyMat t2 = poly_mat_scale(F, S.g[j], poly_scale(F, db, (u32)((m - j) % F.p)));
            acc = poly_mat_add(F, acc, poly_mat_sub(F, t, t2));
            acc = poly_mat_add(F, acc, poly_mat_mul(F, B1, S.g[j]));
        }
        out.g[j] = std::move(acc);
    }
    return out;
}

ScaledOp lambda_power_rec(const FpCtx& F, const DiffOp& L, const ScaledOp& lam, const PolyMat& B1, u64 k) {
    if (k == 1) return lam;
    ScaledOp half = lambda_power_rec(F, L, lam, B1, k / 2);
    ScaledOp sq = scaled_op_mul(F, half, half);
    if (k & 1) sq = lambda_leftmul(F, sq, B1);
    return sq;
}

}  // namespace

LambdaPower lambda_power(const FpCtx& F, const DiffOp& L, u64 k) {
    require_scalar_regular(F, L, "lambda_power");
    if (k < 1 || k > (u64)F.p - 1) throw precondition_error("lambda_power: need 1 <= k <= p-1");
    FpPoly lr = leading_coeff(L);
    if (lr.is_zero() || lr.c[0] == 0) throw precondition_error("lambda_power: regularize first");
    ScaledOp lam = lambda_scaled(F, L);
    PolyMat B1 = lam.g[0];
    LambdaPower out;
    out.k = k;
    out.op = lambda_power_rec(F, L, lam, B1, k);
    out.op.check_degrees();
    return out;
}

namespace {

// Jump engine: advances the coefficient column by k indexes at a time using
// Gamma = Lambda^k. The state between rounds is the exact polynomial column
// w_m; inside a round it is the series v_m = w_m / l^m, updated per jump by
// the banded form of l^k Gamma followed by an in-place division by l^k.
struct JumpEngine {
    const FpCtx& F;
    size_t r;
    u64 D, dl, k;
    FpPoly lr, lk;
    std::vector<u32> neg_lk_tail;  // negated lk[1..], for the division recurrence
    u32 inv_lk0 = 0;
    std::vector<std::vector<BandedOperator>> band;
    bool lazy_band = false, lazy_div = false;
    double cpj_per_index;  // raw multiply count per advanced index per coefficient

    JumpEngine(const FpCtx& f, const DiffOp& L, u64 kk, size_t max_col)
        : F(f), r(L.order()), k(kk) {
        D = (u64)std::max<i64>(L.max_coeff_degree(), 0);
        lr = L.coeffs[r].at(0, 0);
        dl = (u64)std::max<i64>(lr.degree(), 0);
        LambdaPower gamma = lambda_power(F, L, k);
        std::vector<FpPoly> lpow(k + 1);
        lpow[0] = poly_one();
        for (u64 j = 1; j <= k; ++j) lpow[j] = poly_mul(F, lpow[j - 1], lr);
        lk = lpow[k];
        band.assign(r, std::vector<BandedOperator>(r));
        size_t max_w = 0;
        for (size_t i = 0; i < r; ++i)
            for (size_t l = 0; l < r; ++l) {
                std::vector<FpPoly> ghat(k + 1);
                for (u64 j = 0; j <= k; ++j) ghat[j] = poly_mul(F, gamma.op.g[j].at(i, l), lpow[j]);
                band[i][l] = build_banded(F, ghat, max_col);
                max_w = std::max(max_w, band[i][l].width);
            }
        neg_lk_tail.assign(lk.c.size(), 0);
        for (size_t u = 1; u < lk.c.size(); ++u) neg_lk_tail[u] = F.neg(lk.c[u]);
        inv_lk0 = F.inv(lk.c[0]);
        lazy_band = (u128)(F.p - 1) * (F.p - 1) * (max_w * r + 2) < ((u128)1 << 63);
        lazy_div = (u128)(F.p - 1) * (F.p - 1) * (lk.c.size() + 2) < ((u128)1 << 63);
        cpj_per_index =
            ((double)r * r * ((double)(D + 1) * k + 1) + (double)r * ((double)dl * k + 1)) / (double)k;
    }

    // one jump: sv entries must have length >= eps_out + k; output length eps_out
    void jump(std::vector<std::vector<u32>>& sv, size_t eps_out, std::vector<u64>& acc,
              std::vector<std::vector<u32>>& next) const {
        const size_t w = neg_lk_tail.size();
        const u32* neg = neg_lk_tail.data();
        for (size_t i = 0; i < r; ++i) {
            acc.assign(eps_out, 0);
            for (size_t l = 0; l < r; ++l) banded_accumulate(F, band[i][l], sv[l], acc, lazy_band);
            auto& y = next[i];
            y.resize(eps_out);
            if (lazy_div) {
                size_t head = std::min(eps_out, w);
                for (size_t t = 0; t < head; ++t) {
                    u64 s = F.reduce(acc[t]);
                    for (size_t u = 1; u <= t; ++u) s += (u64)neg[u] * y[t - u];
                    y[t] = F.mul(F.reduce(s), inv_lk0);
                }
                for (size_t t = head; t < eps_out; ++t) {
                    u64 s = F.reduce(acc[t]);
                    const u32* yy = y.data() + t - w + 1;
                    // dot of the divisor tail with the trailing window of y
                    for (size_t u = 1; u < w; ++u) s += (u64)neg[u] * yy[w - 1 - u];
                    y[t] = F.mul(F.reduce(s), inv_lk0);
                }
            } else {
                for (size_t t = 0; t < eps_out; ++t) {
                    u64 s = F.reduce(acc[t]);
                    size_t umax = std::min<size_t>(t, w - 1);
                    for (size_t u = 1; u <= umax; ++u) s = F.reduce(s + (u64)neg_lk_tail[u] * y[t - u]);
                    y[t] = F.mul((u32)s, inv_lk0);
                }
            }
        }
        for (size_t i = 0; i < r; ++i) sv[i].swap(next[i]);
    }
};

}  // namespace

Curvature pcurvature_general(const FpCtx& F, const DiffOp& L) {
    require_scalar_regular(F, L, "pcurvature_general");
    FpPoly lr = leading_coeff(L);
    if (lr.is_zero() || lr.c[0] == 0)
        throw precondition_error("pcurvature_general: regularize first (l_r(0) != 0)");
    const size_t r = L.order();
    const u64 D = (u64)std::max<i64>(L.max_coeff_degree(), 0);
    const u64 dl = (u64)std::max<i64>(lr.degree(), 0);
    const u64 tail = 64;
    const u64 p = F.p;

    KatzChain chain(F, L);

    // giant-step engine whenever it can run; the model picks k
    u64 kbest = 0;
    if (p - 1 > tail && D > 0) {
        double best = 1e300;
        for (u64 k : {8u, 12u, 16u, 24u, 32u}) {
            if (2 * k > p - 1) continue;
            double pow_cost = 14.0 * ((double)r * r * r * (D + 1) * (D + 1)) * k * k * k;
            double build = 2.2 * (double)p * r * r * (double)(k + 1) * ((double)D * k + 1);
            double per_index =
                ((double)r * r * ((double)(D + 1) * k + 1) + (double)r * ((double)dl * k + 1)) / (double)k;
            double jumps = per_index * (double)D * 0.5 * (double)p * p;
            double total = pow_cost + build + jumps;
            if (total < best) {
                best = total;
                kbest = k;
            }
        }
    }

    if (kbest >= 4) {
        const u64 k = kbest;
        // full period table: column profiles repeat mod p
        JumpEngine eng(F, L, k, p);
        const double CREB = 2900.0;  // measured rebase cost per coefficient, raw-op units

        FpPoly lm = poly_one();  // l^m for the current anchor
        std::vector<std::vector<u32>> sv(r), nxt(r);
        std::vector<u64> acc;

        while (p - chain.m > tail) {
            u64 m = chain.m;
            u64 rem = p - m;
            // round size from balancing headroom tax against rebase cost
            double cstar = std::sqrt(2.0 * CREB * (double)(D * m + k + 1) /
                                     (eng.cpj_per_index * (double)(D + 1) * k * k));
            u64 c = std::max<u64>(4, (u64)cstar);
            c = std::min(c, rem / k);
            if (c == 0) break;
            u64 range = c * k;
            u64 m_end = m + range;
            size_t prec = (size_t)(D * m_end + 1 + range);

            // anchor in: sv = v_m = w_m / l^m
            if (m == 0) {
                for (size_t l = 0; l < r; ++l) {
                    sv[l] = chain.w[l];
                    sv[l].resize(prec, 0);
                }
            } else {
                auto invlm = series_inv_raw(F, lm.c, prec);
                for (size_t l = 0; l < r; ++l) sv[l] = series_mul(F, chain.w[l], invlm, prec);
            }
            for (u64 i = 1; i <= c; ++i) {
                size_t eps_out = (size_t)(D * m_end + 1 + (range - i * k));
                eng.jump(sv, eps_out, acc, nxt);
            }
            // anchor out: w_{m_end} = l^{m_end} * v
            lm = poly_mul(F, lm, poly_pow(F, eng.lk, c));
            size_t wlen = (size_t)(D * m_end + 1);
            for (size_t l = 0; l < r; ++l) {
                auto wn = series_mul(F, sv[l], lm.c, wlen);
                while (!wn.empty() && wn.back() == 0) wn.pop_back();
                chain.w[l] = std::move(wn);
            }
            chain.m = m_end;
        }
    }

    // single steps to p + r - 1, collecting the last r columns
    std::vector<std::vector<FpPoly>> cols(r);
    if (chain.m >= p) throw charp_error("pcurvature_general: jump schedule overshot");
    u64 last = p + r - 1;
    while (chain.m < last) {
        chain.step();
        if (chain.m >= p) {
            size_t j = (size_t)(chain.m - p);
            cols[j].resize(r);
            for (size_t i = 0; i < r; ++i) cols[j][i] = FpPoly(std::vector<u32>(chain.w[i]));
        }
    }
    PolyMat Bp = assemble_curvature_columns(F, lr, r, cols);
    for (auto& e : Bp.a)
        if (e.degree() > (i64)(D * p))
            throw charp_error("pcurvature_general: numerator degree exceeds the d*p bound");
    Curvature out;
    out.Ap = RatMat{std::move(Bp), lr, F.p};
    return out;
}

}  // namespace charp
