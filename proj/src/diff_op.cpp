#include "diff_op.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "ntt.hpp"

namespace charp {

DiffOp scalar_op(OpBasis basis, std::vector<FpPoly> cs, OpForm form) {
    DiffOp L;
    L.basis = basis;
    L.form = form;
    L.n = 1;
    L.coeffs.reserve(cs.size());
    for (auto& f : cs) {
        PolyMat m(1, 1);
        m.at(0, 0) = std::move(f);
        L.coeffs.push_back(std::move(m));
    }
    if (L.coeffs.empty()) L.coeffs.push_back(PolyMat(1, 1));
    L.trim();
    return L;
}

FpPoly falling_factorial_poly(const FpCtx& F, u32 j) {
    FpPoly r = poly_one();
    for (u32 t = 0; t < j; ++t) r = poly_mul(F, r, FpPoly(std::vector<u32>{F.neg(t % F.p), 1u}));
    return r;
}

u32 falling_factorial_at(const FpCtx& F, u64 m, u32 j) {
    u32 mm = (u32)(m % F.p);
    u64 acc = 1;
    for (u32 t = 0; t < j; ++t) acc = F.reduce(acc * F.sub(mm, t % F.p));
    return (u32)acc;
}

void ScaledOp::check_degrees() const {
    for (size_t j = 0; j < g.size(); ++j)
        for (auto& e : g[j].a)
            if (e.degree() > (i64)((u64)dbound * (h - j)))
                throw charp_error("ScaledOp: numerator degree bound violated");
}

BandedOperator build_banded(const FpCtx& F, const std::vector<FpPoly>& ghat, size_t max_col) {
    BandedOperator B;
    B.p = F.p;
    B.lo = ghat.size() - 1;
    i64 dmax = -1;
    for (auto& g : ghat) dmax = std::max(dmax, g.degree());
    B.width = (size_t)std::max<i64>(0, dmax) + B.lo + 1;
    B.ncols = std::min<size_t>(max_col, F.p);
    B.prof.assign(B.ncols * B.width, 0);
    for (size_t m = 0; m < B.ncols; ++m) {
        u32* col = B.prof.data() + m * B.width;
        u64 ff = 1;  // falling factorial (m)_t
        for (size_t t = 0; t < ghat.size() && ff; ++t) {
            const auto& g = ghat[t];
            // contribution ghat_t[o'+t-lo] * (m)_t at offset o'
            for (size_t i = 0; i < g.c.size(); ++i) {
                size_t off = i + B.lo - t;
                col[off] = F.reduce(col[off] + ff * g.c[i]);
            }
            ff = F.reduce(ff * F.sub((u32)(m % F.p), (u32)(t % F.p)));
        }
    }
    return B;
}

void banded_accumulate(const FpCtx& F, const BandedOperator& B, const std::vector<u32>& S,
                       std::vector<u64>& out, bool lazy) {
    const size_t out_len = out.size();
    const size_t W = B.width, lo = B.lo;
    const u32* prof = B.prof.data();
    size_t mwrap = 0;  // column index modulo the stored period
    const size_t period = B.ncols == B.p ? B.p : 0;
    for (size_t m = 0; m < S.size(); ++m, ++mwrap) {
        if (period && mwrap == period) mwrap = 0;
        u64 s = S[m];
        if (!s) continue;
        const u32* col = prof + (period ? mwrap : (m < B.ncols ? m : m % B.p)) * W;
        size_t o_begin = m >= lo ? 0 : lo - m;
        size_t o_end = m + W - lo <= out_len ? W : (out_len + lo > m ? out_len + lo - m : 0);
        if (o_begin >= o_end) continue;
        u64* dst = out.data() + (m - lo);
        if (lazy) {
            for (size_t o = o_begin; o < o_end; ++o) dst[o] += (u64)col[o] * s;
        } else {
            for (size_t o = o_begin; o < o_end; ++o) dst[o] = F.reduce(dst[o] + (u64)col[o] * s);
        }
    }
}

// Callers must keep column indexes below ncols unless the full period is
// stored (ncols == p).
std::vector<u32> banded_apply(const FpCtx& F, const BandedOperator& B, const std::vector<u32>& S, size_t out_len) {
    std::vector<u64> acc(out_len, 0);
    bool lazy = (u128)(F.p - 1) * (F.p - 1) * B.width < ((u128)1 << 63);
    banded_accumulate(F, B, S, acc, lazy);
    std::vector<u32> out(out_len);
    for (size_t i = 0; i < out_len; ++i) out[i] = F.reduce(acc[i]);
    return out;
}

namespace {

PolyMat delta_apply(const FpCtx& F, OpBasis basis, const PolyMat& E) {
    if (basis == OpBasis::Derivation) return poly_mat_derivative(F, E);
    PolyMat R(E.rows, E.cols);
    for (size_t i = 0; i < E.a.size(); ++i) R.a[i] = poly_theta(F, E.a[i]);
    return R;
}

}  // namespace

DiffOp op_mul_naive(const FpCtx& F, const DiffOp& L1, const DiffOp& L2) {
    if (L1.basis != L2.basis) throw precondition_error("op_mul_naive: basis mismatch");
    if (L1.form != OpForm::Right || L2.form != OpForm::Right)
        throw precondition_error("op_mul_naive: Right form required");
    if (L1.n != L2.n) throw precondition_error("op_mul_naive: dimension mismatch");
    size_t n = L1.n;
    size_t r1 = L1.order(), r2 = L2.order();
    std::vector<PolyMat> out(r1 + r2 + 1, PolyMat(n, n));
    // cur = X^i * L2, built incrementally
    std::vector<PolyMat> cur = L2.coeffs;
    for (size_t i = 0; i <= r1; ++i) {
        const PolyMat& A = L1.coeffs[i];
        if (!A.is_zero())
            for (size_t j = 0; j < cur.size(); ++j)
                out[j] = poly_mat_add(F, out[j], poly_mat_mul(F, A, cur[j]));
        if (i == r1) break;
        // cur <- X * cur : coefficient_j -> delta(coeff_j) + coeff_{j-1}
        std::vector<PolyMat> nxt(cur.size() + 1, PolyMat(n, n));
        for (size_t j = 0; j < cur.size(); ++j) {
            nxt[j] = poly_mat_add(F, nxt[j], delta_apply(F, L1.basis, cur[j]));
            nxt[j + 1] = poly_mat_add(F, nxt[j + 1], cur[j]);
        }
        cur = std::move(nxt);
    }
    DiffOp R;
    R.basis = L1.basis;
    R.form = OpForm::Right;
    R.n = n;
    R.coeffs = std::move(out);
    R.trim();
    return R;
}

ScaledOp scaled_op_mul(const FpCtx& F, const ScaledOp& gamma, const ScaledOp& mu) {
    if (gamma.h != mu.h) throw precondition_error("scaled_op_mul: operands must share h");
    if (gamma.b != mu.b) throw precondition_error("scaled_op_mul: operands must share b");
    if (gamma.n != mu.n) throw precondition_error("scaled_op_mul: dimension mismatch");
    const size_t h = gamma.h;
    if (2 * h > (size_t)F.p - 1) throw precondition_error("scaled_op_mul: 2h exceeds p-1");
    const FpPoly& b = gamma.b;
    if (b.is_zero() || b.c[0] == 0) throw precondition_error("scaled_op_mul: b(0) = 0");
    const size_t n = gamma.n;
    const u32 D = std::max({gamma.dbound, mu.dbound, (u32)std::max<i64>(0, b.degree())});

    const size_t KW = 2 * (size_t)D * h + 2 * h + 1;  // output value precision
    const size_t KV = KW + h;                         // input value precision

    std::vector<u32> fact, ifact;
    {
        std::vector<u32> f, inf;
        // tables up to 2h < p
        f.resize(2 * h + 1);
        inf.resize(2 * h + 1);
        f[0] = 1;
        for (size_t i = 1; i <= 2 * h; ++i) f[i] = F.mul(f[i - 1], (u32)(i % F.p));
        inf[2 * h] = F.inv(f[2 * h]);
        for (size_t i = 2 * h; i > 0; --i) inf[i - 1] = F.mul(inf[i], (u32)(i % F.p));
        fact = std::move(f);
        ifact = std::move(inf);
    }

    FpPoly b_h = poly_pow(F, b, h);
    std::vector<u32> invb_h = series_inv_raw(F, b_h.c, KV);

    // precompute b^t for the hat-scalings
    std::vector<FpPoly> bpow(h + 1);
    bpow[0] = poly_one();
    for (size_t t = 1; t <= h; ++t) bpow[t] = poly_mul(F, bpow[t - 1], b);

    // value columns of mu, per entry: V[l][q][j] = mu_{lq}(x^j) mod x^KV
    std::vector<std::vector<std::vector<std::vector<u32>>>> V(
        n, std::vector<std::vector<std::vector<u32>>>(n));
    for (size_t l = 0; l < n; ++l)
        for (size_t q = 0; q < n; ++q) {
            std::vector<FpPoly> muhat(h + 1);
            for (size_t t = 0; t <= h; ++t) muhat[t] = poly_mul(F, mu.g[t].at(l, q), bpow[t]);
            auto& cols = V[l][q];
            cols.resize(2 * h + 1);
            for (size_t j = 0; j <= 2 * h; ++j) {
                std::vector<u32> P(KV, 0);
                u64 ff = 1;  // (j)_t
                for (size_t t = 0; t <= std::min(j, h) && ff; ++t) {
                    const auto& mt = muhat[t].c;
                    size_t off = j - t;
                    for (size_t i = 0; i < mt.size() && off + i < KV; ++i)
                        P[off + i] = F.reduce(P[off + i] + ff * mt[i]);
                    ff = F.reduce(ff * F.sub((u32)(j % F.p), (u32)(t % F.p)));
                }
                cols[j] = series_mul(F, P, invb_h, KV);
            }
        }

    // banded gamma* per entry
    std::vector<std::vector<BandedOperator>> band(n, std::vector<BandedOperator>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < n; ++l) {
            std::vector<FpPoly> ghat(h + 1);
            for (size_t t = 0; t <= h; ++t) ghat[t] = poly_mul(F, gamma.g[t].at(i, l), bpow[t]);
            band[i][l] = build_banded(F, ghat, KV);
        }

    size_t max_band_width = 0;
    for (auto& row : band)
        for (auto& B : row) max_band_width = std::max(max_band_width, B.width);
    bool lazy = (u128)(F.p - 1) * (F.p - 1) * (max_band_width * n) < ((u128)1 << 63);

    ScaledOp eta;
    eta.b = b;
    eta.dbound = D;
    eta.h = 2 * h;
    eta.n = n;
    eta.g.assign(2 * h + 1, PolyMat(n, n));

    std::vector<u32> expinv(2 * h + 1);
    for (size_t s = 0; s <= 2 * h; ++s) expinv[s] = (s % 2) ? F.neg(ifact[s]) : ifact[s];

    const size_t hdeg = 2 * (size_t)D * h;  // degree bound of the hat numerators
    for (size_t i = 0; i < n; ++i)
        for (size_t q = 0; q < n; ++q) {
            // values Y_j = b^h * sum_l gamma*_{il}(V_{lq,j}), exact polynomials
            std::vector<std::vector<u32>> Y(2 * h + 1);
            std::vector<u64> acc(KW);
            for (size_t j = 0; j <= 2 * h; ++j) {
                std::fill(acc.begin(), acc.end(), 0);
                for (size_t l = 0; l < n; ++l) banded_accumulate(F, band[i][l], V[l][q][j], acc, lazy);
                std::vector<u32> W(KW);
                for (size_t t = 0; t < KW; ++t) W[t] = F.reduce(acc[t]);
                Y[j] = series_mul(F, W, b_h.c, KW);
            }
            // nodal interpolation slice by slice: hhat_t[ts-2h+t] from values
            std::vector<std::vector<u32>> hhat(2 * h + 1, std::vector<u32>(hdeg + 1, 0));
            std::vector<u32> zz(2 * h + 1);
            for (size_t ts = 0; ts < KW; ++ts) {
                bool any = false;
                for (size_t j = 0; j <= 2 * h; ++j) {
                    i64 idx = (i64)ts - 2 * (i64)h + (i64)j;
                    u32 v = (idx >= 0 && idx < (i64)Y[j].size()) ? Y[j][idx] : 0;
                    zz[j] = F.mul(v, ifact[j]);
                    any |= (v != 0);
                }
                if (!any) continue;
                auto c = convolve_mod(F, zz, expinv);
                for (size_t t = 0; t <= 2 * h; ++t) {
                    i64 idx = (i64)ts - 2 * (i64)h + (i64)t;
                    if (idx < 0 || idx > (i64)hdeg) {
                        if (c[t]) throw charp_error("scaled_op_mul: interpolation out of degree bounds");
                        continue;
                    }
                    hhat[t][idx] = c[t];
                }
            }
            // unscale hhat_t by b^t
            std::vector<u32> invb_run(hdeg + 1, 0);
            std::vector<u32> invb = series_inv_raw(F, b.c, hdeg + 1);
            invb_run[0] = 1;
            for (size_t t = 0; t <= 2 * h; ++t) {
                FpPoly ht(std::vector<u32>(hhat[t]));
                if (!ht.is_zero()) {
                    auto qser = series_mul(F, ht.c, invb_run, ht.c.size());
                    FpPoly gq(std::move(qser));
                    // exactness check: degree bound D*(2h-t)
                    if (gq.degree() > (i64)((u64)D * (2 * h - t)))
                        throw charp_error("scaled_op_mul: unscaled numerator exceeds bound");
                    eta.g[t].at(i, q) = std::move(gq);
                }
                if (t < 2 * h) invb_run = series_mul(F, invb_run, invb, hdeg + 1);
            }
        }
    return eta;
}

DiffOp to_euler(const FpCtx& F, const DiffOp& L) {
    if (L.basis != OpBasis::Derivation || L.form != OpForm::Right)
        throw precondition_error("to_euler: expects Right form in d/dx");
    size_t r = L.order(), n = L.n;
    std::vector<PolyMat> out(r + 1, PolyMat(n, n));
    // x^r L = sum_j (x^{r-j} l_j) * theta(theta-1)...(theta-j+1)
    std::vector<u32> stir{1};  // expansion of the falling factorial in powers of theta
    for (size_t j = 0; j <= r; ++j) {
        const PolyMat& lj = L.coeffs[j];
        if (!lj.is_zero()) {
            PolyMat q(n, n);
            for (size_t e = 0; e < q.a.size(); ++e) q.a[e] = poly_mul_xk(lj.a[e], r - j);
            for (size_t i = 0; i < stir.size(); ++i) {
                if (!stir[i]) continue;
                for (size_t e = 0; e < q.a.size(); ++e)
                    out[i].a[e] = poly_add(F, out[i].a[e], poly_scale(F, q.a[e], stir[i]));
            }
        }
        if (j == r) break;
        // stir <- stir * (theta - j)
        std::vector<u32> nxt(stir.size() + 1, 0);
        u32 jj = (u32)(j % F.p);
        for (size_t i = 0; i < stir.size(); ++i) {
            nxt[i + 1] = F.add(nxt[i + 1], stir[i]);
            nxt[i] = F.sub(nxt[i], F.mul(jj, stir[i]));
        }
        stir = std::move(nxt);
    }
    DiffOp R;
    R.basis = OpBasis::Euler;
    R.form = OpForm::Right;
    R.n = n;
    R.coeffs = std::move(out);
    R.trim();
    return R;
}

DiffOp left_right_convert(const FpCtx& F, const DiffOp& L) {
    if (L.basis != OpBasis::Euler) throw precondition_error("left_right_convert: Euler basis required");
    size_t r = L.order(), n = L.n;
    i64 dmax = L.max_coeff_degree();
    DiffOp R;
    R.basis = OpBasis::Euler;
    R.form = (L.form == OpForm::Right) ? OpForm::Left : OpForm::Right;
    R.n = n;
    R.coeffs.assign(r + 1, PolyMat(n, n));
    if (dmax < 0) return R;
    bool to_left = (L.form == OpForm::Right);
    for (size_t e = 0; e < n * n; ++e) {
        // buffers [j][a] for the result entry
        std::vector<std::vector<u32>> buf(r + 1, std::vector<u32>((size_t)dmax + 1, 0));
        for (size_t a = 0; a <= (size_t)dmax; ++a) {
            std::vector<u32> tp(r + 1, 0);
            bool any = false;
            for (size_t j = 0; j <= r; ++j) {
                tp[j] = L.coeffs[j].a[e].coeff(a);
                any |= (tp[j] != 0);
            }
            if (!any) continue;
            u32 sh = (u32)(a % F.p);
            if (to_left) sh = F.neg(sh);
            FpPoly shifted = taylor_shift(F, FpPoly(std::move(tp)), sh);
            for (size_t j = 0; j < shifted.c.size(); ++j) buf[j][a] = shifted.c[j];
        }
        for (size_t j = 0; j <= r; ++j) R.coeffs[j].a[e] = FpPoly(std::move(buf[j]));
    }
    R.trim();
    return R;
}

PolyMat apply_poly_naive(const FpCtx& F, const DiffOp& L, const PolyMat& E) {
    size_t n = L.n;
    if (E.rows != n) throw precondition_error("apply_poly_naive: dimension mismatch");
    if (L.form == OpForm::Right) {
        PolyMat R(n, E.cols);
        PolyMat d = E;
        for (size_t j = 0; j < L.coeffs.size(); ++j) {
            if (!L.coeffs[j].is_zero()) R = poly_mat_add(F, R, poly_mat_mul(F, L.coeffs[j], d));
            if (j + 1 < L.coeffs.size()) d = delta_apply(F, L.basis, d);
        }
        return R;
    }
    // Left form: Horner from the top
    PolyMat R(n, E.cols);
    for (size_t j = L.coeffs.size(); j-- > 0;) {
        R = delta_apply(F, L.basis, R);
        if (!L.coeffs[j].is_zero()) R = poly_mat_add(F, R, poly_mat_mul(F, L.coeffs[j], E));
    }
    return R;
}

PolyMat apply_poly_bsgs(const FpCtx& F, const DiffOp& L, const PolyMat& E) {
    if (L.basis != OpBasis::Euler || L.form != OpForm::Right)
        throw precondition_error("apply_poly_bsgs: Euler basis, Right form required");
    size_t rho = L.order();
    i64 delta = L.max_coeff_degree();
    i64 eps = E.max_degree();
    // regime check; correctness never depends on the branch
    if (rho < 4 || delta < 0 || eps < 0 || (double)eps > 4.0 * std::sqrt((double)rho) * (double)delta)
        return apply_poly_naive(F, L, E);

    size_t n = L.n;
    size_t kb = (size_t)std::sqrt((double)rho);
    size_t hb = (rho + 1 + kb - 1) / kb;

    DiffOp Lleft = left_right_convert(F, L);
    // slices in right form
    std::vector<std::vector<PolyMat>> ldag(hb);
    for (size_t j = 0; j < hb; ++j) {
        DiffOp slice;
        slice.basis = OpBasis::Euler;
        slice.form = OpForm::Left;
        slice.n = n;
        for (size_t t = 0; t < kb; ++t) {
            size_t idx = j * kb + t;
            slice.coeffs.push_back(idx <= rho ? Lleft.coeffs[idx] : PolyMat(n, n));
        }
        slice.trim();
        DiffOp right = left_right_convert(F, slice);
        ldag[j].assign(kb, PolyMat(n, n));
        for (size_t t = 0; t < right.coeffs.size(); ++t) ldag[j][t] = right.coeffs[t];
    }

    // baby steps
    std::vector<PolyMat> baby(kb);
    baby[0] = E;
    for (size_t t = 1; t < kb; ++t) baby[t] = delta_apply(F, OpBasis::Euler, baby[t - 1]);

    // chunks of degree <= delta
    size_t csz = (size_t)delta + 1;
    size_t s = ((size_t)eps + kb) / csz + 2;  // enough chunks for all baby steps
    auto chunk = [&](const PolyMat& M, size_t u) {
        PolyMat C(M.rows, M.cols);
        for (size_t e = 0; e < M.a.size(); ++e) {
            const auto& c = M.a[e].c;
            size_t lo = u * csz;
            if (lo >= c.size()) continue;
            size_t hi = std::min(c.size(), lo + csz);
            C.a[e] = FpPoly(std::vector<u32>(c.begin() + lo, c.begin() + hi));
        }
        return C;
    };

    PolyMat total(n, E.cols);
    for (size_t j = 0; j < hb; ++j) {
        PolyMat LjE(n, E.cols);
        for (size_t u = 0; u < s; ++u) {
            PolyMat inner(n, E.cols);
            bool nonzero = false;
            for (size_t t = 0; t < kb; ++t) {
                if (ldag[j][t].is_zero()) continue;
                PolyMat c = chunk(baby[t], u);
                if (c.is_zero()) continue;
                inner = poly_mat_add(F, inner, poly_mat_mul(F, ldag[j][t], c));
                nonzero = true;
            }
            if (!nonzero) continue;
            for (size_t e = 0; e < inner.a.size(); ++e)
                LjE.a[e] = poly_add(F, LjE.a[e], poly_mul_xk(inner.a[e], u * csz));
        }
        // apply theta^{jk}: coefficient at x^m scales by (m mod p)^{jk}
        u64 ex = (u64)j * kb;
        if (ex == 0) {
            total = poly_mat_add(F, total, LjE);
        } else {
            for (size_t e = 0; e < LjE.a.size(); ++e) {
                auto& cs = LjE.a[e].c;
                for (size_t m = 0; m < cs.size(); ++m)
                    if (cs[m]) cs[m] = F.mul(cs[m], F.pow((u32)(m % F.p), ex));
                LjE.a[e].trim();
            }
            total = poly_mat_add(F, total, LjE);
        }
    }
    return total;
}

RatMat apply_rat(const FpCtx& F, const DiffOp& L, const RatMat& A) {
    if (L.basis != OpBasis::Derivation || L.form != OpForm::Right)
        throw precondition_error("apply_rat: Right form in d/dx required");
    const FpPoly& b = A.den;
    if (b.is_zero() || b.c[0] == 0) throw precondition_error("apply_rat: b(0) = 0");
    size_t rho = L.order();
    i64 delta = std::max<i64>(0, L.max_coeff_degree());
    size_t db = (size_t)std::max<i64>(0, b.degree());
    u64 kappa = A.exp;
    size_t dprime = (size_t)delta + rho;
    size_t eps = (size_t)((kappa + rho) * db + dprime + 1);

    DiffOp Lth = to_euler(F, L);

    // E = A mod x^eps
    auto bk = series_pow_poly(F, b, kappa, eps);
    auto invbk = series_inv_raw(F, bk, eps);
    PolyMat E(A.num.rows, A.num.cols);
    for (size_t e = 0; e < E.a.size(); ++e) E.a[e] = FpPoly(series_mul(F, A.num.a[e].c, invbk, eps));

    PolyMat Fth = apply_poly_bsgs(F, Lth, E);

    // truncate to eps, divide by x^rho, multiply back by b^{kappa+rho}
    size_t prec2 = eps - rho;
    auto bkr = series_pow_poly(F, b, kappa + rho, prec2);
    RatMat R;
    R.num = PolyMat(A.num.rows, A.num.cols);
    R.den = b;
    R.exp = kappa + rho;
    for (size_t e = 0; e < Fth.a.size(); ++e) {
        auto& cs = Fth.a[e].c;
        if (cs.size() > eps) cs.resize(eps);
        for (size_t m = 0; m < std::min<size_t>(rho, cs.size()); ++m)
            if (cs[m]) throw charp_error("apply_rat: series not divisible by x^rho");
        std::vector<u32> shifted(cs.begin() + std::min<size_t>(rho, cs.size()), cs.end());
        shifted.resize(prec2, 0);
        R.num.a[e] = FpPoly(series_mul(F, shifted, bkr, prec2));
    }
    return R;
}

RatMat companion(const FpCtx& F, const DiffOp& L) {
    if (L.n != 1) throw precondition_error("companion: scalar operator required");
    size_t r = L.order();
    if (r < 1) throw precondition_error("companion: order must be >= 1");
    FpPoly lr = L.coeffs[r].at(0, 0);
    if (lr.is_zero()) throw precondition_error("companion: zero leading coefficient");
    RatMat A;
    A.num = PolyMat(r, r);
    A.den = lr;
    A.exp = 1;
    for (size_t i = 0; i + 1 < r; ++i) A.num.at(i + 1, i) = lr;
    for (size_t i = 0; i < r; ++i) A.num.at(i, r - 1) = poly_neg(F, L.coeffs[i].at(0, 0));
    return A;
}

Regularized regularize(const FpCtx& F, const DiffOp& L) {
    if (L.is_zero()) throw precondition_error("regularize: zero operator");
    size_t r = L.order();
    // leading coefficient: scalar case, or gcd-free test entrywise is not
    // needed; the spec's operators are scalar here
    if (L.n != 1) throw precondition_error("regularize: scalar operator required");
    FpPoly lr = L.coeffs[r].at(0, 0);

    // hypothesis H: l_r does not vanish identically on F_p
    FpPoly probe = lr;
    if ((u64)lr.degree() >= F.p) {
        // reduce modulo x^p - x: x^e ~ x^{(e-1) mod (p-1) + 1} for e >= 1
        std::vector<u32> red(F.p, 0);
        red[0] = lr.c[0];
        for (size_t e = 1; e < lr.c.size(); ++e) {
            size_t target = e < F.p ? e : (size_t)((e - 1) % (F.p - 1)) + 1;
            red[target] = F.add(red[target], lr.c[e]);
        }
        probe = FpPoly{std::move(red)};
        if (probe.is_zero())
            throw precondition_error("hypothesis H fails: leading coefficient vanishes on all of F_p (needs field extension)");
    }

    // smallest x0 in {0..deg l_r} (capped at p-1) with l_r(x0) != 0
    u64 dmax = std::min<u64>((u64)lr.degree(), F.p - 1);
    u32 x0 = 0;
    bool found = false;
    const u64 block = 256;
    for (u64 lo = 0; lo <= dmax && !found; lo += block) {
        u64 hi = std::min(dmax, lo + block - 1);
        std::vector<u32> pts;
        for (u64 t = lo; t <= hi; ++t) pts.push_back((u32)t);
        auto vals = multipoint_eval(F, probe, pts);
        for (size_t i = 0; i < vals.size(); ++i)
            if (vals[i]) {
                x0 = pts[i];
                found = true;
                break;
            }
    }
    if (!found)
        throw precondition_error("hypothesis H fails: leading coefficient vanishes on all of F_p (needs field extension)");

    Regularized R;
    R.shift = x0;
    if (x0 == 0) {
        R.op = L;
        return R;
    }
    R.op = L;
    for (auto& m : R.op.coeffs)
        for (auto& e : m.a) e = taylor_shift(F, e, x0);
    return R;
}

}  // namespace charp
