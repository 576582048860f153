#include "fp_poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "ntt.hpp"

namespace charp {

FpPoly poly_from_ints(const FpCtx& F, std::initializer_list<i64> cs) {
    std::vector<u32> v;
    v.reserve(cs.size());
    for (i64 x : cs) v.push_back(F.from_int(x));
    return FpPoly(std::move(v));
}

FpPoly poly_one() { return FpPoly(std::vector<u32>{1u}); }
FpPoly poly_x() { return FpPoly(std::vector<u32>{0u, 1u}); }
FpPoly constant_poly(u32 v) { return v ? FpPoly(std::vector<u32>{v}) : FpPoly(); }

FpPoly poly_add(const FpCtx& F, const FpPoly& f, const FpPoly& g) {
    std::vector<u32> r(std::max(f.c.size(), g.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F.add(f.coeff(i), g.coeff(i));
    return FpPoly(std::move(r));
}

FpPoly poly_sub(const FpCtx& F, const FpPoly& f, const FpPoly& g) {
    std::vector<u32> r(std::max(f.c.size(), g.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F.sub(f.coeff(i), g.coeff(i));
    return FpPoly(std::move(r));
}

FpPoly poly_neg(const FpCtx& F, const FpPoly& f) {
    std::vector<u32> r(f.c);
    for (auto& v : r) v = F.neg(v);
    return FpPoly(std::move(r));
}

FpPoly poly_scale(const FpCtx& F, const FpPoly& f, u32 s) {
    if (s == 0) return FpPoly();
    std::vector<u32> r(f.c);
    for (auto& v : r) v = F.mul(v, s);
    return FpPoly(std::move(r));
}

FpPoly poly_mul(const FpCtx& F, const FpPoly& f, const FpPoly& g) {
    if (f.is_zero() || g.is_zero()) return FpPoly();
    return FpPoly(convolve_mod(F, f.c, g.c));
}

FpPoly poly_mul_xk(const FpPoly& f, size_t k) {
    if (f.is_zero()) return FpPoly();
    std::vector<u32> r(f.c.size() + k, 0);
    std::copy(f.c.begin(), f.c.end(), r.begin() + k);
    return FpPoly(std::move(r));
}

FpPoly poly_div_xk(const FpPoly& f, size_t k) {
    if (f.is_zero()) return FpPoly();
    for (size_t i = 0; i < k && i < f.c.size(); ++i)
        if (f.c[i]) throw charp_error("poly_div_xk: not divisible by x^k");
    if (f.c.size() <= k) return FpPoly();
    return FpPoly(std::vector<u32>(f.c.begin() + k, f.c.end()));
}

FpPoly poly_pow(const FpCtx& F, const FpPoly& f, u64 e) {
    FpPoly r = poly_one();
    FpPoly b = f;
    while (e) {
        if (e & 1) r = poly_mul(F, r, b);
        e >>= 1;
        if (e) b = poly_mul(F, b, b);
    }
    return r;
}

u32 poly_eval(const FpCtx& F, const FpPoly& f, u32 x) {
    u64 acc = 0;
    for (size_t i = f.c.size(); i-- > 0;) acc = F.reduce(acc * x + f.c[i]);
    return (u32)acc;
}

FpPoly poly_derivative(const FpCtx& F, const FpPoly& f) {
    if (f.c.size() <= 1) return FpPoly();
    std::vector<u32> r(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) r[i - 1] = F.mul(f.c[i], i % F.p);
    return FpPoly(std::move(r));
}

FpPoly poly_theta(const FpCtx& F, const FpPoly& f) {
    std::vector<u32> r(f.c);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F.mul(r[i], i % F.p);
    return FpPoly(std::move(r));
}

std::pair<FpPoly, FpPoly> poly_divrem(const FpCtx& F, const FpPoly& f, const FpPoly& g) {
    if (g.is_zero()) throw precondition_error("division by zero polynomial");
    if (f.degree() < g.degree()) return {FpPoly(), f};
    size_t dq = f.c.size() - g.c.size();
    // Newton division via reversed operands once the schoolbook cost bites
    if (dq >= 32 && g.c.size() >= 32) {
        std::vector<u32> revf(f.c.rbegin(), f.c.rend());
        std::vector<u32> revg(g.c.rbegin(), g.c.rend());
        auto qrev = series_mul(F, revf, series_inv_raw(F, revg, dq + 1), dq + 1);
        std::vector<u32> q(qrev.rbegin(), qrev.rend());
        FpPoly Q(std::move(q));
        FpPoly R = poly_sub(F, f, poly_mul(F, Q, g));
        if (R.degree() >= g.degree()) throw charp_error("poly_divrem: fast path inconsistency");
        return {std::move(Q), std::move(R)};
    }
    std::vector<u32> rem(f.c);
    std::vector<u32> q(dq + 1, 0);
    u32 inv_lc = F.inv(g.lc());
    for (size_t k = dq + 1; k-- > 0;) {
        u32 top = rem[k + g.c.size() - 1];
        if (!top) continue;
        u32 qk = F.mul(top, inv_lc);
        q[k] = qk;
        for (size_t i = 0; i < g.c.size(); ++i) rem[k + i] = F.sub(rem[k + i], F.mul(qk, g.c[i]));
    }
    return {FpPoly(std::move(q)), FpPoly(std::move(rem))};
}

FpPoly poly_divexact(const FpCtx& F, const FpPoly& f, const FpPoly& g) {
    auto [q, r] = poly_divrem(F, f, g);
    if (!r.is_zero()) throw charp_error("poly_divexact: division not exact");
    return q;
}

FpPoly poly_monic(const FpCtx& F, const FpPoly& f) {
    if (f.is_zero()) return f;
    return poly_scale(F, f, F.inv(f.lc()));
}

FpPoly poly_gcd(const FpCtx& F, const FpPoly& f, const FpPoly& g) {
    if (f.is_zero() && g.is_zero()) throw precondition_error("gcd of two zero polynomials");
    FpPoly a = f, b = g;
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, a);
}

namespace {

// factorials 0..n with inverses; requires n < p
void factorial_tables(const FpCtx& F, size_t n, std::vector<u32>& fact, std::vector<u32>& ifact) {
    fact.resize(n + 1);
    ifact.resize(n + 1);
    fact[0] = 1;
    for (size_t i = 1; i <= n; ++i) fact[i] = F.mul(fact[i - 1], (u32)(i % F.p));
    ifact[n] = F.inv(fact[n]);
    for (size_t i = n; i > 0; --i) ifact[i - 1] = F.mul(ifact[i], (u32)(i % F.p));
}

// f(x + x0) for deg f < p
FpPoly shift_small(const FpCtx& F, const FpPoly& f, u32 x0) {
    size_t n = f.c.size();
    if (n == 0 || x0 == 0) return f;
    assert(n <= F.p);
    if (n < 32) {
        std::vector<u32> r(n, 0);
        for (size_t i = n; i-- > 0;) {
            // r <- r*(x+x0) + f_i
            for (size_t j = n - 1; j > 0; --j) r[j] = F.add(F.mul(r[j], x0), r[j - 1]);
            r[0] = F.add(F.mul(r[0], x0), f.c[i]);
        }
        return FpPoly(std::move(r));
    }
    size_t d = n - 1;
    std::vector<u32> fact, ifact;
    factorial_tables(F, d, fact, ifact);
    std::vector<u32> A(n), B(n);
    for (size_t j = 0; j <= d; ++j) A[j] = F.mul(f.c[d - j], fact[d - j]);
    u32 cp = 1;
    for (size_t t = 0; t <= d; ++t) {
        B[t] = F.mul(cp, ifact[t]);
        cp = F.mul(cp, x0);
    }
    auto C = convolve_mod(F, A, B);
    std::vector<u32> g(n);
    for (size_t k = 0; k <= d; ++k) g[k] = F.mul(ifact[k], C[d - k]);
    return FpPoly(std::move(g));
}

}  // namespace

FpPoly taylor_shift(const FpCtx& F, const FpPoly& f, u32 x0) {
    if (f.is_zero() || x0 == 0) return f;
    if (f.c.size() <= F.p) return shift_small(F, f, x0);
    // deg f >= p: split into slices of degree < p; (x+x0)^p = x^p + x0
    size_t nslices = (f.c.size() + F.p - 1) / F.p;
    std::vector<FpPoly> shifted(nslices);
    for (size_t m = 0; m < nslices; ++m) {
        size_t lo = m * F.p, hi = std::min(f.c.size(), lo + F.p);
        shifted[m] = shift_small(F, FpPoly(std::vector<u32>(f.c.begin() + lo, f.c.begin() + hi)), x0);
    }
    // Horner in y = x^p + x0
    FpPoly r = shifted[nslices - 1];
    for (size_t m = nslices - 1; m-- > 0;) {
        FpPoly ry = poly_add(F, poly_mul_xk(r, F.p), poly_scale(F, r, x0));
        r = poly_add(F, ry, shifted[m]);
    }
    return r;
}

namespace {

struct SubproductTree {
    // nodes[k] = vector of polys at level k; level 0 = leaves (x - t_i)
    std::vector<std::vector<FpPoly>> levels;
    // cached reversed inverses for the repeated node divisions
    std::vector<std::vector<std::vector<u32>>> rinv;

    void build(const FpCtx& F, const std::vector<u32>& pts) {
        levels.clear();
        std::vector<FpPoly> cur;
        cur.reserve(pts.size());
        for (u32 t : pts) cur.push_back(FpPoly(std::vector<u32>{F.neg(t), 1u}));
        levels.push_back(cur);
        while (levels.back().size() > 1) {
            const auto& prev = levels.back();
            std::vector<FpPoly> nxt;
            nxt.reserve((prev.size() + 1) / 2);
            for (size_t i = 0; i + 1 < prev.size(); i += 2) nxt.push_back(poly_mul(F, prev[i], prev[i + 1]));
            if (prev.size() & 1) nxt.push_back(prev.back());
            levels.push_back(std::move(nxt));
        }
        rinv.assign(levels.size(), {});
    }

    const FpPoly& root() const { return levels.back()[0]; }

    // remainder of f modulo a node, using a cached inverse of its reversal
    FpPoly node_rem(const FpCtx& F, const FpPoly& f, size_t lev, size_t idx) {
        const FpPoly& g = levels[lev][idx];
        if (f.degree() < g.degree()) return f;
        size_t dq = f.c.size() - g.c.size();
        if (dq < 24 || g.c.size() < 24) return poly_divrem(F, f, g).second;
        auto& cache_lev = rinv[lev];
        if (cache_lev.empty()) cache_lev.assign(levels[lev].size(), {});
        auto& gi = cache_lev[idx];
        // a node at this level is divided by polynomials of less than twice
        // its degree, so dq + 1 <= deg g + 1 bounds the needed precision
        size_t need = std::max<size_t>(dq + 1, g.c.size());
        if (gi.size() < need) {
            std::vector<u32> revg(g.c.rbegin(), g.c.rend());
            gi = series_inv_raw(F, revg, need);
        }
        std::vector<u32> revf(f.c.rbegin(), f.c.rend());
        auto qrev = series_mul(F, revf, gi, dq + 1);
        std::vector<u32> q(qrev.rbegin(), qrev.rend());
        FpPoly Q(std::move(q));
        FpPoly R = poly_sub(F, f, poly_mul(F, Q, g));
        return R;
    }

    // remainders of f at all leaves, in point order
    void eval_down(const FpCtx& F, const FpPoly& f, std::vector<u32>& out) {
        std::vector<FpPoly> cur{node_rem(F, f, levels.size() - 1, 0)};
        for (size_t lev = levels.size() - 1; lev-- > 0;) {
            const auto& nodes = levels[lev];
            std::vector<FpPoly> nxt(nodes.size());
            size_t j = 0;
            for (size_t i = 0; i < cur.size(); ++i) {
                size_t take = std::min<size_t>(2, nodes.size() - j);
                for (size_t t = 0; t < take; ++t, ++j) nxt[j] = node_rem(F, cur[i], lev, j);
            }
            cur = std::move(nxt);
        }
        out.resize(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) out[i] = cur[i].is_zero() ? 0 : cur[i].c[0];
    }

    // linear combination sum_i w_i * prod_{j != i} (x - t_j)
    FpPoly combine(const FpCtx& F, const std::vector<u32>& w) const {
        std::vector<FpPoly> cur;
        cur.reserve(w.size());
        for (u32 v : w) cur.push_back(constant_poly(v));
        for (size_t lev = 0; lev + 1 < levels.size(); ++lev) {
            const auto& nodes = levels[lev];
            std::vector<FpPoly> nxt;
            nxt.reserve((cur.size() + 1) / 2);
            for (size_t i = 0; i + 1 < cur.size(); i += 2) {
                FpPoly s = poly_add(F, poly_mul(F, cur[i], nodes[i + 1]), poly_mul(F, cur[i + 1], nodes[i]));
                nxt.push_back(std::move(s));
            }
            if (cur.size() & 1) nxt.push_back(cur.back());
            cur = std::move(nxt);
        }
        return cur.empty() ? FpPoly() : cur[0];
    }
};

}  // namespace

std::vector<u32> multipoint_eval(const FpCtx& F, const FpPoly& f, const std::vector<u32>& points) {
    std::vector<u32> out(points.size());
    if (points.empty()) return out;
    if (points.size() < 64 || f.c.size() < 64) {
        for (size_t i = 0; i < points.size(); ++i) out[i] = poly_eval(F, f, points[i]);
        return out;
    }
    SubproductTree tree;
    tree.build(F, points);
    tree.eval_down(F, f, out);
    return out;
}

std::vector<std::vector<u32>> multipoint_eval_many(const FpCtx& F, const std::vector<const FpPoly*>& fs,
                                                   const std::vector<u32>& points) {
    std::vector<std::vector<u32>> out(fs.size());
    if (points.empty()) {
        return out;
    }
    size_t maxlen = 0;
    for (auto* f : fs) maxlen = std::max(maxlen, f->c.size());
    if (points.size() < 64 || maxlen < 64) {
        for (size_t e = 0; e < fs.size(); ++e) {
            out[e].resize(points.size());
            for (size_t i = 0; i < points.size(); ++i) out[e][i] = poly_eval(F, *fs[e], points[i]);
        }
        return out;
    }
    SubproductTree tree;
    tree.build(F, points);
    for (size_t e = 0; e < fs.size(); ++e) {
        out[e].resize(points.size());
        tree.eval_down(F, *fs[e], out[e]);
    }
    return out;
}

FpPoly interpolate(const FpCtx& F, const std::vector<std::pair<u32, u32>>& points) {
    if (points.empty()) return FpPoly();
    {
        std::vector<u32> xs;
        xs.reserve(points.size());
        for (auto& pr : points) xs.push_back(pr.first % F.p);
        std::sort(xs.begin(), xs.end());
        for (size_t i = 1; i < xs.size(); ++i)
            if (xs[i] == xs[i - 1]) throw precondition_error("interpolate: repeated abscissa");
    }
    std::vector<u32> xs(points.size());
    for (size_t i = 0; i < points.size(); ++i) xs[i] = points[i].first % F.p;
    SubproductTree tree;
    tree.build(F, xs);
    FpPoly aprime = poly_derivative(F, tree.root());
    std::vector<u32> denom;
    tree.eval_down(F, aprime, denom);
    std::vector<u32> w(points.size());
    for (size_t i = 0; i < points.size(); ++i) w[i] = F.mul(points[i].second % F.p, F.inv(denom[i]));
    return tree.combine(F, w);
}

std::vector<u32> series_mul(const FpCtx& F, const std::vector<u32>& a, const std::vector<u32>& b, size_t prec) {
    if (a.empty() || b.empty() || prec == 0) return std::vector<u32>(prec, 0);
    std::vector<u32> ta(a.begin(), a.begin() + std::min(a.size(), prec));
    std::vector<u32> tb(b.begin(), b.begin() + std::min(b.size(), prec));
    auto c = convolve_mod(F, ta, tb);
    c.resize(prec, 0);
    return c;
}

std::vector<u32> series_inv_raw(const FpCtx& F, const std::vector<u32>& f, size_t prec) {
    if (f.empty() || f[0] == 0) throw precondition_error("series_inv: zero constant term");
    std::vector<u32> g{F.inv(f[0])};
    size_t k = 1;
    while (k < prec) {
        size_t k2 = std::min(prec, 2 * k);
        // g <- g*(2 - f*g) mod x^k2
        auto fg = series_mul(F, std::vector<u32>(f.begin(), f.begin() + std::min(f.size(), k2)), g, k2);
        std::vector<u32> two_minus(k2, 0);
        two_minus[0] = F.sub(2 % F.p, fg[0]);
        for (size_t i = 1; i < k2; ++i) two_minus[i] = F.neg(fg[i]);
        g = series_mul(F, g, two_minus, k2);
        k = k2;
    }
    g.resize(prec, 0);
    return g;
}

FpSeries series_inv(const FpCtx& F, const FpSeries& f) {
    return FpSeries(series_inv_raw(F, f.coeffs, f.precision), f.precision);
}

std::vector<u32> series_div(const FpCtx& F, const FpPoly& b, const FpPoly& a, size_t prec) {
    if (a.is_zero() || a.c[0] == 0) throw precondition_error("series_div: denominator has zero constant term");
    if (b.is_zero() || prec == 0) return std::vector<u32>(prec, 0);
    auto ia = series_inv_raw(F, a.c, prec);
    return series_mul(F, b.c, ia, prec);
}

std::vector<u32> series_pow_poly(const FpCtx& F, const FpPoly& f, u64 e, size_t prec) {
    std::vector<u32> r(prec, 0);
    if (prec == 0) return r;
    r[0] = 1;
    std::vector<u32> b(f.c.begin(), f.c.begin() + std::min(f.c.size(), prec));
    b.resize(prec, 0);
    while (e) {
        if (e & 1) r = series_mul(F, r, b, prec);
        e >>= 1;
        if (e) b = series_mul(F, b, b, prec);
    }
    return r;
}

namespace {

// x * f mod c, c monic of degree dc
void mulx_mod(const FpCtx& F, std::vector<u32>& f, const FpPoly& c) {
    size_t dc = c.c.size() - 1;
    u32 top = f[dc - 1];
    for (size_t i = dc - 1; i > 0; --i) f[i] = F.sub(f[i - 1], F.mul(top, c.c[i]));
    f[0] = F.sub(0, F.mul(top, c.c[0]));
}

std::vector<u32> polymulmod(const FpCtx& F, const std::vector<u32>& a, const std::vector<u32>& b, const FpPoly& c) {
    FpPoly pa{std::vector<u32>(a)}, pb{std::vector<u32>(b)};
    auto prod = poly_mul(F, pa, pb);
    auto rem = poly_divrem(F, prod, c).second;
    std::vector<u32> r(c.c.size() - 1, 0);
    for (size_t i = 0; i < rem.c.size(); ++i) r[i] = rem.c[i];
    return r;
}

std::vector<u32> xpow_mod(const FpCtx& F, u64 e, const FpPoly& c) {
    size_t dc = c.c.size() - 1;
    std::vector<u32> r(dc, 0);
    r[0] = 1;
    if (dc == 0) return r;
    std::vector<u32> x(dc, 0);
    if (dc == 1) {
        // x = -c0 mod c
        x[0] = F.neg(c.c[0]);
        u32 base = x[0];
        r[0] = F.pow(base, e);
        return r;
    }
    x[1] = 1;
    while (e) {
        if (e & 1) r = polymulmod(F, r, x, c);
        e >>= 1;
        if (e) x = polymulmod(F, x, x, c);
    }
    return r;
}

}  // namespace

std::vector<std::vector<u32>> coeff_jump(const FpCtx& F, const FpPoly& a, const FpPoly& b,
                                         const std::vector<u64>& targets, size_t window) {
    if (a.is_zero() || a.c[0] == 0) throw precondition_error("coeff_jump: a(0) = 0");
    std::vector<std::vector<u32>> out(targets.size(), std::vector<u32>(window, 0));
    if (b.is_zero() || window == 0) return out;

    size_t da = (size_t)a.degree();
    size_t n0 = b.c.size() > da ? b.c.size() - da : 0;  // recurrence valid from index n0 on

    if (da == 0) {
        u32 ia = F.inv(a.c[0]);
        for (size_t t = 0; t < targets.size(); ++t)
            for (size_t j = 0; j < window; ++j) {
                u64 idx = targets[t] + j;
                if (idx < b.c.size()) out[t][j] = F.mul(b.c[idx], ia);
            }
        return out;
    }

    // initial window of the tail sequence v_m = u_{n0+m}
    auto init = series_div(F, b, a, n0 + da);
    std::vector<u32> v(init.begin() + n0, init.end());

    // monic characteristic polynomial: reversal of a, scaled
    std::vector<u32> rc(da + 1);
    for (size_t i = 0; i <= da; ++i) rc[i] = a.c[da - i];
    FpPoly cpol = poly_monic(F, FpPoly(std::move(rc)));

    u64 direct_hi = 0;
    for (size_t t = 0; t < targets.size(); ++t)
        if (targets[t] < n0) direct_hi = std::max(direct_hi, targets[t] + window);
    std::vector<u32> direct;
    if (direct_hi) direct = series_div(F, b, a, direct_hi + n0 + 1);

    for (size_t t = 0; t < targets.size(); ++t) {
        u64 N = targets[t];
        if (N < n0) {
            for (size_t j = 0; j < window; ++j) {
                u64 idx = N + j;
                if (idx < direct.size())
                    out[t][j] = direct[idx];
                else {
                    // fell past the direct segment; continue with the recurrence
                    std::vector<u32> pol = xpow_mod(F, idx - n0, cpol);
                    u64 acc = 0;
                    for (size_t i = 0; i < da; ++i) acc = F.reduce(acc + (u64)pol[i] * v[i]);
                    out[t][j] = (u32)acc;
                }
            }
            continue;
        }
        std::vector<u32> pol = xpow_mod(F, N - n0, cpol);
        for (size_t j = 0; j < window; ++j) {
            u64 acc = 0;
            for (size_t i = 0; i < da; ++i) acc = F.reduce(acc + (u64)pol[i] * v[i]);
            out[t][j] = (u32)acc;
            if (j + 1 < window) mulx_mod(F, pol, cpol);
        }
    }
    return out;
}

FpPoly pth_root_poly(const FpCtx& F, const FpPoly& f) {
    if (f.is_zero()) return f;
    for (size_t i = 0; i < f.c.size(); ++i)
        if (i % F.p != 0 && f.c[i]) throw precondition_error("pth_root_poly: not a polynomial in x^p");
    std::vector<u32> r((f.c.size() + F.p - 1) / F.p);
    for (size_t i = 0; i < r.size(); ++i) r[i] = f.c[i * F.p];
    return FpPoly(std::move(r));
}

FpPoly poly_expand_pth(const FpCtx& F, const FpPoly& f) {
    if (f.is_zero()) return f;
    std::vector<u32> r((f.c.size() - 1) * F.p + 1, 0);
    for (size_t i = 0; i < f.c.size(); ++i) r[i * F.p] = f.c[i];
    return FpPoly(std::move(r));
}

bool poly_sqrt(const FpCtx& F, const FpPoly& f, FpPoly& out) {
    if (f.is_zero()) {
        out = FpPoly();
        return true;
    }
    if (f.degree() % 2) return false;
    size_t t = 0;
    while (f.c[t] == 0) ++t;
    if (t % 2) return false;
    FpPoly g = poly_div_xk(f, t);
    u32 s0;
    if (!F.sqrt(g.c[0], s0)) return false;
    size_t prec = (size_t)g.degree() / 2 + 1;
    // Newton: s <- (s + g/s)/2
    std::vector<u32> s{s0};
    u32 inv2 = F.inv(2 % F.p);
    size_t k = 1;
    while (k < prec) {
        size_t k2 = std::min(prec, 2 * k);
        auto is = series_inv_raw(F, s, k2);
        auto gs = series_mul(F, std::vector<u32>(g.c.begin(), g.c.begin() + std::min(g.c.size(), k2)), is, k2);
        s.resize(k2, 0);
        for (size_t i = 0; i < k2; ++i) s[i] = F.mul(F.add(s[i], gs[i]), inv2);
        k = k2;
    }
    FpPoly cand(std::move(s));
    if (poly_mul(F, cand, cand) != g) return false;
    out = poly_mul_xk(cand, t / 2);
    return true;
}

std::string poly_to_string(const FpCtx& F, const FpPoly& f, const char* var) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = f.c.size(); i-- > 0;) {
        u32 v = f.c[i];
        if (!v) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0) {
            os << v;
        } else {
            if (v != 1) os << v << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

}  // namespace charp
