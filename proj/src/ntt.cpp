#include "ntt.hpp"

#include <array>
#include <cassert>

namespace charp {

namespace {

struct NttPrime {
    u32 mod;
    u32 root;    // primitive root
    int maxlg;   // supports lengths up to 2^maxlg
};

// moduli of the form c*2^k + 1
constexpr std::array<NttPrime, 3> kPrimes = {{
    {998244353u, 3u, 23},
    {754974721u, 11u, 24},
    {469762049u, 3u, 26},
}};

struct Plan {
    u32 mod = 0;
    u64 im = 0;  // floor(2^64/mod)
    std::vector<u32> roots;    // roots[i] used at span 2^i stage tables
    std::vector<u32> iroots;
    std::vector<u32> rate2, irate2;

    u32 reduce(u64 x) const {
        u64 q = (u64)(((u128)x * im) >> 64);
        u64 r = x - q * (u64)mod;
        if (r >= mod) r -= mod;
        if (r >= mod) r -= mod;
        return (u32)r;
    }
    u32 mul(u32 a, u32 b) const { return reduce((u64)a * b); }
    u32 pw(u32 a, u64 e) const {
        u64 r = 1, x = a;
        while (e) {
            if (e & 1) r = reduce(r * x);
            x = reduce(x * x);
            e >>= 1;
        }
        return (u32)r;
    }

    void init(const NttPrime& P) {
        mod = P.mod;
        im = (u64)(((u128)1 << 64) / mod);
        int g = P.maxlg;
        roots.assign(g + 1, 0);
        iroots.assign(g + 1, 0);
        roots[g] = pw(P.root, (mod - 1) >> g);
        iroots[g] = pw(roots[g], mod - 2);
        for (int i = g - 1; i >= 0; --i) {
            roots[i] = mul(roots[i + 1], roots[i + 1]);
            iroots[i] = mul(iroots[i + 1], iroots[i + 1]);
        }
        rate2.assign(g, 0);
        irate2.assign(g, 0);
        u32 prod = 1, iprod = 1;
        for (int i = 0; i + 2 <= g; ++i) {
            rate2[i] = mul(roots[i + 2], prod);
            irate2[i] = mul(iroots[i + 2], iprod);
            prod = mul(prod, iroots[i + 2]);
            iprod = mul(iprod, roots[i + 2]);
        }
    }

    void fwd(std::vector<u32>& a) const {
        int n = (int)a.size();
        int lg = 0;
        while ((1 << lg) < n) ++lg;
        for (int len = 0; len < lg; ++len) {
            int span = 1 << (lg - 1 - len);
            u32 r = 1;
            for (int blk = 0; blk < (1 << len); ++blk) {
                int off = blk * span * 2;
                for (int i = off; i < off + span; ++i) {
                    u32 x = a[i];
                    u32 y = mul(a[i + span], r);
                    a[i] = x + y >= mod ? x + y - mod : x + y;
                    a[i + span] = x >= y ? x - y : x + mod - y;
                }
                if (blk + 1 < (1 << len)) r = mul(r, rate2[__builtin_ctz(~(u32)blk)]);
            }
        }
    }

    void inv(std::vector<u32>& a) const {
        int n = (int)a.size();
        int lg = 0;
        while ((1 << lg) < n) ++lg;
        for (int len = lg; len >= 1; --len) {
            int span = 1 << (lg - len);
            u32 r = 1;
            for (int blk = 0; blk < (1 << (len - 1)); ++blk) {
                int off = blk * span * 2;
                for (int i = off; i < off + span; ++i) {
                    u32 x = a[i];
                    u32 y = a[i + span];
                    a[i] = x + y >= mod ? x + y - mod : x + y;
                    a[i + span] = mul(x >= y ? x - y : x + mod - y, r);
                }
                if (blk + 1 < (1 << (len - 1))) r = mul(r, irate2[__builtin_ctz(~(u32)blk)]);
            }
        }
        u32 in = pw((u32)n, mod - 2);
        for (auto& v : a) v = mul(v, in);
    }
};

const Plan& plan(int idx) {
    static const std::array<Plan, 3> plans = [] {
        std::array<Plan, 3> ps;
        for (int i = 0; i < 3; ++i) ps[i].init(kPrimes[i]);
        return ps;
    }();
    return plans[idx];
}

std::vector<u32> conv_one(int idx, const std::vector<u32>& a0, const std::vector<u32>& b0, size_t out_n,
                          bool need_reduce) {
    const Plan& P = plan(idx);
    size_t n = 1;
    while (n < out_n) n <<= 1;
    std::vector<u32> a(n, 0), b(n, 0);
    if (need_reduce) {
        for (size_t i = 0; i < a0.size(); ++i) a[i] = a0[i] % P.mod;
        for (size_t i = 0; i < b0.size(); ++i) b[i] = b0[i] % P.mod;
    } else {
        std::copy(a0.begin(), a0.end(), a.begin());
        std::copy(b0.begin(), b0.end(), b.begin());
    }
    P.fwd(a);
    P.fwd(b);
    for (size_t i = 0; i < n; ++i) a[i] = P.mul(a[i], b[i]);
    P.inv(a);
    a.resize(out_n);
    return a;
}

}  // namespace

std::vector<u32> convolve_mod(const FpCtx& F, const std::vector<u32>& a, const std::vector<u32>& b) {
    if (a.empty() || b.empty()) return {};
    size_t out_n = a.size() + b.size() - 1;

    // schoolbook for small sizes
    if (a.size() < 32 || b.size() < 32) {
        std::vector<u32> res(out_n, 0);
        const std::vector<u32>* s = &a;
        const std::vector<u32>* l = &b;
        if (s->size() > l->size()) std::swap(s, l);
        for (size_t i = 0; i < s->size(); ++i) {
            u64 c = (*s)[i];
            if (!c) continue;
            // (p-1)^2 < 2^62, reduce each step
            for (size_t j = 0; j < l->size(); ++j)
                res[i + j] = F.reduce(res[i + j] + c * (*l)[j]);
        }
        return res;
    }

    size_t n2 = 1;
    while (n2 < out_n) n2 <<= 1;

    // coefficient bound: min(len) * (p-1)^2
    u128 bound = (u128)std::min(a.size(), b.size()) * (u64)(F.p - 1) * (u64)(F.p - 1);
    int nprimes = 1;
    u128 cap = kPrimes[0].mod;
    while (nprimes < 3 && cap <= bound) {
        cap *= kPrimes[nprimes].mod;
        ++nprimes;
    }
    if (cap <= bound) throw charp_error("convolution size exceeds CRT capacity");
    for (int i = 0; i < nprimes; ++i)
        if (n2 > ((size_t)1 << kPrimes[i].maxlg)) throw charp_error("convolution length exceeds NTT capacity");

    if (nprimes == 1) {
        auto r = conv_one(0, a, b, out_n, F.p > kPrimes[0].mod);
        if (F.p < kPrimes[0].mod)
            for (auto& v : r) v = F.reduce(v);
        return r;
    }

    std::vector<std::vector<u32>> rs(nprimes);
    for (int i = 0; i < nprimes; ++i) rs[i] = conv_one(i, a, b, out_n, F.p > kPrimes[i].mod);

    std::vector<u32> out(out_n);
    if (nprimes == 2) {
        const u64 m1 = kPrimes[0].mod, m2 = kPrimes[1].mod;
        const u64 inv12 = [&] {
            u64 r = 1, x = m1 % m2, e = m2 - 2;
            while (e) {
                if (e & 1) r = r * x % m2;
                x = x * x % m2;
                e >>= 1;
            }
            return r;
        }();
        for (size_t i = 0; i < out_n; ++i) {
            u64 a1 = rs[0][i], a2 = rs[1][i];
            u64 t = (a2 + m2 - a1 % m2) % m2 * inv12 % m2;
            u64 v = a1 + m1 * t;  // < m1*m2 < 2^60
            out[i] = (u32)(v % F.p);
        }
    } else {
        // Garner for three residues
        const u64 m1 = kPrimes[0].mod, m2 = kPrimes[1].mod, m3 = kPrimes[2].mod;
        auto invmod = [](u64 x, u64 m) {
            u64 r = 1, e = m - 2;
            x %= m;
            while (e) {
                if (e & 1) r = (u64)((u128)r * x % m);
                x = (u64)((u128)x * x % m);
                e >>= 1;
            }
            return r;
        };
        const u64 i12 = invmod(m1, m2);
        const u64 i123 = invmod((u64)((u128)m1 * m2 % m3), m3);
        const u64 m1m2_mod_p = (u64)((u128)m1 * m2 % F.p);
        for (size_t i = 0; i < out_n; ++i) {
            u64 a1 = rs[0][i], a2 = rs[1][i], a3 = rs[2][i];
            u64 t2 = (a2 + m2 - a1 % m2) % m2 * i12 % m2;
            u64 v12 = a1 + m1 * t2;  // value mod m1*m2
            u64 t3 = (u64)((u128)(a3 + m3 - v12 % m3) * i123 % m3);
            // value = v12 + m1*m2*t3
            u64 r = (v12 + (u64)((u128)m1m2_mod_p * t3 % F.p)) % F.p;
            out[i] = (u32)(r % F.p);
        }
    }
    return out;
}

}  // namespace charp
