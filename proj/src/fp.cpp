#include "fp.hpp"

namespace charp {

namespace {

u64 mulmod64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod64(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(u32 n, u32 a) {
    if (n % a == 0) return n == a;
    u32 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

// Deterministic for n < 3,215,031,751 with bases {2, 3, 5, 7}.
bool is_prime_u32(u32 n) {
    if (n < 2) return false;
    for (u32 a : {2u, 3u, 5u, 7u}) {
        if (n == a) return true;
        if (!miller_rabin(n, a)) return false;
    }
    return true;
}

bool FpCtx::sqrt(u32 a, u32& out) const {
    a %= p;
    if (a == 0) {
        out = 0;
        return true;
    }
    if (pow(a, (p - 1) / 2) != 1) return false;
    if (p % 4 == 3) {
        out = pow(a, (p + 1) / 4);
        return true;
    }
    // Tonelli-Shanks
    u32 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) q >>= 1, ++s;
    u32 z = 2;
    while (pow(z, (p - 1) / 2) != p - 1) ++z;
    u32 m = (u32)s;
    u32 c = pow(z, q);
    u32 t = pow(a, q);
    u32 r = pow(a, (q + 1) / 2);
    while (t != 1) {
        u32 t2 = t;
        u32 i = 0;
        while (t2 != 1) {
            t2 = mul(t2, t2);
            ++i;
        }
        u32 b = c;
        for (u32 j = 0; j + i + 1 < m; ++j) b = mul(b, b);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    out = r;
    return true;
}

}  // namespace charp
