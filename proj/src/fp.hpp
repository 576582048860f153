#ifndef CHARP_FP_HPP
#define CHARP_FP_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace charp {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

struct charp_error : std::runtime_error {
    explicit charp_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition violation (division by zero polynomial, r > p, H fails, ...).
struct precondition_error : charp_error {
    explicit precondition_error(const std::string& msg) : charp_error(msg) {}
};

bool is_prime_u32(u32 n);

// Arithmetic context for F_p, p an odd prime < 2^31. Immutable; cheap to copy.
// Reduction is Barrett with im = floor(2^64 / p), valid for inputs < 2^62.
struct FpCtx {
    u32 p = 0;
    u64 barrett_im = 0;

    FpCtx() = default;
    explicit FpCtx(u32 prime) : p(prime) {
        if (p < 3 || p >= (1u << 31)) throw precondition_error("modulus must satisfy 3 <= p < 2^31");
        if (!is_prime_u32(p)) throw precondition_error("modulus " + std::to_string(p) + " is not prime");
        barrett_im = (u64)(((u128)1 << 64) / p);
    }

    u32 reduce(u64 x) const {
        u64 q = (u64)(((u128)x * barrett_im) >> 64);
        u64 r = x - q * (u64)p;
        if (r >= p) r -= p;
        if (r >= p) r -= p;
        return (u32)r;
    }

    u32 add(u32 a, u32 b) const {
        u32 s = a + b;
        if (s >= p) s -= p;
        return s;
    }
    u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p - b; }
    u32 neg(u32 a) const { return a ? p - a : 0; }
    u32 mul(u32 a, u32 b) const { return reduce((u64)a * b); }

    u32 from_int(i64 v) const {
        i64 r = v % (i64)p;
        if (r < 0) r += p;
        return (u32)r;
    }

    u32 pow(u32 a, u64 e) const {
        u64 r = 1, x = a % p;
        while (e) {
            if (e & 1) r = reduce(r * x);
            x = reduce(x * x);
            e >>= 1;
        }
        return (u32)r;
    }

    u32 inv(u32 a) const {
        if (a == 0) throw precondition_error("inverse of zero in F_p");
        return pow(a, p - 2);
    }

    // Square root mod p (Tonelli-Shanks); returns false if a is a non-residue.
    bool sqrt(u32 a, u32& out) const;
};

}  // namespace charp

#endif
