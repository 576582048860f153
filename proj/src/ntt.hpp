#ifndef CHARP_NTT_HPP
#define CHARP_NTT_HPP

#include <vector>

#include "fp.hpp"

namespace charp {

// Exact convolution of sequences reduced mod p, via NTT over word-size
// transform-friendly primes combined by CRT. The number of CRT primes is
// chosen from the coefficient bound min(|a|,|b|) * (p-1)^2.
std::vector<u32> convolve_mod(const FpCtx& F, const std::vector<u32>& a, const std::vector<u32>& b);

}  // namespace charp

#endif
