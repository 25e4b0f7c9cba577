#include <vector>

#include "starklab/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>
#endif

namespace starklab {

#if defined(__x86_64__) && defined(__AVX2__)

// Four output coefficients per step. Residues are below 2^28, so products stay
// below 2^56 and 255 of them can be summed in a 64-bit lane before folding.
void conv_mod_avx2(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                   std::uint64_t m, std::uint64_t* out) {
  const std::size_t nout = na + nb - 1;
  std::vector<std::uint64_t> bp(nb + 2 * na + 8, 0);
  for (std::size_t j = 0; j < nb; ++j) bp[na + j] = b[j];
  alignas(32) std::uint64_t lanes[4];

  for (std::size_t k0 = 0; k0 < nout; k0 += 4) {
    __m256i acc = _mm256_setzero_si256();
    std::uint64_t folded[4] = {0, 0, 0, 0};
    int pending = 0;
    for (std::size_t i = 0; i < na; ++i) {
      if (i > k0 + 3) break;
      const __m256i ai = _mm256_set1_epi64x(static_cast<long long>(a[i]));
      // bp[na + k0 - i + t] = b[k0 + t - i] (zero outside range)
      const __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&bp[na + k0 - i]));
      acc = _mm256_add_epi64(acc, _mm256_mul_epu32(ai, bv));
      if (++pending == 255) {
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
        for (int t = 0; t < 4; ++t) folded[t] = (folded[t] + lanes[t] % m) % m;
        acc = _mm256_setzero_si256();
        pending = 0;
      }
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (int t = 0; t < 4 && k0 + t < nout; ++t) out[k0 + t] = (folded[t] + lanes[t] % m) % m;
  }
}

#else

void conv_mod_avx2(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                   std::uint64_t m, std::uint64_t* out) {
  conv_mod_scalar(a, na, b, nb, m, out);
}

#endif

}  // namespace starklab
