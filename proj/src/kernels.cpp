#include "starklab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace starklab {

void conv_mod_scalar(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                     std::uint64_t m, std::uint64_t* out) {
  using u128 = unsigned __int128;
  const std::size_t nout = na + nb - 1;
  // With m < 2^62 each product is below 2^124, so eight of them fit in 128 bits.
  for (std::size_t k = 0; k < nout; ++k) {
    const std::size_t lo = k >= nb ? k - nb + 1 : 0;
    const std::size_t hi = k < na ? k : na - 1;
    u128 acc = 0;
    int pending = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
      acc += static_cast<u128>(a[i]) * b[k - i];
      if (++pending == 8) {
        acc %= m;
        pending = 0;
      }
    }
    out[k] = static_cast<std::uint64_t>(acc % m);
  }
}

bool avx2_available() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = [] {
    const char* env = std::getenv("STARKLAB_DISABLE_SIMD");
    if (env && std::strcmp(env, "0") != 0) return false;
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return ok;
#else
  return false;
#endif
}

const char* conv_kernel_name() { return avx2_available() ? "avx2" : "scalar"; }

void conv_mod(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
              std::uint64_t m, std::uint64_t* out) {
  if (na == 0 || nb == 0) return;
  // Short inputs are not worth the padding the vector path needs.
  if (m < kAvx2ModulusBound && na >= 4 && nb >= 4 && avx2_available()) {
    conv_mod_avx2(a, na, b, nb, m, out);
    return;
  }
  conv_mod_scalar(a, na, b, nb, m, out);
}

}  // namespace starklab
