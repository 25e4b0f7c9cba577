#pragma once

#include <cstddef>
#include <cstdint>

namespace starklab {

// out[k] = sum_{i+j=k} a[i] b[j] mod m, for residues already reduced mod m.
// `out` must hold na + nb - 1 entries and must not alias the inputs.
void conv_mod(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
              std::uint64_t m, std::uint64_t* out);

// Portable reference kernel; valid for any m < 2^62.
void conv_mod_scalar(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                     std::uint64_t m, std::uint64_t* out);

// The vector kernel, usable when avx2_available() and m < kAvx2ModulusBound.
void conv_mod_avx2(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                   std::uint64_t m, std::uint64_t* out);
inline constexpr std::uint64_t kAvx2ModulusBound = std::uint64_t{1} << 28;

bool avx2_available();
// "avx2" or "scalar": the path conv_mod takes for small moduli.
const char* conv_kernel_name();

}  // namespace starklab
