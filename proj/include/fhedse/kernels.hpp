// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "fhedse/modulus.hpp"

namespace fhedse::kernels {

// Data-parallel inner loops over residue rows. The scalar backend is the
// reference: plain 64-bit products reduced with %. The AVX2 backend must be
// bit-identical to it on every input; the equivalence suite enforces that.
//
// Contracts common to all kernels:
//   - inputs are canonical (< q); outputs are canonical,
//   - w_table/w_shoup entries are canonical constants with their Shoup
//     companions (Modulus::shoup),
//   - regions may alias only where noted (out may equal a).

enum class Backend { scalar, avx2 };

/// Backend chosen at startup (AVX2 when the CPU and build support it).
Backend active_backend();
std::string_view backend_name(Backend b);

/// Force a backend, e.g. to cross-check results. Throws InvariantViolation
/// if the requested backend is unavailable on this machine.
void set_backend(Backend b);

bool avx2_available();

/// out[i] = (a[i] + b[i]) mod q. out may alias a or b.
void mod_add(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);

/// out[i] = (a[i] - b[i]) mod q. out may alias a or b.
void mod_sub(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);

/// out[i] = (a[i] * b[i]) mod q, both operands variable. out may alias a or b.
void mod_mul(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);

/// out[i] = (a[i] * w[i]) mod q with per-element precomputed constants.
void mod_mul_table(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* w,
                   const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);

/// out[i] = (a[i] * w) mod q with one broadcast constant.
void mod_mul_const(std::uint32_t* out, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m);

/// acc[i] = (acc[i] + a[i] * w) mod q — the BConv multiply-accumulate step.
void mod_mac_const(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m);

/// In-place Cooley-Tukey butterfly row with per-pair twiddles:
///   (lo[i], hi[i]) <- (lo[i] + w[i]*hi[i], lo[i] - w[i]*hi[i]) mod q.
void butterfly_ct_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);

/// In-place Gentleman-Sande butterfly row with per-pair twiddles:
///   (lo[i], hi[i]) <- (lo[i] + hi[i], (lo[i] - hi[i])*w[i]) mod q.
void butterfly_gs_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);

// Scalar reference entry points, callable directly by the equivalence tests.
namespace scalar {
void mod_add(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);
void mod_sub(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);
void mod_mul(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);
void mod_mul_table(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* w,
                   const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);
void mod_mul_const(std::uint32_t* out, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m);
void mod_mac_const(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m);
void butterfly_ct_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);
void butterfly_gs_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);
}  // namespace scalar

#if defined(FHEDSE_HAVE_AVX2)
namespace avx2 {
void mod_add(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);
void mod_sub(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);
void mod_mul(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m);
void mod_mul_table(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* w,
                   const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);
void mod_mul_const(std::uint32_t* out, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m);
void mod_mac_const(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m);
void butterfly_ct_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);
void butterfly_gs_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m);
}  // namespace avx2
#endif

}  // namespace fhedse::kernels
