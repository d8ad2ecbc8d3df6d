// SPDX-License-Identifier: Apache-2.0
#include "fhedse/kernels.hpp"

namespace fhedse::kernels::scalar {

void mod_add(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = std::uint64_t(a[i]) + b[i];
        out[i] = std::uint32_t(s >= q ? s - q : s);
    }
}

void mod_sub(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    const std::uint32_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] >= b[i] ? a[i] - b[i] : std::uint32_t(std::uint64_t(a[i]) + q - b[i]);
    }
}

void mod_mul(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::uint32_t(std::uint64_t(a[i]) * b[i] % q);
    }
}

void mod_mul_table(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* w,
                   const std::uint32_t* /*w_shoup*/, std::size_t n, const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::uint32_t(std::uint64_t(a[i]) * w[i] % q);
    }
}

void mod_mul_const(std::uint32_t* out, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t /*w_shoup*/, std::size_t n, const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::uint32_t(std::uint64_t(a[i]) * w % q);
    }
}

void mod_mac_const(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t /*w_shoup*/, std::size_t n, const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = acc[i] + std::uint64_t(a[i]) * w % q;
        acc[i] = std::uint32_t(s >= q ? s - q : s);
    }
}

void butterfly_ct_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* /*w_shoup*/, std::size_t n, const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t t = std::uint32_t(std::uint64_t(hi[i]) * w[i] % q);
        std::uint64_t s = std::uint64_t(lo[i]) + t;
        std::uint32_t u = std::uint32_t(s >= q ? s - q : s);
        std::uint32_t v = lo[i] >= t ? lo[i] - t : std::uint32_t(std::uint64_t(lo[i]) + q - t);
        lo[i] = u;
        hi[i] = v;
    }
}

void butterfly_gs_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* /*w_shoup*/, std::size_t n, const Modulus& m) {
    const std::uint64_t q = m.value();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = std::uint64_t(lo[i]) + hi[i];
        std::uint32_t u = std::uint32_t(s >= q ? s - q : s);
        std::uint32_t d = lo[i] >= hi[i] ? lo[i] - hi[i]
                                         : std::uint32_t(std::uint64_t(lo[i]) + q - hi[i]);
        lo[i] = u;
        hi[i] = std::uint32_t(std::uint64_t(d) * w[i] % q);
    }
}

}  // namespace fhedse::kernels::scalar
