// SPDX-License-Identifier: Apache-2.0
#include "fhedse/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fhedse::kernels {

namespace {

struct Vtable {
    decltype(&scalar::mod_add) mod_add;
    decltype(&scalar::mod_sub) mod_sub;
    decltype(&scalar::mod_mul) mod_mul;
    decltype(&scalar::mod_mul_table) mod_mul_table;
    decltype(&scalar::mod_mul_const) mod_mul_const;
    decltype(&scalar::mod_mac_const) mod_mac_const;
    decltype(&scalar::butterfly_ct_table) butterfly_ct_table;
    decltype(&scalar::butterfly_gs_table) butterfly_gs_table;
};

constexpr Vtable kScalar = {
    &scalar::mod_add,        &scalar::mod_sub,           &scalar::mod_mul,
    &scalar::mod_mul_table,  &scalar::mod_mul_const,     &scalar::mod_mac_const,
    &scalar::butterfly_ct_table, &scalar::butterfly_gs_table,
};

#if defined(FHEDSE_HAVE_AVX2)
constexpr Vtable kAvx2 = {
    &avx2::mod_add,        &avx2::mod_sub,           &avx2::mod_mul,
    &avx2::mod_mul_table,  &avx2::mod_mul_const,     &avx2::mod_mac_const,
    &avx2::butterfly_ct_table, &avx2::butterfly_gs_table,
};
#endif

bool cpu_has_avx2() {
#if defined(FHEDSE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("FHEDSE_KERNEL_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
        return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = initial_backend();

const Vtable& table() {
#if defined(FHEDSE_HAVE_AVX2)
    if (g_backend == Backend::avx2) return kAvx2;
#endif
    return kScalar;
}

}  // namespace

Backend active_backend() { return g_backend; }

std::string_view backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_available() { return cpu_has_avx2(); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2()) {
        throw InvariantViolation("avx2 backend not available on this machine");
    }
    g_backend = b;
}

void mod_add(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    table().mod_add(out, a, b, n, m);
}

void mod_sub(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    table().mod_sub(out, a, b, n, m);
}

void mod_mul(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    table().mod_mul(out, a, b, n, m);
}

void mod_mul_table(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* w,
                   const std::uint32_t* w_shoup, std::size_t n, const Modulus& m) {
    table().mod_mul_table(out, a, w, w_shoup, n, m);
}

void mod_mul_const(std::uint32_t* out, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m) {
    table().mod_mul_const(out, a, w, w_shoup, n, m);
}

void mod_mac_const(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m) {
    table().mod_mac_const(acc, a, w, w_shoup, n, m);
}

void butterfly_ct_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m) {
    table().butterfly_ct_table(lo, hi, w, w_shoup, n, m);
}

void butterfly_gs_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m) {
    table().butterfly_gs_table(lo, hi, w, w_shoup, n, m);
}

}  // namespace fhedse::kernels
