// SPDX-License-Identifier: Apache-2.0

// AVX2 variants of the residue-row kernels. Lanes are widened to 64 bits so
// every modulus below 2^32 is handled uniformly: 32x32 products come from
// _mm256_mul_epu32, variable-by-variable reduction uses Barrett with
// mu = floor(2^64/q) (emulated 64x64 high product, remainder < 3q, two
// conditional subtractions), and multiplication by precomputed constants
// uses Shoup's trick (remainder < 2q, one conditional subtraction).

#include "fhedse/kernels.hpp"

#if defined(FHEDSE_HAVE_AVX2) && defined(__AVX2__)

#include <immintrin.h>

namespace fhedse::kernels::avx2 {

namespace {

struct U64x8 {
    __m256i lo;  // lanes 0..3
    __m256i hi;  // lanes 4..7
};

inline U64x8 load_widen(const std::uint32_t* p) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
    U64x8 r;
    r.lo = _mm256_cvtepu32_epi64(_mm256_castsi256_si128(v));
    r.hi = _mm256_cvtepu32_epi64(_mm256_extracti128_si256(v, 1));
    return r;
}

inline void store_narrow(std::uint32_t* p, U64x8 v) {
    const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    __m128i a = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(v.lo, idx));
    __m128i b = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(v.hi, idx));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), _mm256_set_m128i(b, a));
}

// lanes hold values < 2^63, so the signed compare is exact
inline __m256i csub(__m256i x, __m256i q) {
    __m256i gt = _mm256_cmpgt_epi64(q, x);          // q > x
    __m256i sub = _mm256_andnot_si256(gt, q);       // q where x >= q
    return _mm256_sub_epi64(x, sub);
}

inline __m256i add_mod(__m256i a, __m256i b, __m256i q) {
    return csub(_mm256_add_epi64(a, b), q);
}

inline __m256i sub_mod(__m256i a, __m256i b, __m256i q) {
    return csub(_mm256_sub_epi64(_mm256_add_epi64(a, q), b), q);
}

// Full 64-bit product of lane values < 2^32.
inline __m256i mul32(__m256i a, __m256i b) { return _mm256_mul_epu32(a, b); }

inline __m256i shr32(__m256i x) { return _mm256_srli_epi64(x, 32); }

// High 64 bits of a 64x64 product.
inline __m256i mulhi64(__m256i x, __m256i y) {
    const __m256i m32 = _mm256_set1_epi64x(0xFFFFFFFFll);
    __m256i x_hi = shr32(x);
    __m256i y_hi = shr32(y);
    __m256i lolo = _mm256_mul_epu32(x, y);
    __m256i lohi = _mm256_mul_epu32(x, y_hi);
    __m256i hilo = _mm256_mul_epu32(x_hi, y);
    __m256i hihi = _mm256_mul_epu32(x_hi, y_hi);
    __m256i cross = _mm256_add_epi64(_mm256_add_epi64(shr32(lolo), _mm256_and_si256(lohi, m32)),
                                     _mm256_and_si256(hilo, m32));
    return _mm256_add_epi64(_mm256_add_epi64(hihi, shr32(cross)),
                            _mm256_add_epi64(shr32(lohi), shr32(hilo)));
}

// Low 64 bits of x * q with q < 2^32.
inline __m256i mullo_by_u32(__m256i x, __m256i q) {
    __m256i lo = _mm256_mul_epu32(x, q);
    __m256i hi = _mm256_mul_epu32(shr32(x), q);
    return _mm256_add_epi64(lo, _mm256_slli_epi64(hi, 32));
}

// (a * b) mod q for lane values < 2^32; Barrett with mu = floor(2^64/q).
inline __m256i mul_mod_barrett(__m256i a, __m256i b, __m256i q, __m256i mu) {
    __m256i p = mul32(a, b);
    __m256i qhat = mulhi64(p, mu);
    __m256i r = _mm256_sub_epi64(p, mullo_by_u32(qhat, q));
    return csub(csub(r, q), q);
}

// (a * w) mod q with precomputed w_shoup = floor(w << 32 / q), w < q.
inline __m256i mul_mod_shoup(__m256i a, __m256i w, __m256i w_shoup, __m256i q) {
    __m256i h = shr32(mul32(a, w_shoup));
    __m256i r = _mm256_sub_epi64(mul32(a, w), mullo_by_u32(h, q));
    return csub(r, q);
}

}  // namespace

void mod_add(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 va = load_widen(a + i), vb = load_widen(b + i);
        store_narrow(out + i, {add_mod(va.lo, vb.lo, q), add_mod(va.hi, vb.hi, q)});
    }
    if (i < n) scalar::mod_add(out + i, a + i, b + i, n - i, m);
}

void mod_sub(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 va = load_widen(a + i), vb = load_widen(b + i);
        store_narrow(out + i, {sub_mod(va.lo, vb.lo, q), sub_mod(va.hi, vb.hi, q)});
    }
    if (i < n) scalar::mod_sub(out + i, a + i, b + i, n - i, m);
}

void mod_mul(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
             const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    const __m256i mu = _mm256_set1_epi64x(std::int64_t(m.barrett_mu()));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 va = load_widen(a + i), vb = load_widen(b + i);
        store_narrow(out + i, {mul_mod_barrett(va.lo, vb.lo, q, mu),
                               mul_mod_barrett(va.hi, vb.hi, q, mu)});
    }
    if (i < n) scalar::mod_mul(out + i, a + i, b + i, n - i, m);
}

void mod_mul_table(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* w,
                   const std::uint32_t* w_shoup, std::size_t n, const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 va = load_widen(a + i), vw = load_widen(w + i), vs = load_widen(w_shoup + i);
        store_narrow(out + i, {mul_mod_shoup(va.lo, vw.lo, vs.lo, q),
                               mul_mod_shoup(va.hi, vw.hi, vs.hi, q)});
    }
    if (i < n) scalar::mod_mul_table(out + i, a + i, w + i, w_shoup + i, n - i, m);
}

void mod_mul_const(std::uint32_t* out, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    const __m256i vw = _mm256_set1_epi64x(std::int64_t(w));
    const __m256i vs = _mm256_set1_epi64x(std::int64_t(w_shoup));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 va = load_widen(a + i);
        store_narrow(out + i,
                     {mul_mod_shoup(va.lo, vw, vs, q), mul_mod_shoup(va.hi, vw, vs, q)});
    }
    if (i < n) scalar::mod_mul_const(out + i, a + i, w, w_shoup, n - i, m);
}

void mod_mac_const(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t w,
                   std::uint32_t w_shoup, std::size_t n, const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    const __m256i vw = _mm256_set1_epi64x(std::int64_t(w));
    const __m256i vs = _mm256_set1_epi64x(std::int64_t(w_shoup));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 va = load_widen(a + i), vc = load_widen(acc + i);
        __m256i tlo = mul_mod_shoup(va.lo, vw, vs, q);
        __m256i thi = mul_mod_shoup(va.hi, vw, vs, q);
        store_narrow(acc + i, {add_mod(vc.lo, tlo, q), add_mod(vc.hi, thi, q)});
    }
    if (i < n) scalar::mod_mac_const(acc + i, a + i, w, w_shoup, n - i, m);
}

void butterfly_ct_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 vl = load_widen(lo + i), vh = load_widen(hi + i);
        U64x8 vw = load_widen(w + i), vs = load_widen(w_shoup + i);
        __m256i t0 = mul_mod_shoup(vh.lo, vw.lo, vs.lo, q);
        __m256i t1 = mul_mod_shoup(vh.hi, vw.hi, vs.hi, q);
        store_narrow(lo + i, {add_mod(vl.lo, t0, q), add_mod(vl.hi, t1, q)});
        store_narrow(hi + i, {sub_mod(vl.lo, t0, q), sub_mod(vl.hi, t1, q)});
    }
    if (i < n) scalar::butterfly_ct_table(lo + i, hi + i, w + i, w_shoup + i, n - i, m);
}

void butterfly_gs_table(std::uint32_t* lo, std::uint32_t* hi, const std::uint32_t* w,
                        const std::uint32_t* w_shoup, std::size_t n, const Modulus& m) {
    const __m256i q = _mm256_set1_epi64x(std::int64_t(m.value()));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        U64x8 vl = load_widen(lo + i), vh = load_widen(hi + i);
        U64x8 vw = load_widen(w + i), vs = load_widen(w_shoup + i);
        __m256i d0 = sub_mod(vl.lo, vh.lo, q);
        __m256i d1 = sub_mod(vl.hi, vh.hi, q);
        store_narrow(lo + i, {add_mod(vl.lo, vh.lo, q), add_mod(vl.hi, vh.hi, q)});
        store_narrow(hi + i, {mul_mod_shoup(d0, vw.lo, vs.lo, q),
                              mul_mod_shoup(d1, vw.hi, vs.hi, q)});
    }
    if (i < n) scalar::butterfly_gs_table(lo + i, hi + i, w + i, w_shoup + i, n - i, m);
}

}  // namespace fhedse::kernels::avx2

#endif  // FHEDSE_HAVE_AVX2 && __AVX2__
