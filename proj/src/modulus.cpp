// SPDX-License-Identifier: Apache-2.0
#include "fhedse/modulus.hpp"

#include <array>

namespace fhedse {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return std::uint64_t((unsigned __int128)a * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Distinct prime factors by trial division; q - 1 < 2^32 so this is cheap.
std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

Modulus::Modulus(std::uint32_t q) : q_(q) {
    if (q < 2 || !is_prime(q)) {
        throw InvariantViolation("modulus must be a prime in [2, 2^32): got " + std::to_string(q));
    }
    mu_ = std::uint64_t(((unsigned __int128)1 << 64) / q);
}

ZqElement Modulus::pow(ZqElement base, std::uint64_t exp) const noexcept {
    std::uint64_t r = 1 % q_;
    std::uint64_t b = base % q_;
    while (exp != 0) {
        if (exp & 1) r = (r * b) % q_;
        b = (b * b) % q_;
        exp >>= 1;
    }
    return ZqElement(r);
}

ZqElement Modulus::inv(ZqElement a) const {
    if (a == 0) throw InvariantViolation("0 has no inverse");
    return pow(a, q_ - 2);  // q prime
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic for all n < 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

ZqElement primitive_root_of_unity(std::uint64_t order, const Modulus& m) {
    const std::uint64_t q = m.value();
    if (order == 0 || (q - 1) % order != 0) {
        throw NoSuchRoot("order " + std::to_string(order) + " does not divide q-1 for q=" +
                         std::to_string(q));
    }
    if (order == 1) return 1;
    // Find a generator of Z_q^* and project it onto the order-sized subgroup.
    const auto factors = prime_factors(q - 1);
    ZqElement g = 0;
    for (std::uint32_t cand = 2; cand < q; ++cand) {
        bool generator = true;
        for (std::uint64_t p : factors) {
            if (m.pow(ZqElement(cand), (q - 1) / p) == 1) {
                generator = false;
                break;
            }
        }
        if (generator) {
            g = ZqElement(cand);
            break;
        }
    }
    ZqElement w = m.pow(g, (q - 1) / order);
    return w;
}

std::vector<Modulus> find_ntt_moduli(std::size_t count, std::uint64_t n) {
    if (n == 0 || (n & (n - 1)) != 0) throw BadSize("transform size must be a power of two");
    const std::uint64_t step = 2 * n;
    std::vector<Modulus> out;
    std::uint64_t k = ((std::uint64_t(1) << 31) - 2) / step;
    for (; k >= 1 && out.size() < count; --k) {
        std::uint64_t q = k * step + 1;
        if (is_prime(q)) out.emplace_back(std::uint32_t(q));
    }
    if (out.size() < count) {
        throw NoSuchRoot("not enough NTT-friendly primes below 2^31 for n=" + std::to_string(n));
    }
    return out;
}

}  // namespace fhedse
