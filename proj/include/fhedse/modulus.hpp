// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fhedse/errors.hpp"

namespace fhedse {

/// Canonical residue in [0, q). All public functions take and return
/// canonical representatives; there is no lazy/non-canonical form in the API.
using ZqElement = std::uint32_t;

/// A word-sized prime modulus with precomputed reduction constants.
///
/// q must be prime and fit in 32 bits. Intermediate products use the 64-bit
/// range; the Barrett constant floor(2^64 / q) backs the vectorized
/// variable-by-variable reduction, and per-constant Shoup companions
/// (floor(w * 2^32 / q)) back multiplication by precomputed tables.
class Modulus {
public:
    explicit Modulus(std::uint32_t q);

    std::uint32_t value() const noexcept { return q_; }
    std::uint64_t barrett_mu() const noexcept { return mu_; }

    ZqElement add(ZqElement a, ZqElement b) const noexcept {
        std::uint64_t s = std::uint64_t(a) + b;
        return ZqElement(s >= q_ ? s - q_ : s);
    }

    ZqElement sub(ZqElement a, ZqElement b) const noexcept {
        return a >= b ? a - b : ZqElement(std::uint64_t(a) + q_ - b);
    }

    ZqElement neg(ZqElement a) const noexcept { return a == 0 ? 0 : q_ - a; }

    ZqElement mul(ZqElement a, ZqElement b) const noexcept {
        return ZqElement((std::uint64_t(a) * b) % q_);
    }

    ZqElement pow(ZqElement base, std::uint64_t exp) const noexcept;

    /// Multiplicative inverse; throws InvariantViolation for a == 0.
    ZqElement inv(ZqElement a) const;

    /// Shoup companion of a canonical constant w: floor(w << 32 / q).
    std::uint32_t shoup(ZqElement w) const noexcept {
        return std::uint32_t((std::uint64_t(w) << 32) / q_);
    }

    bool operator==(const Modulus& other) const noexcept { return q_ == other.q_; }

private:
    std::uint32_t q_;
    std::uint64_t mu_;  // floor(2^64 / q)
};

/// mod_mul is the unit of compute accounting throughout the cycle models:
/// one call corresponds to one 32-bit modular multiplier.
inline ZqElement mod_mul(ZqElement a, ZqElement b, const Modulus& m) noexcept {
    return m.mul(a, b);
}

/// Cooley-Tukey butterfly: (a + w*b, a - w*b) mod q.
inline std::pair<ZqElement, ZqElement> butterfly_ct(ZqElement a, ZqElement b, ZqElement w,
                                                    const Modulus& m) noexcept {
    ZqElement t = m.mul(w, b);
    return {m.add(a, t), m.sub(a, t)};
}

/// Gentleman-Sande butterfly: (a + b, (a - b)*w) mod q.
inline std::pair<ZqElement, ZqElement> butterfly_gs(ZqElement a, ZqElement b, ZqElement w,
                                                    const Modulus& m) noexcept {
    return {m.add(a, b), m.mul(m.sub(a, b), w)};
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Primitive root of unity of exactly the given order.
/// Requires order | (q - 1); throws NoSuchRoot otherwise.
ZqElement primitive_root_of_unity(std::uint64_t order, const Modulus& m);

/// Searches downward from below 2^31 for primes q with q ≡ 1 (mod 2n),
/// i.e. NTT-friendly for negacyclic transforms of size up to n.
std::vector<Modulus> find_ntt_moduli(std::size_t count, std::uint64_t n);

}  // namespace fhedse
