// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fhedse {

/// Minimal unsigned big integer (little-endian 32-bit limbs).
///
/// Backs the RNS reference path (decompose, CRT reconstruction) and the test
/// oracles. The runtime basis-conversion kernel never touches it.
class BigUint {
public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v);

    static BigUint one() { return BigUint(1); }

    bool is_zero() const { return limbs_.empty(); }
    std::size_t bit_length() const;

    // -1 / 0 / +1 for < / == / >
    int compare(const BigUint& other) const;
    bool operator==(const BigUint& other) const { return compare(other) == 0; }
    bool operator<(const BigUint& other) const { return compare(other) < 0; }
    bool operator>=(const BigUint& other) const { return compare(other) >= 0; }

    BigUint& add(const BigUint& other);
    /// Requires *this >= other.
    BigUint& sub(const BigUint& other);
    BigUint& mul_small(std::uint32_t f);
    BigUint& add_small(std::uint32_t v);

    std::uint32_t mod_small(std::uint32_t m) const;
    /// In-place divide by a small divisor; returns the remainder.
    std::uint32_t divmod_small(std::uint32_t d);

    /// Value of bit i (0 = least significant).
    bool bit(std::size_t i) const;
    void set_bit(std::size_t i);

    std::uint64_t to_u64() const;  // throws if it does not fit
    std::string to_string() const;

    const std::vector<std::uint32_t>& limbs() const { return limbs_; }

private:
    void trim();
    std::vector<std::uint32_t> limbs_;
};

}  // namespace fhedse
