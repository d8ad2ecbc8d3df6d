// SPDX-License-Identifier: Apache-2.0
#include "fhedse/biguint.hpp"

#include <algorithm>

#include "fhedse/errors.hpp"

namespace fhedse {

BigUint::BigUint(std::uint64_t v) {
    if (v != 0) limbs_.push_back(std::uint32_t(v));
    if (v >> 32) limbs_.push_back(std::uint32_t(v >> 32));
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

std::size_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    std::uint32_t top = limbs_.back();
    std::size_t bits = (limbs_.size() - 1) * 32;
    while (top != 0) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

int BigUint::compare(const BigUint& other) const {
    if (limbs_.size() != other.limbs_.size()) {
        return limbs_.size() < other.limbs_.size() ? -1 : 1;
    }
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigUint& BigUint::add(const BigUint& other) {
    limbs_.resize(std::max(limbs_.size(), other.limbs_.size()), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t s = carry + limbs_[i] + (i < other.limbs_.size() ? other.limbs_[i] : 0);
        limbs_[i] = std::uint32_t(s);
        carry = s >> 32;
    }
    if (carry) limbs_.push_back(std::uint32_t(carry));
    return *this;
}

BigUint& BigUint::sub(const BigUint& other) {
    if (compare(other) < 0) throw InvariantViolation("BigUint::sub would underflow");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::int64_t d = std::int64_t(limbs_[i]) - borrow -
                         (i < other.limbs_.size() ? std::int64_t(other.limbs_[i]) : 0);
        if (d < 0) {
            d += std::int64_t(1) << 32;
            borrow = 1;
        } else {
            borrow = 0;
        }
        limbs_[i] = std::uint32_t(d);
    }
    trim();
    return *this;
}

BigUint& BigUint::mul_small(std::uint32_t f) {
    if (f == 0) {
        limbs_.clear();
        return *this;
    }
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        std::uint64_t p = std::uint64_t(limb) * f + carry;
        limb = std::uint32_t(p);
        carry = p >> 32;
    }
    if (carry) limbs_.push_back(std::uint32_t(carry));
    return *this;
}

BigUint& BigUint::add_small(std::uint32_t v) {
    return add(BigUint(v));
}

std::uint32_t BigUint::mod_small(std::uint32_t m) const {
    std::uint64_t r = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        r = ((r << 32) | limbs_[i]) % m;
    }
    return std::uint32_t(r);
}

std::uint32_t BigUint::divmod_small(std::uint32_t d) {
    std::uint64_t r = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        std::uint64_t cur = (r << 32) | limbs_[i];
        limbs_[i] = std::uint32_t(cur / d);
        r = cur % d;
    }
    trim();
    return std::uint32_t(r);
}

bool BigUint::bit(std::size_t i) const {
    std::size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1;
}

void BigUint::set_bit(std::size_t i) {
    std::size_t limb = i / 32;
    if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
    limbs_[limb] |= std::uint32_t(1) << (i % 32);
}

std::uint64_t BigUint::to_u64() const {
    if (limbs_.size() > 2) throw InvariantViolation("BigUint does not fit in 64 bits");
    std::uint64_t v = 0;
    if (limbs_.size() > 1) v = std::uint64_t(limbs_[1]) << 32;
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
}

std::string BigUint::to_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) {
        std::uint32_t r = tmp.divmod_small(1000000000u);
        std::string chunk = std::to_string(r);
        if (!tmp.is_zero()) chunk.insert(0, 9 - chunk.size(), '0');
        out.insert(0, chunk);
    }
    return out;
}

}  // namespace fhedse
