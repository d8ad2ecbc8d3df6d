// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fhedse/biguint.hpp"
#include "fhedse/modulus.hpp"

namespace fhedse {

/// Ordered set of pairwise co-prime word-sized moduli.
class RnsBasis {
public:
    explicit RnsBasis(std::vector<Modulus> moduli);
    explicit RnsBasis(const std::vector<std::uint32_t>& qs);
    RnsBasis(std::initializer_list<std::uint32_t> qs)
        : RnsBasis(std::vector<std::uint32_t>(qs)) {}

    std::size_t size() const { return moduli_.size(); }
    const Modulus& operator[](std::size_t i) const { return moduli_[i]; }
    const std::vector<Modulus>& moduli() const { return moduli_; }

    /// Product of all moduli. Reference/test path only.
    BigUint product() const;

private:
    std::vector<Modulus> moduli_;
};

enum class PolyDomain { coefficient, ntt };

/// A length-N polynomial held residue-wise: one coefficient row per modulus.
/// Rows hold canonical residues (< q_i); writers are responsible for keeping
/// them canonical.
struct RnsPolynomial {
    RnsPolynomial(RnsBasis basis, std::size_t n, PolyDomain domain = PolyDomain::coefficient);

    std::size_t n() const { return n_; }
    const RnsBasis& basis() const { return basis_; }
    PolyDomain domain() const { return domain_; }
    void set_domain(PolyDomain d) { domain_ = d; }

    std::vector<std::uint32_t>& row(std::size_t i) { return rows_[i]; }
    const std::vector<std::uint32_t>& row(std::size_t i) const { return rows_[i]; }

private:
    RnsBasis basis_;
    std::size_t n_;
    PolyDomain domain_;
    std::vector<std::vector<std::uint32_t>> rows_;
};

/// Residue-wise decomposition of coefficients in [0, Q).
/// Throws CoefficientOutOfRange if any coefficient is >= Q.
RnsPolynomial rns_decompose(const std::vector<BigUint>& big_coeffs, const RnsBasis& basis);

/// Exact CRT reconstruction; inverse of rns_decompose.
std::vector<BigUint> crt_reconstruct(const RnsPolynomial& poly);

/// Fast (approximate) basis conversion. For a coefficient x with residues
/// x_i, each output residue is
///     sum_i [x_i * (Q/q_i)^-1]_{q_i} * (Q/q_i)  mod p_j
/// which equals x + e*Q mod p_j for some e in [0, source basis size).
/// The polynomial must be in coefficient form (WrongDomain otherwise); the
/// runtime path below is residue-only — no big-integer arithmetic.
RnsPolynomial bconv(const RnsPolynomial& poly, const RnsBasis& target);

}  // namespace fhedse
