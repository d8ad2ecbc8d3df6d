// SPDX-License-Identifier: Apache-2.0
#include "fhedse/rns.hpp"

#include <numeric>
#include <string>

#include "fhedse/errors.hpp"
#include "fhedse/kernels.hpp"

namespace fhedse {

RnsBasis::RnsBasis(std::vector<Modulus> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw InvariantViolation("RNS basis must contain at least one modulus");
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        for (std::size_t j = i + 1; j < moduli_.size(); ++j) {
            if (std::gcd(std::uint64_t(moduli_[i].value()), std::uint64_t(moduli_[j].value())) !=
                1) {
                throw InvariantViolation("RNS moduli must be pairwise co-prime");
            }
        }
    }
}

RnsBasis::RnsBasis(const std::vector<std::uint32_t>& qs)
    : RnsBasis([&] {
          std::vector<Modulus> ms;
          ms.reserve(qs.size());
          for (std::uint32_t q : qs) ms.emplace_back(q);
          return ms;
      }()) {}

BigUint RnsBasis::product() const {
    BigUint q(1);
    for (const Modulus& m : moduli_) q.mul_small(m.value());
    return q;
}

RnsPolynomial::RnsPolynomial(RnsBasis basis, std::size_t n, PolyDomain domain)
    : basis_(std::move(basis)), n_(n), domain_(domain) {
    if (n == 0 || (n & (n - 1)) != 0) {
        throw InvariantViolation("polynomial length must be a power of two");
    }
    rows_.assign(basis_.size(), std::vector<std::uint32_t>(n, 0));
}

RnsPolynomial rns_decompose(const std::vector<BigUint>& big_coeffs, const RnsBasis& basis) {
    const BigUint q_total = basis.product();
    for (std::size_t k = 0; k < big_coeffs.size(); ++k) {
        if (big_coeffs[k] >= q_total) {
            throw CoefficientOutOfRange("coefficient " + std::to_string(k) + " is >= Q");
        }
    }
    RnsPolynomial out(basis, big_coeffs.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::uint32_t q = basis[i].value();
        auto& row = out.row(i);
        for (std::size_t k = 0; k < big_coeffs.size(); ++k) {
            row[k] = big_coeffs[k].mod_small(q);
        }
    }
    return out;
}

std::vector<BigUint> crt_reconstruct(const RnsPolynomial& poly) {
    const RnsBasis& basis = poly.basis();
    const std::size_t levels = basis.size();
    const BigUint q_total = basis.product();

    // Q/q_i and [(Q/q_i)^-1]_{q_i}
    std::vector<BigUint> q_hat(levels);
    std::vector<std::uint32_t> q_hat_inv(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        BigUint h(1);
        for (std::size_t j = 0; j < levels; ++j) {
            if (j != i) h.mul_small(basis[j].value());
        }
        q_hat_inv[i] = basis[i].inv(h.mod_small(basis[i].value()));
        q_hat[i] = std::move(h);
    }

    std::vector<BigUint> out(poly.n());
    for (std::size_t k = 0; k < poly.n(); ++k) {
        BigUint acc(0);
        for (std::size_t i = 0; i < levels; ++i) {
            std::uint32_t y = basis[i].mul(poly.row(i)[k], q_hat_inv[i]);
            BigUint term = q_hat[i];
            term.mul_small(y);
            acc.add(term);
        }
        // acc < levels * Q, so a short subtraction loop suffices
        while (acc >= q_total) acc.sub(q_total);
        out[k] = std::move(acc);
    }
    return out;
}

RnsPolynomial bconv(const RnsPolynomial& poly, const RnsBasis& target) {
    if (poly.domain() != PolyDomain::coefficient) {
        throw WrongDomain("bconv requires coefficient form; apply the inverse transform first");
    }
    const RnsBasis& src = poly.basis();
    const std::size_t levels = src.size();
    const std::size_t n = poly.n();

    // [(Q/q_i)^-1]_{q_i} via residue products only
    std::vector<std::uint32_t> q_hat_inv(levels), q_hat_inv_shoup(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        const Modulus& qi = src[i];
        std::uint32_t prod = 1;
        for (std::size_t j = 0; j < levels; ++j) {
            if (j != i) prod = qi.mul(prod, src[j].value() % qi.value());
        }
        q_hat_inv[i] = qi.inv(prod);
        q_hat_inv_shoup[i] = qi.shoup(q_hat_inv[i]);
    }

    RnsPolynomial out(target, n, PolyDomain::coefficient);
    std::vector<std::uint32_t> scaled(n);
    std::vector<std::vector<std::uint32_t>> scaled_rows(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        scaled_rows[i].resize(n);
        kernels::mod_mul_const(scaled_rows[i].data(), poly.row(i).data(), q_hat_inv[i],
                               q_hat_inv_shoup[i], n, src[i]);
    }

    for (std::size_t j = 0; j < target.size(); ++j) {
        const Modulus& pj = target[j];
        auto& dst = out.row(j);
        for (std::size_t i = 0; i < levels; ++i) {
            // (Q/q_i) mod p_j as a plain residue product
            std::uint32_t factor = 1;
            for (std::size_t kq = 0; kq < levels; ++kq) {
                if (kq != i) factor = pj.mul(factor, src[kq].value() % pj.value());
            }
            // residues of q_i may exceed p_j; fold them before the MAC
            if (src[i].value() >= pj.value()) {
                for (std::size_t k = 0; k < n; ++k) scaled[k] = scaled_rows[i][k] % pj.value();
                kernels::mod_mac_const(dst.data(), scaled.data(), factor, pj.shoup(factor), n,
                                       pj);
            } else {
                kernels::mod_mac_const(dst.data(), scaled_rows[i].data(), factor,
                                       pj.shoup(factor), n, pj);
            }
        }
    }
    return out;
}

}  // namespace fhedse
