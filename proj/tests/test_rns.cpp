// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "fhedse/rns.hpp"
#include "fhedse/selftest.hpp"

using namespace fhedse;

TEST_SUITE_BEGIN("rns");

TEST_CASE("basis validation") {
    CHECK_THROWS_AS(RnsBasis(std::vector<std::uint32_t>{}), InvariantViolation);
    CHECK_THROWS_AS(RnsBasis({5, 5}), InvariantViolation);
    RnsBasis b({5, 7});
    CHECK(b.product().to_u64() == 35);
}

TEST_CASE("decompose examples") {
    RnsBasis b({5, 7});
    SUBCASE("zero") {
        auto p = rns_decompose({BigUint(0)}, b);
        CHECK(p.row(0)[0] == 0);
        CHECK(p.row(1)[0] == 0);
    }
    SUBCASE("scalar 12") {
        auto p = rns_decompose({BigUint(12)}, b);
        CHECK(p.row(0)[0] == 2);
        CHECK(p.row(1)[0] == 5);
    }
    SUBCASE("out of range") {
        CHECK_THROWS_AS(rns_decompose({BigUint(35)}, b), CoefficientOutOfRange);
    }
}

TEST_CASE("crt reconstruction inverts decomposition") {
    auto results = run_rns_checks({11, 100});
    for (const auto& r : results) {
        INFO(r.name);
        CHECK(r.passed());
    }
}

TEST_CASE("decompose/reconstruct round-trips a whole coefficient vector") {
    RnsBasis b({97, 101, 103});
    std::vector<BigUint> coeffs = {BigUint(0), BigUint(1), BigUint(1009000), BigUint(97 * 101)};
    auto poly = rns_decompose(coeffs, b);
    CHECK(poly.n() == 4);
    CHECK(poly.domain() == PolyDomain::coefficient);
    auto back = crt_reconstruct(poly);
    for (std::size_t i = 0; i < coeffs.size(); ++i) CHECK(back[i] == coeffs[i]);
}

TEST_CASE("bconv small example: {5,7} -> {11}, x=12") {
    RnsBasis src({5, 7});
    RnsBasis dst({11});
    auto out = bconv(rns_decompose({BigUint(12)}, src), dst);
    CHECK(out.row(0)[0] == 1);  // 12 mod 11, e = 0
}

TEST_CASE("bconv of zero is zero") {
    RnsBasis src({5, 7});
    RnsBasis dst({11, 13});
    auto out = bconv(rns_decompose({BigUint(0)}, src), dst);
    CHECK(out.row(0)[0] == 0);
    CHECK(out.row(1)[0] == 0);
}

TEST_CASE("bconv rejects NTT-form input") {
    RnsBasis src({97, 101});
    RnsPolynomial p(src, 4, PolyDomain::ntt);
    CHECK_THROWS_AS(bconv(p, RnsBasis({11})), WrongDomain);
}

TEST_CASE("bconv output is x + e*Q with e below the source basis size") {
    auto results = run_rns_checks({0, 2000});
    for (const auto& r : results) {
        INFO(r.name);
        CHECK(r.passed());
    }
}

TEST_CASE("bconv commutes with coefficient permutation") {
    RnsBasis src({97, 101, 103});
    RnsBasis dst({11, 13});
    std::mt19937_64 rng(5);
    const std::size_t n = 8;
    // random polynomial in residue form
    RnsPolynomial poly(src, n);
    for (std::size_t i = 0; i < src.size(); ++i) {
        std::uniform_int_distribution<std::uint32_t> dist(0, src[i].value() - 1);
        for (auto& x : poly.row(i)) x = dist(rng);
    }
    // permutation: rotate by 3
    RnsPolynomial rotated(src, n);
    for (std::size_t i = 0; i < src.size(); ++i) {
        for (std::size_t k = 0; k < n; ++k) rotated.row(i)[(k + 3) % n] = poly.row(i)[k];
    }
    auto a = bconv(poly, dst);
    auto b = bconv(rotated, dst);
    for (std::size_t j = 0; j < dst.size(); ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(a.row(j)[k] == b.row(j)[(k + 3) % n]);
        }
    }
}

TEST_CASE("biguint basics") {
    BigUint a(0xFFFFFFFFFFFFFFFFull);
    BigUint b = a;
    b.add(BigUint(1));
    CHECK(b.bit_length() == 65);
    CHECK(b.mod_small(1000000007u) ==
          std::uint32_t(((unsigned __int128)1 << 64) % 1000000007u));
    b.sub(BigUint(1));
    CHECK(b == a);
    BigUint c(123456789);
    c.mul_small(987654321);
    CHECK(c.to_string() == "121932631112635269");
    CHECK_THROWS_AS(BigUint(1).sub(BigUint(2)), InvariantViolation);
}

TEST_SUITE_END();
