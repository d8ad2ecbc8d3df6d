// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "fhedse/modulus.hpp"

using namespace fhedse;

TEST_SUITE_BEGIN("modarith");

TEST_CASE("mod_mul basics") {
    Modulus q17(17);
    CHECK(mod_mul(0, 9, q17) == 0);
    CHECK(mod_mul(1, 9, q17) == 9);
    CHECK(mod_mul(7, 9, q17) == 12);  // 63 mod 17
}

TEST_CASE("mod_mul agrees with 128-bit reduction on random inputs") {
    for (std::uint32_t qv : {17u, 7681u, 2013265921u, 4293918721u}) {
        Modulus m(qv);
        std::mt19937_64 rng(qv);
        std::uniform_int_distribution<std::uint32_t> dist(0, qv - 1);
        for (int i = 0; i < 100000; ++i) {
            std::uint32_t a = dist(rng), b = dist(rng);
            std::uint32_t expect =
                std::uint32_t((unsigned __int128)a * b % qv);
            std::uint32_t got = mod_mul(a, b, m);
            REQUIRE(got == expect);
            REQUIRE(got < qv);
        }
    }
}

TEST_CASE("butterflies") {
    Modulus q17(17);
    SUBCASE("b = 0 collapses") {
        auto [u, v] = butterfly_ct(5, 0, 3, q17);
        CHECK(u == 5);
        CHECK(v == 5);
    }
    SUBCASE("direct evaluation") {
        auto [u, v] = butterfly_ct(3, 4, 1, q17);
        CHECK(u == 7);
        CHECK(v == 16);
        auto [u2, v2] = butterfly_ct(5, 2, 3, q17);
        CHECK(u2 == 11);
        CHECK(v2 == 16);
    }
    SUBCASE("gs undoes ct up to doubling, exhaustively") {
        // w = 4 is a primitive 4th root mod 17 (4^2 = 16 = -1)
        const ZqElement w = 4;
        const ZqElement w_inv = q17.inv(w);
        const ZqElement half = q17.inv(2);
        for (ZqElement a = 0; a < 17; ++a) {
            for (ZqElement b = 0; b < 17; ++b) {
                auto [u, v] = butterfly_ct(a, b, w, q17);
                auto [x, y] = butterfly_gs(u, v, w_inv, q17);
                CHECK(q17.mul(x, half) == a);
                CHECK(q17.mul(y, half) == b);
            }
        }
    }
}

TEST_CASE("canonicality on randomized inputs") {
    Modulus m(7681);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint32_t> dist(0, 7680);
    for (int i = 0; i < 20000; ++i) {
        std::uint32_t a = dist(rng), b = dist(rng), w = dist(rng);
        CHECK(m.add(a, b) < 7681);
        CHECK(m.sub(a, b) < 7681);
        CHECK(m.mul(a, b) < 7681);
        auto [u, v] = butterfly_ct(a, b, w, m);
        CHECK(u < 7681);
        CHECK(v < 7681);
    }
}

TEST_CASE("primitive roots of unity") {
    Modulus q17(17);
    CHECK(primitive_root_of_unity(2, q17) == 16);  // -1 is the unique 2nd root
    ZqElement w4 = primitive_root_of_unity(4, q17);
    CHECK((w4 == 4 || w4 == 13));
    CHECK(q17.pow(w4, 4) == 1);
    CHECK(q17.pow(w4, 2) == 16);

    Modulus q13(13);
    CHECK_THROWS_AS(primitive_root_of_unity(8, q13), NoSuchRoot);  // 8 does not divide 12
}

TEST_CASE("modulus requires a prime") {
    CHECK_THROWS_AS(Modulus(15), InvariantViolation);
    CHECK_THROWS_AS(Modulus(0), InvariantViolation);
    CHECK_THROWS_AS(Modulus(1), InvariantViolation);
}

TEST_CASE("ntt-friendly prime search") {
    auto ms = find_ntt_moduli(3, std::uint64_t(1) << 16);
    CHECK(ms.size() == 3);
    for (const Modulus& m : ms) {
        CHECK(m.value() < (1ull << 31));
        CHECK((m.value() - 1) % (1ull << 17) == 0);
        CHECK(is_prime(m.value()));
        // a root of order 2*N_max exists and is primitive
        ZqElement w = primitive_root_of_unity(1ull << 17, m);
        CHECK(m.pow(w, 1ull << 17) == 1);
        CHECK(m.pow(w, 1ull << 16) == m.value() - 1);
    }
}

TEST_SUITE_END();
