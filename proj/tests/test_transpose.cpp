// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <sstream>

#include "fhedse/transpose.hpp"
#include "fhedse/selftest.hpp"

using namespace fhedse;

TEST_SUITE_BEGIN("transpose");

TEST_CASE("d=1 is the identity stream") {
    PortStream in = make_tile_stream(kL1Ports, 1, 4);
    L1Result res = l1_transpose(in, 1);
    CHECK(res.out.frames == in.frames);
    CHECK(res.latency == 0);
}

TEST_CASE("2x2 tiles transpose") {
    PortStream in = make_tile_stream(kL1Ports, 2, 1);
    L1Result res = l1_transpose(in, 2);
    // element (r, c) of each tile emerges at (c, r)
    for (std::size_t f = 0; f < 2; ++f) {
        for (std::size_t p = 0; p < kL1Ports; ++p) {
            const auto& e = res.out.frames[f][p];
            REQUIRE(e.has_value());
            CHECK(e->row == p % 2);
            CHECK(e->col == f % 2);
            CHECK(e->tile == p / 2);
        }
    }
    CHECK(res.latency == 2);  // fill 1 + one stage
}

TEST_CASE("full suite over all tile sizes") {
    auto results = run_transpose_checks({});
    for (const auto& r : results) {
        INFO(r.name, ": ", r.failures, " of ", r.cases);
        CHECK(r.passed());
    }
}

TEST_CASE("d=32 exhaustive tag check covers 1024 positions") {
    PortStream in = make_tile_stream(kL1Ports, 32, 1);
    L1Result res = l1_transpose(in, 32);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::size_t f = 0; f < 32; ++f) {
        for (std::size_t p = 0; p < 32; ++p) {
            const auto& e = res.out.frames[f][p];
            REQUIRE(e.has_value());
            CHECK(e->row == p);
            CHECK(e->col == f);
            seen.insert({e->row, e->col});
        }
    }
    CHECK(seen.size() == 1024);
    CHECK(res.latency == 31 + 5);
}

TEST_CASE("latency accounting") {
    CHECK(measured_l1_latency(1) == 0);
    CHECK(measured_l1_latency(4) == 3 + 2);
    CHECK(measured_l1_latency(32) == 36);
    CHECK_THROWS_AS(measured_l1_latency(3), BadTileSize);
    CHECK_THROWS_AS(measured_l1_latency(64), BadTileSize);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(l1_transpose(make_tile_stream(kL1Ports, 4, 1), 3), BadTileSize);
    PortStream narrow(16, 4);
    CHECK_THROWS_AS(l1_transpose(narrow, 4), IncompleteTile);
    PortStream misaligned = make_tile_stream(kL1Ports, 4, 1);
    misaligned.frames.pop_back();
    CHECK_THROWS_AS(l1_transpose(misaligned, 4), IncompleteTile);
    PortStream holes = make_tile_stream(kL1Ports, 4, 1);
    holes.frames[0][0].reset();
    CHECK_THROWS_AS(l1_transpose(holes, 4), IncompleteTile);
}

TEST_CASE("trace dump emits one frame log line per active cycle") {
    PortStream in = make_tile_stream(kL1Ports, 2, 1);
    std::ostringstream trace;
    l1_transpose(in, 2, &trace);
    std::size_t lines = 0;
    std::string s = trace.str();
    for (char c : s) lines += (c == '\n');
    // 2 input frames skewed over 32 ports enter across 2 + 31 cycles
    CHECK(lines == in.frames.size() + kL1Ports - 1);
    CHECK(s.find("\"cycle\":0,") != std::string::npos);
    CHECK(s.find("\"enter\":[") != std::string::npos);
}

TEST_CASE("route formulas") {
    CHECK(route_l2(0, 3) == 3);
    CHECK(route_l2(7, 2) == 30);
    CHECK(route_l3(100, 5) == 805);
    CHECK_THROWS_AS(route_l2(128, 0), PortOutOfRange);
    CHECK_THROWS_AS(route_l2(0, 4), PortOutOfRange);
    CHECK_THROWS_AS(route_l3(256, 0), PortOutOfRange);
    CHECK_THROWS_AS(route_l3(0, 8), PortOutOfRange);
}

TEST_CASE("wiring is a bijection onto the level's ports") {
    for (WiringMode mode : {WiringMode::shallow, WiringMode::deep}) {
        MultiLevelWiring w{mode};
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < w.l1_ports_per_cluster(); ++i) {
            for (std::size_t j = 0; j < cluster_count(mode); ++j) {
                std::size_t g = w.global_port(i, j);
                CHECK(g < w.ports());
                CHECK(seen.insert(g).second);
            }
        }
        CHECK(seen.size() == w.ports());
    }
}

TEST_CASE("distribute examples") {
    PortStream cols(128, 64);
    for (std::size_t c = 0; c < 64; ++c) {
        for (std::size_t r = 0; r < 128; ++r) {
            cols.frames[c][r] = TransposeElement{0, std::uint32_t(r), std::uint32_t(c), 0};
        }
    }
    auto parts = distribute(cols, WiringMode::shallow, 8192);
    REQUIRE(parts.size() == 4);
    // column 5 -> cluster 1, second frame there (after column 1)
    REQUIRE(parts[1].frames.size() == 16);
    CHECK(parts[1].frames[1][0]->col == 5);

    // 4 columns, one per cluster
    PortStream four(128, 4);
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t r = 0; r < 128; ++r) {
            four.frames[c][r] = TransposeElement{0, std::uint32_t(r), std::uint32_t(c), 0};
        }
    }
    auto one_each = distribute(four, WiringMode::shallow, 512);
    for (const auto& part : one_each) CHECK(part.frames.size() == 1);

    CHECK_THROWS_AS(distribute(four, WiringMode::shallow, 511), BadMode);
}

TEST_SUITE_END();
