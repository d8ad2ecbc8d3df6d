// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fhedse/flashsim.hpp"
#include "fhedse/ntt.hpp"
#include "fhedse/transpose.hpp"

using namespace fhedse;

namespace {

WorkloadSpec lola_like() {
    WorkloadSpec wl;
    wl.name = "lola";
    wl.n = 1u << 13;
    wl.levels = 6;
    wl.current_level = 6;
    wl.ops.ntt = 1;
    return wl;
}

WorkloadSpec bootstrap_like() {
    WorkloadSpec wl;
    wl.name = "bootstrap";
    wl.n = 1u << 16;
    wl.levels = 16;
    wl.current_level = 16;
    wl.ops.keyswitch = 1;
    return wl;
}

}  // namespace

TEST_SUITE_BEGIN("flashsim");

TEST_CASE("classification by polynomial degree") {
    WorkloadSpec wl = lola_like();
    CHECK(classify(wl) == WorkloadClass::shallow);
    wl.n = 1u << 14;
    CHECK(classify(wl) == WorkloadClass::shallow);
    wl.n = 1u << 15;
    CHECK(classify(wl) == WorkloadClass::deep);
    wl.n = 1u << 16;
    CHECK(classify(wl) == WorkloadClass::deep);
    wl.n = 1u << 10;
    CHECK_THROWS_AS(classify(wl), UnsupportedDegree);
    wl.n = 1u << 17;
    CHECK_THROWS_AS(classify(wl), UnsupportedDegree);
    wl.n = 3000;
    CHECK_THROWS_AS(classify(wl), UnsupportedDegree);
}

TEST_CASE("zero ops cost zero cycles") {
    FlashArchSpec spec;
    WorkloadSpec wl = lola_like();
    wl.ops = {};
    CHECK(shallow_cost(wl, spec).total_cycles == 0);
    WorkloadSpec deep = bootstrap_like();
    deep.ops = {};
    CHECK(deep_cost(deep, spec).total_cycles == 0);
}

TEST_CASE("one 8192-point NTT on an affiliation's four lanes") {
    FlashArchSpec spec;
    WorkloadSpec wl;
    wl.name = "single-ntt";
    wl.n = 8192;
    wl.levels = 1;
    wl.current_level = 1;
    wl.ops.ntt = 1;
    // group form with G = 4 lanes, R = 128:
    // d1 = 7*22 + 8192/(128*4) = 170, d2 = 6*22 + 16 = 148, + 17 + 32
    CHECK(shallow_cost(wl, spec).total_cycles == 367);
    // the lane count comes from one halving of the 2^8 circuit plus 2 swifts
    CHECK(decompose_pipeline(spec.boot_log_n, spec.swift_log_n).lanes + 2 == 4);
}

TEST_CASE("two independent NTTs cost at most twice one") {
    FlashArchSpec spec;
    WorkloadSpec one = lola_like();
    WorkloadSpec two = lola_like();
    two.ops.ntt = 2;
    CHECK(shallow_cost(two, spec).total_cycles <= 2 * shallow_cost(one, spec).total_cycles);
}

TEST_CASE("shallow workloads reject key-switching ops") {
    FlashArchSpec spec;
    WorkloadSpec wl = lola_like();
    wl.ops.keyswitch = 1;
    CHECK_THROWS_AS(shallow_cost(wl, spec), InvariantViolation);
}

TEST_CASE("oversized working set does not fit the affiliation") {
    FlashArchSpec spec;
    WorkloadSpec wl = lola_like();
    wl.working_set_bytes = spec.l1_cache_bytes + 1;
    CHECK_THROWS_AS(shallow_cost(wl, spec), DoesNotFitAffiliation);
}

TEST_CASE("degraded swift-only mode is slower") {
    FlashArchSpec spec;
    WorkloadSpec wl = lola_like();
    CHECK(shallow_cost(wl, spec, true).total_cycles > shallow_cost(wl, spec).total_cycles);
}

TEST_CASE("deep key-switch delegates to the group model at G=8, R=256") {
    FlashArchSpec spec;
    WorkloadSpec wl = bootstrap_like();
    GroupArchSpec g;
    g.n = wl.n;
    g.levels = wl.levels;
    g.current_level = wl.current_level;
    g.groups = 8;
    g.r = 256;
    g.alpha = spec.alpha;
    g.latency = spec.latency;
    CHECK(deep_cost(wl, spec).total_cycles == keyswitch_pipeline_cost(g).total_cycles);
    CHECK(deep_cost(wl, spec).total_cycles == 2868);
}

TEST_CASE("doubling the key-switch count doubles that phase") {
    FlashArchSpec spec;
    WorkloadSpec one = bootstrap_like();
    WorkloadSpec two = bootstrap_like();
    two.ops.keyswitch = 2;
    CHECK(deep_cost(two, spec).phase("keyswitch") == 2 * deep_cost(one, spec).phase("keyswitch"));
}

TEST_CASE("memory penalty capacity model") {
    FlashArchSpec spec;
    WorkloadSpec wl = bootstrap_like();
    wl.working_set_bytes = 100ull << 20;
    CHECK(memory_penalty(wl, spec) == 0);
    wl.working_set_bytes = spec.total_cache_bytes;  // boundary inclusive
    CHECK(memory_penalty(wl, spec) == 0);
    // 1 GiB overflow at 1024 GiB/s and 1 GHz
    wl.working_set_bytes = spec.total_cache_bytes + (1ull << 30);
    CHECK(memory_penalty(wl, spec) == 976563);  // ceil(2^30 * 1e9 / 2^40)
}

TEST_CASE("memory penalty is monotone in cache size and working set") {
    FlashArchSpec spec;
    WorkloadSpec wl = bootstrap_like();
    std::uint64_t prev = 0;
    for (std::uint64_t ws = 300ull << 20; ws <= 400ull << 20; ws += 25ull << 20) {
        wl.working_set_bytes = ws;
        std::uint64_t pen = memory_penalty(wl, spec);
        CHECK(pen >= prev);
        prev = pen;
    }
    wl.working_set_bytes = 400ull << 20;
    FlashArchSpec bigger = spec;
    bigger.total_cache_bytes = 512ull << 20;
    CHECK(memory_penalty(wl, bigger) <= memory_penalty(wl, spec));
}

TEST_CASE("shallow traffic stays inside one affiliation") {
    // route the shallow four-step column flow through the transpose fabric:
    // every global port it touches belongs to the shallow (L2) level
    PortStream cols(128, 64);
    for (std::size_t c = 0; c < 64; ++c) {
        for (std::size_t r = 0; r < 128; ++r) {
            cols.frames[c][r] = TransposeElement{0, std::uint32_t(r), std::uint32_t(c), 0};
        }
    }
    auto parts = distribute(cols, WiringMode::shallow, 8192);
    MultiLevelWiring wiring{WiringMode::shallow};
    for (std::size_t cl = 0; cl < parts.size(); ++cl) {
        for (std::size_t i = 0; i < wiring.l1_ports_per_cluster(); ++i) {
            CHECK(wiring.global_port(i, cl) < wiring.ports());
        }
    }
}

TEST_CASE("measured transpose depth feeds the latency constants") {
    LatencyConstants lat = latency_with_measured_transpose();
    CHECK(lat.t_transpose == measured_l1_latency(kL1Ports));
    CHECK(lat.t_transpose == 36);  // 31-cycle delay-line fill + 5 stages
    // the ratio bands still hold under the measured constant
    GroupArchSpec g;
    g.latency = lat;
    GridArchSpec d;
    double ratio = double(keyswitch_pipeline_cost(d).total_cycles) /
                   double(keyswitch_pipeline_cost(g).total_cycles);
    CHECK(ratio > 2.5);
    CHECK(ratio < 3.5);
}

TEST_CASE("workload and spec config round-trip") {
    ConfigMap cfg = ConfigMap::parse(
        "name=test\nn=8192\nlevels=6\nops.ntt=3\nops.mul=2\npriority=7\narrival=12\n"
        "working_set_bytes=1024\n");
    WorkloadSpec wl = workload_from_config(cfg);
    CHECK(wl.name == "test");
    CHECK(wl.n == 8192);
    CHECK(wl.levels == 6);
    CHECK(wl.current_level == 6);  // defaults to levels
    CHECK(wl.ops.ntt == 3);
    CHECK(wl.ops.mul == 2);
    CHECK(wl.priority == 7);
    CHECK(wl.arrival == 12);

    ConfigMap arch = ConfigMap::parse("flash.affiliations=4\nlatency.t_butterfly=11\n");
    FlashArchSpec spec = flash_spec_from_config(arch);
    CHECK(spec.affiliations == 4);
    CHECK(spec.latency.t_butterfly == 11);
    CHECK(spec.l1_cache_bytes == 8ull << 20);
}

TEST_SUITE_END();
