// SPDX-License-Identifier: Apache-2.0
#include "fhedse/flashsim.hpp"

#include "fhedse/ntt.hpp"
#include "fhedse/transpose.hpp"

namespace fhedse {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Group-style spec for a shallow job on one affiliation's 2^7 lanes.
GroupArchSpec shallow_lanes_spec(const WorkloadSpec& wl, const FlashArchSpec& spec,
                                 bool swift_only) {
    // One halving step of the bootstrappable circuit yields its swift-sized
    // lanes; the affiliation's own swift clusters add two more.
    const std::uint64_t boot_lanes =
        decompose_pipeline(spec.boot_log_n, spec.swift_log_n).lanes;
    GroupArchSpec g;
    g.n = wl.n;
    g.levels = wl.levels;
    g.current_level = wl.current_level;
    g.groups = swift_only ? 2 : boot_lanes + 2;
    g.r = std::uint64_t(1) << spec.swift_log_n;
    g.alpha = 1;  // BConv bypassed; unused
    g.latency = spec.latency;
    return g;
}

GroupArchSpec deep_engine_spec(const WorkloadSpec& wl, const FlashArchSpec& spec) {
    GroupArchSpec g;
    g.n = wl.n;
    g.levels = wl.levels;
    g.current_level = wl.current_level;
    g.groups = spec.affiliations;
    g.r = std::uint64_t(1) << spec.boot_log_n;
    g.alpha = spec.alpha;
    g.latency = spec.latency;
    return g;
}

std::uint64_t elementwise_cost(const GroupArchSpec& g) {
    // one coefficient per lane port per cycle, plus the mul/add pipe depth
    const std::uint64_t width = g.r * g.groups;
    const std::uint64_t work = g.n * g.load_level();
    if (work % width != 0) {
        throw InvariantViolation("elementwise op: N*l not divisible by lane width");
    }
    return work / width + g.latency.t_bconv_pipe;
}

}  // namespace

void FlashArchSpec::validate() const {
    latency.validate();
    if (affiliations == 0) throw InvariantViolation("flash spec: need at least one affiliation");
    if (boot_log_n < swift_log_n) {
        throw InvariantViolation("flash spec: bootstrappable circuit smaller than swift");
    }
    if (l1_cache_bytes == 0 || total_cache_bytes == 0) {
        throw InvariantViolation("flash spec: cache sizes must be positive");
    }
    if (hbm_bandwidth_bytes_per_sec == 0) {
        throw InvariantViolation("flash spec: HBM bandwidth must be positive");
    }
    if (bconv_l_sub == 0) throw InvariantViolation("flash spec: bconv l_sub must be positive");
}

WorkloadClass classify(const WorkloadSpec& workload) {
    const std::uint64_t n = workload.n;
    if (!is_pow2(n) || n < (1u << 11) || n > (1u << 16)) {
        throw UnsupportedDegree("N=" + std::to_string(n) +
                                " outside the supported power-of-two range [2^11, 2^16]");
    }
    return n <= (1u << 14) ? WorkloadClass::shallow : WorkloadClass::deep;
}

std::uint64_t op_unit_cost(OpKind kind, const WorkloadSpec& wl, const FlashArchSpec& spec,
                           bool swift_only) {
    spec.validate();
    const WorkloadClass cls = classify(wl);
    if (cls == WorkloadClass::shallow) {
        GroupArchSpec g = shallow_lanes_spec(wl, spec, swift_only);
        switch (kind) {
            case OpKind::ntt:
            case OpKind::intt:
                return group_ntt_cost(g).total_cycles;
            case OpKind::mul:
            case OpKind::add:
                return elementwise_cost(g);
            case OpKind::bconv:
            case OpKind::keyswitch:
                throw InvariantViolation(
                    "shallow workloads bypass BConv; bconv/keyswitch ops are invalid");
        }
    } else {
        GroupArchSpec g = deep_engine_spec(wl, spec);
        switch (kind) {
            case OpKind::ntt:
            case OpKind::intt:
                return group_ntt_cost(g).total_cycles;
            case OpKind::bconv:
                return group_bconv_cost(g).cycles;
            case OpKind::keyswitch:
                return keyswitch_pipeline_cost(g).total_cycles;
            case OpKind::mul:
            case OpKind::add:
                return elementwise_cost(g);
        }
    }
    throw InvariantViolation("unknown op kind");
}

namespace {

CycleBreakdown op_sequence_cost(const WorkloadSpec& wl, const FlashArchSpec& spec,
                                bool shallow, bool swift_only, std::uint64_t muls) {
    auto unit = [&](OpKind k) { return op_unit_cost(k, wl, spec, shallow && swift_only); };
    std::vector<std::pair<std::string, std::uint64_t>> phases = {
        {"ntt", wl.ops.ntt == 0 ? 0 : wl.ops.ntt * unit(OpKind::ntt)},
        {"intt", wl.ops.intt == 0 ? 0 : wl.ops.intt * unit(OpKind::intt)},
        {"bconv", wl.ops.bconv == 0 ? 0 : wl.ops.bconv * unit(OpKind::bconv)},
        {"mul", wl.ops.mul == 0 ? 0 : wl.ops.mul * unit(OpKind::mul)},
        {"add", wl.ops.add == 0 ? 0 : wl.ops.add * unit(OpKind::add)},
        {"keyswitch", wl.ops.keyswitch == 0 ? 0 : wl.ops.keyswitch * unit(OpKind::keyswitch)},
        {"memory_penalty", memory_penalty(wl, spec)},
    };
    CycleBreakdown b;
    b.phases = std::move(phases);
    for (const auto& [name, cycles] : b.phases) b.total_cycles += cycles;
    b.mul_count = muls;
    b.frequency_hz = spec.latency.frequency_hz;
    return b;
}

}  // namespace

CycleBreakdown shallow_cost(const WorkloadSpec& wl, const FlashArchSpec& spec, bool swift_only) {
    spec.validate();
    if (classify(wl) != WorkloadClass::shallow) {
        throw InvariantViolation("shallow_cost requires a shallow workload");
    }
    if (wl.ops.bconv != 0 || wl.ops.keyswitch != 0) {
        throw InvariantViolation(
            "shallow workloads bypass BConv; bconv/keyswitch ops are invalid");
    }
    if (wl.working_set_bytes > spec.l1_cache_bytes) {
        throw DoesNotFitAffiliation("working set " + std::to_string(wl.working_set_bytes) +
                                    " B exceeds the affiliation L1 cache of " +
                                    std::to_string(spec.l1_cache_bytes) + " B");
    }
    GroupArchSpec g = shallow_lanes_spec(wl, spec, swift_only);
    const std::uint64_t ntt_muls = g.groups * g.r * (std::uint64_t)spec.swift_log_n / 2;
    return op_sequence_cost(wl, spec, /*shallow=*/true, swift_only, ntt_muls);
}

CycleBreakdown deep_cost(const WorkloadSpec& wl, const FlashArchSpec& spec) {
    spec.validate();
    if (classify(wl) != WorkloadClass::deep) {
        throw InvariantViolation("deep_cost requires a deep workload");
    }
    GroupArchSpec g = deep_engine_spec(wl, spec);
    return op_sequence_cost(wl, spec, /*shallow=*/false, false, resource_totals(g));
}

std::uint64_t memory_penalty(const WorkloadSpec& wl, const FlashArchSpec& spec) {
    spec.validate();
    if (wl.working_set_bytes <= spec.total_cache_bytes) return 0;
    const std::uint64_t overflow = wl.working_set_bytes - spec.total_cache_bytes;
    const unsigned __int128 num =
        (unsigned __int128)overflow * spec.latency.frequency_hz;
    return std::uint64_t((num + spec.hbm_bandwidth_bytes_per_sec - 1) /
                         spec.hbm_bandwidth_bytes_per_sec);
}

WorkloadSpec workload_from_config(const ConfigMap& cfg, const std::string& prefix) {
    WorkloadSpec wl;
    auto key = [&](const char* k) { return prefix + k; };
    wl.name = cfg.get_str(key("name"), "workload");
    wl.n = cfg.get_u64(key("n"), 0);
    wl.levels = cfg.get_u64(key("levels"), 1);
    wl.current_level = cfg.get_u64(key("level"), wl.levels);
    wl.ops.ntt = cfg.get_u64(key("ops.ntt"), 0);
    wl.ops.intt = cfg.get_u64(key("ops.intt"), 0);
    wl.ops.bconv = cfg.get_u64(key("ops.bconv"), 0);
    wl.ops.mul = cfg.get_u64(key("ops.mul"), 0);
    wl.ops.add = cfg.get_u64(key("ops.add"), 0);
    wl.ops.keyswitch = cfg.get_u64(key("ops.keyswitch"), 0);
    wl.working_set_bytes = cfg.get_u64(key("working_set_bytes"), 0);
    wl.priority = cfg.get_i64(key("priority"), 0);
    wl.arrival = cfg.get_u64(key("arrival"), 0);
    return wl;
}

LatencyConstants latency_from_config(const ConfigMap& cfg, LatencyConstants base) {
    base.t_butterfly = cfg.get_u64("latency.t_butterfly", base.t_butterfly);
    base.t_twist = cfg.get_u64("latency.t_twist", base.t_twist);
    base.t_bconv_pipe = cfg.get_u64("latency.t_bconv_pipe", base.t_bconv_pipe);
    base.t_transpose = cfg.get_u64("latency.t_transpose", base.t_transpose);
    base.t_vsync = cfg.get_u64("latency.t_vsync", base.t_vsync);
    base.t_hsync = cfg.get_u64("latency.t_hsync", base.t_hsync);
    base.frequency_hz = cfg.get_u64("latency.frequency_hz", base.frequency_hz);
    return base;
}

LatencyConstants latency_with_measured_transpose(LatencyConstants base) {
    base.t_transpose = measured_l1_latency(kL1Ports);
    return base;
}

FlashArchSpec flash_spec_from_config(const ConfigMap& cfg) {
    FlashArchSpec spec;
    spec.affiliations = cfg.get_u64("flash.affiliations", spec.affiliations);
    spec.boot_log_n = int(cfg.get_u64("flash.boot_log_n", spec.boot_log_n));
    spec.swift_log_n = int(cfg.get_u64("flash.swift_log_n", spec.swift_log_n));
    spec.bconv_l_sub = cfg.get_u64("flash.bconv_l_sub", spec.bconv_l_sub);
    spec.alpha = cfg.get_u64("flash.alpha", spec.alpha);
    spec.l1_cache_bytes = cfg.get_u64("flash.l1_cache_bytes", spec.l1_cache_bytes);
    spec.total_cache_bytes = cfg.get_u64("flash.total_cache_bytes", spec.total_cache_bytes);
    spec.hbm_bandwidth_bytes_per_sec =
        cfg.get_u64("flash.hbm_bandwidth", spec.hbm_bandwidth_bytes_per_sec);
    spec.latency = latency_from_config(cfg, spec.latency);
    spec.validate();
    return spec;
}

}  // namespace fhedse
