// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "fhedse/config.hpp"
#include "fhedse/perfmodel.hpp"

namespace fhedse {

/// Heterogeneous accelerator: `affiliations` cluster affiliations, each with
/// one bootstrappable cluster (2^8-point (i)NTT circuit plus a 60-wide BConv
/// unit) and two swift clusters (2^7-point circuits, no BConv). Affiliations
/// share an L1 cache; one global cache pool serves deep cooperation.
struct FlashArchSpec {
    std::uint64_t affiliations = 8;
    int boot_log_n = 8;   // bootstrappable (i)NTT circuit size, log2
    int swift_log_n = 7;  // swift (i)NTT circuit size, log2
    std::uint64_t bconv_l_sub = 60;  // need not be a power of two in this profile
    std::uint64_t alpha = 4;
    std::uint64_t l1_cache_bytes = 8ull << 20;
    std::uint64_t total_cache_bytes = 320ull << 20;
    std::uint64_t hbm_bandwidth_bytes_per_sec = 1024ull << 30;  // 2 x 512 GiB/s
    LatencyConstants latency;

    void validate() const;
};

enum class WorkloadClass { shallow, deep };

struct OpCounts {
    std::uint64_t ntt = 0;
    std::uint64_t intt = 0;
    std::uint64_t bconv = 0;
    std::uint64_t mul = 0;
    std::uint64_t add = 0;
    std::uint64_t keyswitch = 0;
};

/// One FHE job, abstracted to its parameters and operation counts.
struct WorkloadSpec {
    std::string name;
    std::uint64_t n = 0;
    std::uint64_t levels = 1;         // L
    std::uint64_t current_level = 1;  // l
    OpCounts ops;
    std::uint64_t working_set_bytes = 0;
    std::int64_t priority = 0;
    std::uint64_t arrival = 0;
};

/// shallow iff N <= 2^14, deep iff 2^15 <= N <= 2^16. N must be a power of
/// two in [2^11, 2^16]; anything else is UnsupportedDegree.
WorkloadClass classify(const WorkloadSpec& workload);

enum class OpKind { ntt, intt, bconv, mul, add, keyswitch };

/// Cycles for one operation of the given kind under this workload's
/// parameters. Shallow workloads run on one affiliation's four 2^7 lanes
/// (two from the decomposed bootstrappable circuit plus the two swift
/// clusters); `swift_only` prices the degraded two-lane mode used when the
/// bootstrappable cluster is held by a deep job.
std::uint64_t op_unit_cost(OpKind kind, const WorkloadSpec& workload, const FlashArchSpec& spec,
                           bool swift_only = false);

/// Additive op-sequence cost of a shallow workload on one affiliation.
/// BConv is bypassed: bconv/keyswitch counts are rejected. Throws
/// DoesNotFitAffiliation when the working set exceeds the affiliation's L1.
CycleBreakdown shallow_cost(const WorkloadSpec& workload, const FlashArchSpec& spec,
                            bool swift_only = false);

/// Additive op-sequence cost of a deep workload on all bootstrappable
/// clusters, priced by the group closed forms with G = affiliations,
/// R = 2^boot_log_n. Swift clusters stay idle.
CycleBreakdown deep_cost(const WorkloadSpec& workload, const FlashArchSpec& spec);

/// Capacity model: zero while the working set fits the total cache,
/// otherwise the overflow transferred once over HBM, in cycles.
std::uint64_t memory_penalty(const WorkloadSpec& workload, const FlashArchSpec& spec);

/// Declarative file schemas (flat key=value, see ConfigMap):
///   workload: name, n, levels, level, priority, arrival, working_set_bytes,
///             ops.ntt, ops.intt, ops.bconv, ops.mul, ops.add, ops.keyswitch
///   arch:     flash.affiliations, flash.l1_cache_bytes,
///             flash.total_cache_bytes, flash.hbm_bandwidth,
///             latency.t_butterfly, latency.t_twist, ...
WorkloadSpec workload_from_config(const ConfigMap& cfg, const std::string& prefix = "");
FlashArchSpec flash_spec_from_config(const ConfigMap& cfg);
LatencyConstants latency_from_config(const ConfigMap& cfg, LatencyConstants base = {});

/// Latency constants with t_transpose replaced by the simulated depth of the
/// L1 transpose block at full width (measured_l1_latency(32) = 36), for
/// studies that want the interconnect constant tied to the simulated fabric
/// rather than the 32-cycle default.
LatencyConstants latency_with_measured_transpose(LatencyConstants base = {});

}  // namespace fhedse
