// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhedse/errors.hpp"

namespace fhedse {

/// Pipeline latency constants, in hardware cycles at `frequency_hz`.
///
/// t_butterfly, t_twist and t_bconv_pipe come from circuit analysis of the
/// respective units (22 / 17 / 18). The transpose and synchronization
/// latencies are not derivable from any single circuit here, so they are
/// plain configuration with a 32-cycle default (one pass through a 32-wide
/// interconnect stage); see measured_l1_latency() in transpose.hpp for the
/// simulated depth of the L1 block.
struct LatencyConstants {
    std::uint64_t t_butterfly = 22;
    std::uint64_t t_twist = 17;
    std::uint64_t t_bconv_pipe = 18;
    std::uint64_t t_transpose = 32;
    std::uint64_t t_vsync = 32;
    std::uint64_t t_hsync = 32;
    std::uint64_t frequency_hz = 1'000'000'000;

    void validate() const;
};

/// G parallel engines, each an R-point NTT pipeline plus an alpha-way
/// parallel basis-conversion unit.
struct GroupArchSpec {
    std::uint64_t n = 65536;
    std::uint64_t levels = 16;         // L: depth of a fresh ciphertext
    std::uint64_t current_level = 16;  // l: depth of the ciphertext being processed
    std::uint64_t groups = 8;          // G
    std::uint64_t r = 256;             // NTT points per group engine
    std::uint64_t alpha = 4;           // special moduli / parallel converters
    bool use_current_level = true;     // load terms scale with l rather than L
    LatencyConstants latency;

    void validate() const;
    std::uint64_t load_level() const { return use_current_level ? current_level : levels; }
};

/// R x C grid of two-point-NTT engines with sequential l_sub-way BConv units.
struct GridArchSpec {
    std::uint64_t n = 65536;
    std::uint64_t levels = 16;
    std::uint64_t current_level = 16;
    std::uint64_t rows = 32;   // R
    std::uint64_t cols = 64;   // C
    std::uint64_t l_sub = 8;   // modular multipliers per basis converter
    bool use_current_level = true;
    LatencyConstants latency;

    void validate() const;
    std::uint64_t load_level() const { return use_current_level ? current_level : levels; }
};

/// Reduced fraction; throughput_per_sec * total_cycles == frequency holds
/// exactly in this form.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return double(num) / double(den); }
};

/// Per-phase cycle counts for one pipeline evaluation. Phases preserve each
/// printed model term under a stable name and always sum to total_cycles.
struct CycleBreakdown {
    std::vector<std::pair<std::string, std::uint64_t>> phases;
    std::uint64_t total_cycles = 0;
    std::uint64_t mul_count = 0;
    std::uint64_t frequency_hz = 0;

    std::uint64_t phase(const std::string& name) const;  // throws if absent
    bool has_phase(const std::string& name) const;
    Rational throughput_per_sec() const;   // frequency / total
    double throughput_per_mul() const;     // frequency / (total * muls)
};

struct CostPair {
    std::uint64_t cycles = 0;
    std::uint64_t mul_count = 0;
};

/// Fully parallel pipeline: log2(N) stages of N/2 butterflies.
/// cycles = log2(N) * t_butterfly, muls = N/2 * log2(N).
CostPair naive_ntt_cost(std::uint64_t n, const LatencyConstants& latency);

/// Four-step NTT on the group architecture:
///   T = T_D1 + T_twist + T_transpose + T_D2,
///   T_D1 = log2(R) * t_butterfly + N*l/(R*G),
///   T_D2 = log2(N/R) * t_butterfly + N*l/(R*G).
/// NTT muls: G * R * log2(R) / 2.
CycleBreakdown group_ntt_cost(const GroupArchSpec& spec);

/// Fully pipelined parallel BConv: N*l/(G*R) + t_bconv_pipe cycles,
/// G * alpha * R muls.
CostPair group_bconv_cost(const GroupArchSpec& spec);

/// Three-step NTT on the grid architecture:
///   t_stage = t_butterfly + l*N/(2*C*R),
///   T = log2(N/(C*R))*t_stage + t_twist + t_vsync
///     + log2(R)*t_stage + t_twist + t_hsync + log2(C)*t_stage.
/// NTT muls: R * C.
CycleBreakdown grid_ntt_cost(const GridArchSpec& spec);

/// Standalone sequential BConv, exactly as printed:
///   N * L^2 + t_twist + log2(l_sub) cycles, R * C * l_sub muls.
/// (The combined pipeline model uses the per-grid streaming term instead.)
CostPair grid_bconv_cost(const GridArchSpec& spec);

/// Full iNTT -> BConv -> NTT pipeline, T1 + T2, every printed term kept as a
/// named phase. mul_count is the architecture resource total.
CycleBreakdown keyswitch_pipeline_cost(const GroupArchSpec& spec);
CycleBreakdown keyswitch_pipeline_cost(const GridArchSpec& spec);

/// G*R*(alpha + log2(R)/2) — equals NTT muls + BConv muls.
std::uint64_t resource_totals(const GroupArchSpec& spec);
/// R*C*(1 + l_sub) — equals NTT muls + BConv muls.
std::uint64_t resource_totals(const GridArchSpec& spec);

}  // namespace fhedse
