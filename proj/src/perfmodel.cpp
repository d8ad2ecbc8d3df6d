// SPDX-License-Identifier: Apache-2.0
#include "fhedse/perfmodel.hpp"

#include <algorithm>
#include <numeric>

namespace fhedse {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::uint64_t log2_exact(std::uint64_t v) {
    std::uint64_t l = 0;
    while ((std::uint64_t(1) << l) < v) ++l;
    return l;
}

// The models are integral: a spec whose load terms do not divide evenly is
// invalid rather than silently rounded.
std::uint64_t exact_div(std::uint64_t num, std::uint64_t den, const char* what) {
    if (den == 0 || num % den != 0) {
        throw InvariantViolation(std::string(what) + ": " + std::to_string(num) + "/" +
                                 std::to_string(den) + " is not an integer");
    }
    return num / den;
}

CycleBreakdown finish(std::vector<std::pair<std::string, std::uint64_t>> phases,
                      std::uint64_t muls, std::uint64_t freq) {
    CycleBreakdown b;
    b.phases = std::move(phases);
    b.total_cycles = 0;
    for (const auto& [name, cycles] : b.phases) b.total_cycles += cycles;
    b.mul_count = muls;
    b.frequency_hz = freq;
    return b;
}

}  // namespace

void LatencyConstants::validate() const {
    for (std::uint64_t v : {t_butterfly, t_twist, t_bconv_pipe, t_transpose, t_vsync, t_hsync,
                            frequency_hz}) {
        if (v == 0) throw InvariantViolation("latency constants must be strictly positive");
    }
}

void GroupArchSpec::validate() const {
    latency.validate();
    if (!is_pow2(n) || !is_pow2(r) || !is_pow2(groups)) {
        throw InvariantViolation("group spec: N, R, G must be powers of two");
    }
    if (n < 2) throw InvariantViolation("group spec: N must be at least 2");
    if (r * r < n) throw InvariantViolation("group spec: R must satisfy R >= N/R");
    if (n % (r * groups) != 0) throw InvariantViolation("group spec: N/(R*G) must be integral");
    if (current_level > levels) throw InvariantViolation("group spec: l must not exceed L");
    if (alpha == 0) throw InvariantViolation("group spec: alpha must be positive");
}

void GridArchSpec::validate() const {
    latency.validate();
    if (!is_pow2(n) || !is_pow2(rows) || !is_pow2(cols) || !is_pow2(l_sub)) {
        throw InvariantViolation("grid spec: N, R, C, l_sub must be powers of two");
    }
    if (n / (rows * cols) < 2 || n % (rows * cols) != 0) {
        throw InvariantViolation("grid spec: N/(R*C) must be an integer >= 2");
    }
    if ((n / (rows * cols)) % l_sub != 0) {
        throw InvariantViolation("grid spec: l_sub must divide N/(R*C)");
    }
    if (current_level > levels) throw InvariantViolation("grid spec: l must not exceed L");
}

std::uint64_t CycleBreakdown::phase(const std::string& name) const {
    for (const auto& [n, c] : phases) {
        if (n == name) return c;
    }
    throw InvariantViolation("no such phase: " + name);
}

bool CycleBreakdown::has_phase(const std::string& name) const {
    return std::any_of(phases.begin(), phases.end(),
                       [&](const auto& p) { return p.first == name; });
}

Rational CycleBreakdown::throughput_per_sec() const {
    if (total_cycles == 0) return {0, 1};  // zero-op pipeline; rate undefined
    std::uint64_t g = std::gcd(frequency_hz, total_cycles);
    return {frequency_hz / g, total_cycles / g};
}

double CycleBreakdown::throughput_per_mul() const {
    if (total_cycles == 0 || mul_count == 0) return 0.0;
    return double(frequency_hz) / (double(total_cycles) * double(mul_count));
}

CostPair naive_ntt_cost(std::uint64_t n, const LatencyConstants& latency) {
    latency.validate();
    if (!is_pow2(n) || n < 2) throw BadSize("naive NTT needs a power-of-two N >= 2");
    const std::uint64_t stages = log2_exact(n);
    return {stages * latency.t_butterfly, (n / 2) * stages};
}

CycleBreakdown group_ntt_cost(const GroupArchSpec& spec) {
    spec.validate();
    const auto& lat = spec.latency;
    const std::uint64_t load = exact_div(spec.n * spec.load_level(), spec.r * spec.groups,
                                         "group N*l/(R*G)");
    const std::uint64_t d1 = log2_exact(spec.r) * lat.t_butterfly + load;
    const std::uint64_t d2 = log2_exact(spec.n / spec.r) * lat.t_butterfly + load;
    const std::uint64_t muls = spec.groups * spec.r * log2_exact(spec.r) / 2;
    return finish({{"d1", d1},
                   {"twist1", lat.t_twist},
                   {"transpose", lat.t_transpose},
                   {"d2", d2}},
                  muls, lat.frequency_hz);
}

CostPair group_bconv_cost(const GroupArchSpec& spec) {
    spec.validate();
    const std::uint64_t stream = exact_div(spec.n * spec.load_level(), spec.groups * spec.r,
                                           "group bconv N*l/(G*R)");
    return {stream + spec.latency.t_bconv_pipe, spec.groups * spec.alpha * spec.r};
}

namespace {

std::uint64_t grid_t_stage(const GridArchSpec& spec) {
    const std::uint64_t load = exact_div(spec.load_level() * spec.n,
                                         2 * spec.cols * spec.rows, "grid l*N/(2*C*R)");
    return spec.latency.t_butterfly + load;
}

}  // namespace

CycleBreakdown grid_ntt_cost(const GridArchSpec& spec) {
    spec.validate();
    const auto& lat = spec.latency;
    const std::uint64_t t_stage = grid_t_stage(spec);
    const std::uint64_t d1 = log2_exact(spec.n / (spec.cols * spec.rows)) * t_stage;
    const std::uint64_t d2 = log2_exact(spec.rows) * t_stage;
    const std::uint64_t d3 = log2_exact(spec.cols) * t_stage;
    return finish({{"d1", d1},
                   {"twist1", lat.t_twist},
                   {"vsync", lat.t_vsync},
                   {"d2", d2},
                   {"twist2", lat.t_twist},
                   {"hsync", lat.t_hsync},
                   {"d3", d3}},
                  spec.rows * spec.cols, lat.frequency_hz);
}

CostPair grid_bconv_cost(const GridArchSpec& spec) {
    spec.validate();
    const std::uint64_t ll = spec.load_level();
    return {spec.n * ll * ll + spec.latency.t_twist + log2_exact(spec.l_sub),
            spec.rows * spec.cols * spec.l_sub};
}

CycleBreakdown keyswitch_pipeline_cost(const GroupArchSpec& spec) {
    spec.validate();
    const auto& lat = spec.latency;
    const std::uint64_t load = exact_div(spec.n * spec.load_level(), spec.r * spec.groups,
                                         "group N*l/(R*G)");
    const std::uint64_t d1 = log2_exact(spec.r) * lat.t_butterfly + load;
    const std::uint64_t d2 = log2_exact(spec.n / spec.r) * lat.t_butterfly + load;
    // T1: iNTT with the parallel BConv hidden behind D2 except its pipe depth
    // T2: one full NTT pass
    return finish({{"intt_d1", d1},
                   {"intt_twist", lat.t_twist},
                   {"intt_transpose", lat.t_transpose},
                   {"intt_d2", d2},
                   {"bconv_pipe", lat.t_bconv_pipe},
                   {"ntt_d1", d1},
                   {"ntt_twist", lat.t_twist},
                   {"ntt_transpose", lat.t_transpose},
                   {"ntt_d2", d2}},
                  resource_totals(spec), lat.frequency_hz);
}

CycleBreakdown keyswitch_pipeline_cost(const GridArchSpec& spec) {
    spec.validate();
    const auto& lat = spec.latency;
    const std::uint64_t t_stage = grid_t_stage(spec);
    const std::uint64_t d1 = log2_exact(spec.n / (spec.cols * spec.rows)) * t_stage;
    const std::uint64_t d2 = log2_exact(spec.rows) * t_stage;
    const std::uint64_t d3 = log2_exact(spec.cols) * t_stage;
    // sequential BConv streaming term: N * L * l / (C * R * l_sub); the first
    // level factor follows the load convention, the second is always l
    const std::uint64_t bconv_stream = exact_div(
        spec.n * spec.load_level() * spec.current_level,
        spec.cols * spec.rows * spec.l_sub, "grid bconv N*L*l/(C*R*l_sub)");
    // D3 runs at the BConv consumption rate while feeding it
    const std::uint64_t d3_bconv =
        log2_exact(spec.cols) *
        (exact_div(spec.n, 2 * spec.cols * spec.rows, "grid N/(2*C*R)") * spec.l_sub +
         lat.t_butterfly);
    return finish({{"intt_d1", d1},
                   {"intt_twist1", lat.t_twist},
                   {"intt_vsync", lat.t_vsync},
                   {"intt_d2", d2},
                   {"intt_twist2", lat.t_twist},
                   {"intt_hsync", lat.t_hsync},
                   {"bconv_stream", bconv_stream},
                   {"bconv_pipe", lat.t_twist + log2_exact(spec.l_sub)},
                   {"d3_bconv", d3_bconv},
                   {"ntt_d1", d1},
                   {"ntt_twist1", lat.t_twist},
                   {"ntt_vsync", lat.t_vsync},
                   {"ntt_d2", d2},
                   {"ntt_twist2", lat.t_twist},
                   {"ntt_hsync", lat.t_hsync},
                   {"ntt_d3", d3}},
                  resource_totals(spec), lat.frequency_hz);
}

std::uint64_t resource_totals(const GroupArchSpec& spec) {
    spec.validate();
    return spec.groups * spec.r * spec.alpha +
           spec.groups * spec.r * log2_exact(spec.r) / 2;
}

std::uint64_t resource_totals(const GridArchSpec& spec) {
    spec.validate();
    return spec.rows * spec.cols * (1 + spec.l_sub);
}

}  // namespace fhedse
