// SPDX-License-Identifier: Apache-2.0
#include "fhedse/transpose.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>

namespace fhedse {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t log2_exact(std::size_t v) {
    std::size_t l = 0;
    while ((std::size_t(1) << l) < v) ++l;
    return l;
}

}  // namespace

PortStream make_tile_stream(std::size_t width, std::size_t d, std::size_t tiles_per_band) {
    PortStream s(width, d * tiles_per_band);
    const std::size_t bands = width / d;
    for (std::size_t tile = 0; tile < tiles_per_band; ++tile) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t b = 0; b < bands; ++b) {
                for (std::size_t c = 0; c < d; ++c) {
                    s.frames[tile * d + r][b * d + c] = TransposeElement{
                        std::uint32_t(tile * bands + b), std::uint32_t(r), std::uint32_t(c), 0};
                }
            }
        }
    }
    return s;
}

std::uint64_t measured_l1_latency(std::size_t d) {
    if (!is_pow2(d) || d > kL1Ports) throw BadTileSize("tile size must be a power of two <= 32");
    return std::uint64_t(d - 1) + log2_exact(d);
}

L1Result l1_transpose(const PortStream& in, std::size_t d, std::ostream* trace) {
    if (!is_pow2(d) || d > kL1Ports) {
        throw BadTileSize("tile size must be a power of two <= 32, got " + std::to_string(d));
    }
    if (in.width != kL1Ports) {
        throw IncompleteTile("L1 block expects exactly 32 ports, got " +
                             std::to_string(in.width));
    }
    if (in.frames.size() % d != 0) {
        throw IncompleteTile("stream length " + std::to_string(in.frames.size()) +
                             " is not frame-aligned to " + std::to_string(d) + "x" +
                             std::to_string(d) + " tiles");
    }
    for (const auto& frame : in.frames) {
        for (const auto& slot : frame) {
            if (!slot.has_value()) throw IncompleteTile("input stream carries empty slots");
        }
    }

    const std::size_t stages = log2_exact(d);
    const std::size_t frame_count = in.frames.size();
    L1Result result;
    result.out = PortStream(kL1Ports, frame_count);
    result.latency = measured_l1_latency(d);

    // Element-wise cycle walk through delay lines, the static band-reversal
    // wiring, and the counter-driven rotation stages. Occupancy is tracked
    // per (cycle, stage, lane) so a routing bug shows up as a collision
    // instead of silent data loss.
    std::map<std::tuple<std::uint64_t, std::size_t, std::size_t>, bool> occupancy;
    // per-cycle stage-entry occupancy for the optional debug log
    std::map<std::uint64_t, std::vector<std::pair<std::size_t, TransposeElement>>> entries;
    std::uint64_t max_exit = 0;
    bool first_seen = false;

    for (std::size_t f = 0; f < frame_count; ++f) {
        for (std::size_t p = 0; p < kL1Ports; ++p) {
            const std::size_t band = p / d;
            const std::size_t c = p % d;
            const std::uint64_t t0 = f + p;  // port i delayed i cycles
            // static reversal wiring at the delay-line outputs
            std::size_t lane = d - 1 - c;
            // rotation stages: stage j rotates the band by 2^j when bit j of
            // the phase-adjusted counter is set
            for (std::size_t j = 0; j < stages; ++j) {
                const bool cross = ((t0 + 1) >> j) & 1;
                if (cross) lane = (lane + (std::size_t(1) << j)) % d;
                auto key = std::make_tuple(t0 + j, j, band * d + lane);
                if (occupancy.count(key)) {
                    throw InvariantViolation("transpose lane collision (internal)");
                }
                occupancy[key] = true;
            }
            const std::uint64_t exit_time = t0 + stages;
            const std::size_t out_port = band * d + lane;
            // de-skew: output frame index mirrors the input skew convention
            const std::uint64_t out_frame = exit_time - out_port - stages;
            if (out_frame >= frame_count) {
                throw InvariantViolation("transpose emitted past the stream end (internal)");
            }
            if (result.out.frames[out_frame][out_port].has_value()) {
                throw InvariantViolation("transpose output slot written twice (internal)");
            }
            result.out.frames[out_frame][out_port] = in.frames[f][p];

            const std::uint64_t completed_at = exit_time;
            if (!first_seen || completed_at < result.first_out) result.first_out = completed_at;
            first_seen = true;
            max_exit = std::max(max_exit, completed_at);

            if (trace) entries[t0].emplace_back(p, *in.frames[f][p]);
        }
    }

    if (trace) {
        // one JSON line per cycle: the frame entering the switching stages
        for (const auto& [cycle, frame] : entries) {
            *trace << "{\"cycle\":" << cycle << ",\"enter\":[";
            for (std::size_t i = 0; i < frame.size(); ++i) {
                const auto& [port, e] = frame[i];
                *trace << (i ? "," : "") << "{\"port\":" << port << ",\"tile\":" << e.tile
                       << ",\"row\":" << e.row << ",\"col\":" << e.col << "}";
            }
            *trace << "]}\n";
        }
    }
    result.last_out = max_exit;
    result.cycles = max_exit + 1;
    return result;
}

std::size_t cluster_count(WiringMode mode) {
    switch (mode) {
        case WiringMode::shallow:
            return 4;
        case WiringMode::deep:
            return 8;
    }
    throw BadMode("unknown wiring mode");
}

std::vector<PortStream> distribute(const PortStream& data, WiringMode mode,
                                   std::size_t n_point) {
    const std::size_t clusters = cluster_count(mode);
    if (data.width * data.frames.size() != n_point) {
        throw BadMode("stream carries " + std::to_string(data.width * data.frames.size()) +
                      " elements, expected n_point=" + std::to_string(n_point));
    }
    std::vector<PortStream> out(clusters);
    for (auto& s : out) s.width = data.width;
    for (std::size_t col = 0; col < data.frames.size(); ++col) {
        out[col % clusters].frames.push_back(data.frames[col]);
    }
    return out;
}

std::size_t route_l2(std::size_t i, std::size_t j) {
    if (i >= 128 || j >= 4) {
        throw PortOutOfRange("route_l2(" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return 4 * i + j;
}

std::size_t route_l3(std::size_t i, std::size_t j) {
    if (i >= 256 || j >= 8) {
        throw PortOutOfRange("route_l3(" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return 8 * i + j;
}

}  // namespace fhedse
