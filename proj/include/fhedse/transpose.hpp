// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fhedse/errors.hpp"

namespace fhedse {

/// Opaque tagged element moving through the transpose fabric. The simulator
/// verifies routing on the (tile, row, col) tags; arithmetic never happens
/// here.
struct TransposeElement {
    std::uint32_t tile = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint64_t payload = 0;

    bool operator==(const TransposeElement&) const = default;
};

/// Time-ordered port data: frames[t][p] is what port p carries at frame t.
struct PortStream {
    std::size_t width = 0;
    std::vector<std::vector<std::optional<TransposeElement>>> frames;

    PortStream() = default;
    PortStream(std::size_t width, std::size_t frame_count)
        : width(width), frames(frame_count, std::vector<std::optional<TransposeElement>>(width)) {}
};

/// Builds a fully tagged stream of back-to-back d x d tiles: frame f carries
/// tile row f%d across each d-port band, tagged with its (tile, row, col).
PortStream make_tile_stream(std::size_t width, std::size_t d, std::size_t tiles_per_band);

struct L1Result {
    PortStream out;
    std::uint64_t latency = 0;      // delay-line fill + switching stages
    std::uint64_t cycles = 0;       // total simulated cycles
    std::uint64_t first_out = 0;    // cycle of the first completed output frame
    std::uint64_t last_out = 0;     // cycle of the last completed output frame
};

/// The 32-port L1 transpose building block.
///
/// Workflow: the delay module delays port i by i cycles; log2(32) counter-
/// driven switching stages follow, where stage j applies a rotation by 2^j
/// within each d-lane band whenever bit j of the (phase-adjusted) cycle
/// counter is set; the output MUX exits the pipeline at stage log2(d)-1,
/// which yields d x d tile transposition. The block is fully pipelined: with
/// back-to-back tiles it accepts and emits one frame per cycle.
///
/// The input must be 32 ports wide and carry complete frame-aligned d x d
/// tiles (IncompleteTile otherwise); d must be a power of two <= 32
/// (BadTileSize otherwise). The optional trace receives one JSON line per
/// cycle of stage-entry occupancy.
L1Result l1_transpose(const PortStream& in, std::size_t d, std::ostream* trace = nullptr);

/// Pipeline depth of the L1 block for tile size d: (d - 1) + log2(d).
std::uint64_t measured_l1_latency(std::size_t d);

inline constexpr std::size_t kL1Ports = 32;

enum class WiringMode { shallow, deep };

/// Shallow work spreads over the 4 decomposed clusters of one affiliation;
/// deep work spreads over the 8 bootstrappable clusters.
std::size_t cluster_count(WiringMode mode);

/// Splits a column stream across clusters: frame (column) i goes to cluster
/// i mod cluster_count(mode). The outputs partition the input exactly.
/// Requires n_point == width * frames (BadMode for an unknown mode).
std::vector<PortStream> distribute(const PortStream& data, WiringMode mode,
                                   std::size_t n_point);

/// L1-to-L2 static wiring: port i of the L1 transpose in cluster j connects
/// to global port 4*i + j. i < 128, j < 4; 512 ports total.
std::size_t route_l2(std::size_t i, std::size_t j);

/// L1-to-L3 static wiring: 8*i + j. i < 256, j < 8; 2048 ports total.
std::size_t route_l3(std::size_t i, std::size_t j);

/// The static inter-cluster wiring level used by a working mode.
struct MultiLevelWiring {
    WiringMode mode = WiringMode::shallow;

    std::size_t ports() const { return mode == WiringMode::shallow ? 512 : 2048; }
    std::size_t l1_ports_per_cluster() const {
        return mode == WiringMode::shallow ? 128 : 256;
    }
    std::size_t global_port(std::size_t i, std::size_t j) const {
        return mode == WiringMode::shallow ? route_l2(i, j) : route_l3(i, j);
    }
};

}  // namespace fhedse
