// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cdma/error.hpp"

namespace cdma {

// Geometry and timing of the zero-value (de)compression engine. The datapath
// consumes one sector per cycle; a 128-byte line is four 32-byte sectors
// moving through a three-stage compress pipeline.
struct EngineConfig {
  std::uint32_t sector_bytes = 32;
  std::uint32_t line_bytes = 128;
  std::uint32_t compress_pipeline_stages = 3;
  std::uint32_t decompress_extra_cycles = 2;
  double clock_hz = 1e9;

  std::uint32_t sectors_per_line() const { return line_bytes / sector_bytes; }
  void validate() const;  // line a multiple of sector, stages >= 1
};

// Latency to compress `lines` 128-byte lines streamed back to back: the
// pipeline initiates one sector per cycle, so a single line costs
// sectors_per_line + (stages - 1) cycles and each further line adds
// sectors_per_line. Zero lines cost zero.
std::uint64_t compress_latency_cycles(std::uint64_t lines,
                                      const EngineConfig& cfg = {});

// Decompression adds decompress_extra_cycles on top of the streaming cost;
// it can start as soon as the first sector arrives.
std::uint64_t decompress_latency_cycles(std::uint64_t lines,
                                        const EngineConfig& cfg = {});

// Steady-state engine throughput: one sector per cycle.
double engine_throughput_bytes_per_sec(const EngineConfig& cfg = {});

// Staging buffer sized to the bandwidth-delay product of the memory sourcing
// the data.
struct BufferSpec {
  double read_bandwidth = 0.0;      // bytes/sec
  double round_trip_latency = 0.0;  // seconds
  std::uint64_t required_bytes = 0;
};

// required_bytes = ceil(read_bandwidth * round_trip_latency). Bandwidth must
// be positive; latency may be zero (degenerate, zero bytes).
BufferSpec size_buffer(double read_bandwidth_bytes_per_sec,
                       double round_trip_latency_sec);

// Prefix-sum network over the 8 per-sector mask bits, structured as the
// Brent-Kung tree the hardware would use. The adder count and operand width
// fall out of the generated combine schedule rather than being quoted.
struct PrefixSumNetwork {
  static constexpr unsigned kElements = 8;

  struct CombineOp {
    std::uint8_t dst = 0;
    std::uint8_t src = 0;
  };

  // Combine schedule: sums[dst] += sums[src], in order.
  static std::span<const CombineOp> schedule();
  static unsigned adder_count();
  // Bit width of the packed-position offsets the adders feed (0..7).
  static unsigned offset_width_bits();

  // Inclusive prefix sums of the 8 mask bits (bit i = LSB-first).
  static std::array<std::uint8_t, 8> inclusive_sums(std::uint8_t mask_bits);
};

// Functional model of the compress datapath: per 32-byte sector, compare the
// 8 words to zero, prefix-sum the mask bits into packed offsets, mux the
// nonzero words into place, and append the 8-bit mask; after four sectors the
// accumulated 32-bit mask and packed words form one compressed line. Returns
// the full compressed byte stream.
std::vector<std::uint8_t> simulate_compress_datapath(
    std::span<const std::uint32_t> words);

// True iff the staged datapath and zvc_compress emit identical bytes.
bool functional_equivalence_check(std::span<const std::uint32_t> words);

}  // namespace cdma
