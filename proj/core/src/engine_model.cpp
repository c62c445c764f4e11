// SPDX-License-Identifier: Apache-2.0
#include "cdma/engine_model.hpp"

#include <algorithm>
#include <cmath>

#include "bytes.hpp"
#include "cdma/codec.hpp"

namespace cdma {

void EngineConfig::validate() const {
  if (sector_bytes == 0 || line_bytes == 0 ||
      line_bytes % sector_bytes != 0) {
    throw ConfigError("line_bytes must be a nonzero multiple of sector_bytes");
  }
  if (compress_pipeline_stages < 1) {
    throw ConfigError("compress pipeline needs at least one stage");
  }
}

std::uint64_t compress_latency_cycles(std::uint64_t lines,
                                      const EngineConfig& cfg) {
  cfg.validate();
  if (lines == 0) {
    return 0;
  }
  // One sector enters per cycle; back-to-back lines share the pipeline fill.
  return lines * cfg.sectors_per_line() + (cfg.compress_pipeline_stages - 1);
}

std::uint64_t decompress_latency_cycles(std::uint64_t lines,
                                        const EngineConfig& cfg) {
  cfg.validate();
  if (lines == 0) {
    return 0;
  }
  return lines * cfg.sectors_per_line() + cfg.decompress_extra_cycles;
}

double engine_throughput_bytes_per_sec(const EngineConfig& cfg) {
  cfg.validate();
  if (!(cfg.clock_hz > 0.0)) {
    throw ConfigError("engine clock must be positive");
  }
  return cfg.sector_bytes * cfg.clock_hz;
}

BufferSpec size_buffer(double read_bandwidth_bytes_per_sec,
                       double round_trip_latency_sec) {
  if (!(read_bandwidth_bytes_per_sec > 0.0)) {
    throw ConfigError("buffer sizing needs positive read bandwidth");
  }
  if (round_trip_latency_sec < 0.0 || !std::isfinite(round_trip_latency_sec)) {
    throw ConfigError("round-trip latency must be finite and nonnegative");
  }
  const double product = read_bandwidth_bytes_per_sec * round_trip_latency_sec;
  // Snap to the nearest integer when the product is one up to rounding noise,
  // so e.g. 200 GB/s x 350 ns lands on 70,000 rather than 70,001.
  const double nearest = std::round(product);
  const double bytes =
      (std::abs(product - nearest) <= 1e-9 * std::max(1.0, nearest))
          ? nearest
          : std::ceil(product);
  BufferSpec spec;
  spec.read_bandwidth = read_bandwidth_bytes_per_sec;
  spec.round_trip_latency = round_trip_latency_sec;
  spec.required_bytes = static_cast<std::uint64_t>(bytes);
  return spec;
}

namespace {

constexpr unsigned kSectorWords = 8;

// Brent-Kung combine schedule for 8 inputs: an up-sweep that builds the
// reduction tree, then a down-sweep that fills in the remaining prefixes.
std::vector<PrefixSumNetwork::CombineOp> build_schedule() {
  std::vector<PrefixSumNetwork::CombineOp> ops;
  const unsigned n = PrefixSumNetwork::kElements;
  for (unsigned d = 1; d < n; d <<= 1) {
    for (unsigned i = 2 * d - 1; i < n; i += 2 * d) {
      ops.push_back({static_cast<std::uint8_t>(i),
                     static_cast<std::uint8_t>(i - d)});
    }
  }
  for (unsigned d = n / 4; d >= 1; d >>= 1) {
    for (unsigned i = 3 * d - 1; i < n; i += 2 * d) {
      ops.push_back({static_cast<std::uint8_t>(i),
                     static_cast<std::uint8_t>(i - d)});
    }
  }
  return ops;
}

const std::vector<PrefixSumNetwork::CombineOp>& schedule_storage() {
  static const std::vector<PrefixSumNetwork::CombineOp> ops = build_schedule();
  return ops;
}

}  // namespace

std::span<const PrefixSumNetwork::CombineOp> PrefixSumNetwork::schedule() {
  return schedule_storage();
}

unsigned PrefixSumNetwork::adder_count() {
  return static_cast<unsigned>(schedule_storage().size());
}

unsigned PrefixSumNetwork::offset_width_bits() {
  // The steering offsets are exclusive prefixes, at most kElements - 1.
  unsigned width = 0;
  for (unsigned v = kElements - 1; v != 0; v >>= 1) {
    ++width;
  }
  return width;
}

std::array<std::uint8_t, 8> PrefixSumNetwork::inclusive_sums(
    std::uint8_t mask_bits) {
  std::array<std::uint8_t, 8> sums{};
  for (unsigned i = 0; i < kElements; ++i) {
    sums[i] = (mask_bits >> i) & 1u;
  }
  for (const CombineOp& op : schedule_storage()) {
    sums[op.dst] = static_cast<std::uint8_t>(sums[op.dst] + sums[op.src]);
  }
  return sums;
}

std::vector<std::uint8_t> simulate_compress_datapath(
    std::span<const std::uint32_t> words) {
  std::vector<std::uint8_t> out;
  const std::size_t groups =
      (words.size() + kZvcGroupWords - 1) / kZvcGroupWords;
  out.reserve((groups + words.size()) * 4);

  for (std::size_t line = 0; line < words.size(); line += kZvcGroupWords) {
    const std::size_t line_n = std::min(kZvcGroupWords, words.size() - line);
    std::uint32_t line_mask = 0;
    std::array<std::uint32_t, kZvcGroupWords> packed{};
    std::size_t fill = 0;  // packed words appended so far in this line

    for (std::size_t s = 0; s < line_n; s += kSectorWords) {
      const std::size_t sector_n = std::min<std::size_t>(kSectorWords,
                                                         line_n - s);
      // Stage 1: parallel compare to zero forms the 8-bit sector mask.
      std::uint8_t mask = 0;
      for (std::size_t i = 0; i < sector_n; ++i) {
        if (words[line + s + i] != 0u) {
          mask |= static_cast<std::uint8_t>(1u << i);
        }
      }
      const auto sums = PrefixSumNetwork::inclusive_sums(mask);
      // Stage 2: mux each nonzero word to offset = nonzeros in front of it.
      // Stage 3: append behind the previous sectors of this line.
      for (std::size_t i = 0; i < sector_n; ++i) {
        if (mask & (1u << i)) {
          const std::size_t offset = (i == 0) ? 0 : sums[i - 1];
          packed[fill + offset] = words[line + s + i];
        }
      }
      fill += sums[kSectorWords - 1];
      line_mask |= static_cast<std::uint32_t>(mask) << (s);
    }

    detail::append_u32le(out, line_mask);
    for (std::size_t i = 0; i < fill; ++i) {
      detail::append_u32le(out, packed[i]);
    }
  }
  return out;
}

bool functional_equivalence_check(std::span<const std::uint32_t> words) {
  return simulate_compress_datapath(words) == zvc_compress(words).payload;
}

}  // namespace cdma
