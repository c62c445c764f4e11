// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <bit>

#include "bytes.hpp"
#include "cdma/codec.hpp"

namespace cdma {

CompressedBlock zvc_compress(std::span<const std::uint32_t> words,
                             std::uint32_t window_bytes) {
  CompressedBlock block;
  block.codec = CodecId::ZVC;
  block.window_bytes = window_bytes;
  block.original_len_bytes = words.size() * 4ull;

  const std::size_t groups =
      (words.size() + kZvcGroupWords - 1) / kZvcGroupWords;
  // Worst case: one mask per group plus every word nonzero.
  block.payload.reserve((groups + words.size()) * 4);

  // Each group record is packed in an L1-resident scratch buffer and
  // appended in one shot. The pack itself is branchless: store every word,
  // advance only past nonzeros, so throughput stays flat across densities.
  std::uint8_t record[4 + kZvcGroupWords * 4];
  for (std::size_t g = 0; g < words.size(); g += kZvcGroupWords) {
    const std::size_t n = std::min(kZvcGroupWords, words.size() - g);
    std::uint32_t mask = 0;
    std::size_t pos = 4;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t v = words[g + i];
      detail::store_u32le(record + pos, v);
      const std::uint32_t nz = (v != 0u) ? 1u : 0u;
      mask |= nz << i;
      pos += 4 * nz;
    }
    detail::store_u32le(record, mask);
    block.payload.insert(block.payload.end(), record, record + pos);
  }
  return block;
}

std::vector<std::uint32_t> zvc_decompress(const CompressedBlock& block) {
  if (block.codec != CodecId::ZVC) {
    throw ConfigError("zvc_decompress called on a non-ZVC block");
  }
  if (block.original_len_bytes % 4 != 0) {
    throw CorruptStreamError("ZVC original length is not word-granular");
  }
  if (block.payload.size() % 4 != 0) {
    throw CorruptStreamError("ZVC payload length is not word-granular");
  }
  const std::size_t count = block.original_len_bytes / 4;
  std::vector<std::uint32_t> out(count, 0u);

  const std::uint8_t* in = block.payload.data();
  const std::size_t payload_size = block.payload.size();
  std::size_t pos = 0;
  for (std::size_t g = 0; g < count; g += kZvcGroupWords) {
    const std::size_t n = std::min(kZvcGroupWords, count - g);
    if (pos + 4 > payload_size) {
      throw CorruptStreamError("ZVC payload truncated before group mask");
    }
    const std::uint32_t mask = detail::load_u32le(in + pos);
    pos += 4;
    // A tail group must not claim words past the declared end.
    if (n < kZvcGroupWords && (mask >> n) != 0) {
      throw CorruptStreamError("ZVC tail mask has bits beyond stream end");
    }
    const unsigned nonzeros = static_cast<unsigned>(std::popcount(mask));
    if (pos + 4ull * nonzeros > payload_size) {
      throw CorruptStreamError("ZVC payload truncated inside group");
    }
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      out[g + static_cast<unsigned>(std::countr_zero(bits))] =
          detail::load_u32le(in + pos);
      pos += 4;
    }
  }
  if (pos != payload_size) {
    throw CorruptStreamError("ZVC payload has trailing garbage");
  }
  return out;
}

}  // namespace cdma
