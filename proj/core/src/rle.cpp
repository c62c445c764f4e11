// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "bytes.hpp"
#include "cdma/codec.hpp"

namespace cdma {

namespace {

constexpr std::size_t kMaxRun = 0x7FFF;  // 15-bit length field
constexpr std::uint16_t kZeroRunFlag = 0x8000;

}  // namespace

CompressedBlock rle_compress(std::span<const std::uint32_t> words,
                             std::uint32_t window_bytes) {
  CompressedBlock block;
  block.codec = CodecId::RLE;
  block.window_bytes = window_bytes;
  block.original_len_bytes = words.size() * 4ull;
  block.payload.reserve(words.size() / 8 + 16);

  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t run = 1;
    if (words[i] == 0u) {
      while (i + run < words.size() && words[i + run] == 0u &&
             run < kMaxRun) {
        ++run;
      }
      detail::append_u16le(block.payload,
                           kZeroRunFlag | static_cast<std::uint16_t>(run));
    } else {
      while (i + run < words.size() && words[i + run] != 0u &&
             run < kMaxRun) {
        ++run;
      }
      detail::append_u16le(block.payload, static_cast<std::uint16_t>(run));
      const std::size_t base = block.payload.size();
      block.payload.resize(base + run * 4);
      for (std::size_t k = 0; k < run; ++k) {
        detail::store_u32le(block.payload.data() + base + k * 4, words[i + k]);
      }
    }
    i += run;
  }
  return block;
}

std::vector<std::uint32_t> rle_decompress(const CompressedBlock& block) {
  if (block.codec != CodecId::RLE) {
    throw ConfigError("rle_decompress called on a non-RLE block");
  }
  if (block.original_len_bytes % 4 != 0) {
    throw CorruptStreamError("RLE original length is not word-granular");
  }
  const std::size_t expected = block.original_len_bytes / 4;
  std::vector<std::uint32_t> out;
  out.reserve(expected);

  const std::uint8_t* in = block.payload.data();
  const std::size_t payload_size = block.payload.size();
  std::size_t pos = 0;
  while (pos < payload_size) {
    if (pos + 2 > payload_size) {
      throw CorruptStreamError("RLE token header truncated");
    }
    const std::uint16_t token = detail::load_u16le(in + pos);
    pos += 2;
    const std::size_t run = token & kMaxRun;
    if (run == 0) {
      throw CorruptStreamError("RLE zero-length token");
    }
    if (token & kZeroRunFlag) {
      out.insert(out.end(), run, 0u);
    } else {
      if (pos + run * 4 > payload_size) {
        throw CorruptStreamError("RLE literal run truncated");
      }
      for (std::size_t k = 0; k < run; ++k) {
        out.push_back(detail::load_u32le(in + pos + k * 4));
      }
      pos += run * 4;
    }
    if (out.size() > expected) {
      throw CorruptStreamError("RLE stream decodes past declared length");
    }
  }
  if (out.size() != expected) {
    throw CorruptStreamError("RLE stream ends short of declared length");
  }
  return out;
}

}  // namespace cdma
