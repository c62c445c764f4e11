// SPDX-License-Identifier: Apache-2.0
#include <zlib.h>

#include "bytes.hpp"
#include "cdma/codec.hpp"

namespace cdma {

namespace {

std::vector<std::uint8_t> words_to_bytes_le(
    std::span<const std::uint32_t> words) {
  std::vector<std::uint8_t> bytes(words.size() * 4);
  for (std::size_t i = 0; i < words.size(); ++i) {
    detail::store_u32le(bytes.data() + i * 4, words[i]);
  }
  return bytes;
}

}  // namespace

CompressedBlock deflate_compress(std::span<const std::uint32_t> words,
                                 std::uint32_t window_bytes) {
  CompressedBlock block;
  block.codec = CodecId::DEFLATE;
  block.level = kDeflateLevel;
  block.window_bytes = window_bytes;
  block.original_len_bytes = words.size() * 4ull;

  const std::vector<std::uint8_t> src = words_to_bytes_le(words);
  uLongf dst_len = compressBound(static_cast<uLong>(src.size()));
  block.payload.resize(dst_len);
  const int rc =
      compress2(block.payload.data(), &dst_len, src.data(),
                static_cast<uLong>(src.size()), kDeflateLevel);
  if (rc != Z_OK) {
    throw Error("zlib compress2 failed");
  }
  block.payload.resize(dst_len);
  return block;
}

std::vector<std::uint32_t> deflate_decompress(const CompressedBlock& block) {
  if (block.codec != CodecId::DEFLATE) {
    throw ConfigError("deflate_decompress called on a non-DEFLATE block");
  }
  if (block.original_len_bytes % 4 != 0) {
    throw CorruptStreamError("DEFLATE original length is not word-granular");
  }
  // Keep the destination pointer valid even for a zero-length stream.
  std::vector<std::uint8_t> raw(block.original_len_bytes + 1);
  uLongf dst_len = static_cast<uLongf>(block.original_len_bytes);
  uLong src_len = static_cast<uLong>(block.payload.size());
  const int rc = uncompress2(raw.data(), &dst_len, block.payload.data(),
                             &src_len);
  if (rc != Z_OK) {
    throw CorruptStreamError("zlib stream does not inflate cleanly");
  }
  if (dst_len != block.original_len_bytes) {
    throw CorruptStreamError("zlib stream inflates to the wrong length");
  }
  if (src_len != block.payload.size()) {
    throw CorruptStreamError("zlib payload has trailing garbage");
  }
  std::vector<std::uint32_t> out(block.original_len_bytes / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = detail::load_u32le(raw.data() + i * 4);
  }
  return out;
}

}  // namespace cdma
