// SPDX-License-Identifier: Apache-2.0
#include <cstring>
#include <fstream>

#include "bytes.hpp"
#include "cdma/codec.hpp"

namespace cdma {

namespace {

constexpr char kMagic[4] = {'C', 'D', 'M', 'Z'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kFileHeaderBytes = 19;

}  // namespace

void write_compressed_file(const std::filesystem::path& path, CodecId codec,
                           std::uint32_t window_bytes,
                           std::span<const CompressedBlock> blocks) {
  std::uint64_t original_len = 0;
  for (const CompressedBlock& b : blocks) {
    if (b.codec != codec || b.window_bytes != window_bytes) {
      throw ConfigError("blocks disagree with the file-level codec/window");
    }
    if (b.payload.size() > 0xFFFFFFFFull) {
      throw ConfigError("block payload exceeds the u32 length prefix");
    }
    original_len += b.original_len_bytes;
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  std::uint8_t header[kFileHeaderBytes];
  std::memcpy(header, kMagic, 4);
  detail::store_u16le(header + 4, kVersion);
  header[6] = static_cast<std::uint8_t>(codec);
  detail::store_u32le(header + 7, window_bytes);
  detail::store_u64le(header + 11, original_len);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));

  for (const CompressedBlock& b : blocks) {
    std::uint8_t len[4];
    detail::store_u32le(len, static_cast<std::uint32_t>(b.payload.size()));
    out.write(reinterpret_cast<const char*>(len), 4);
    out.write(reinterpret_cast<const char*>(b.payload.data()),
              static_cast<std::streamsize>(b.payload.size()));
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

CompressedFile read_compressed_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::uint8_t header[kFileHeaderBytes];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(header))) {
    throw CorruptStreamError("compressed file shorter than header: " +
                             path.string());
  }
  if (std::memcmp(header, kMagic, 4) != 0) {
    throw CorruptStreamError("bad compressed file magic: " + path.string());
  }
  if (detail::load_u16le(header + 4) != kVersion) {
    throw CorruptStreamError("unsupported compressed file version: " +
                             path.string());
  }
  if (header[6] > 2) {
    throw CorruptStreamError("unknown codec tag: " + path.string());
  }

  CompressedFile file;
  file.codec = static_cast<CodecId>(header[6]);
  file.window_bytes = detail::load_u32le(header + 7);
  file.original_len_bytes = detail::load_u64le(header + 11);
  if (file.window_bytes == 0 || file.window_bytes % 128 != 0) {
    throw CorruptStreamError("invalid window size in header: " +
                             path.string());
  }
  if (file.original_len_bytes % 4 != 0) {
    throw CorruptStreamError("original length is not word-granular: " +
                             path.string());
  }

  std::uint64_t remaining = file.original_len_bytes;
  while (remaining > 0) {
    std::uint8_t len_buf[4];
    in.read(reinterpret_cast<char*>(len_buf), 4);
    if (in.gcount() != 4) {
      throw CorruptStreamError("compressed file truncated at block header: " +
                               path.string());
    }
    const std::uint32_t payload_len = detail::load_u32le(len_buf);
    // No codec in this container expands a window past 1.5x plus a few
    // bytes of stream framing; larger prefixes mean a damaged file, and
    // rejecting them here avoids huge speculative allocations.
    const std::uint64_t payload_cap = 2ull * file.window_bytes + 64;
    if (payload_len > payload_cap) {
      throw CorruptStreamError("block length prefix out of range: " +
                               path.string());
    }

    CompressedBlock block;
    block.codec = file.codec;
    block.level = (file.codec == CodecId::DEFLATE) ? kDeflateLevel : 0;
    block.window_bytes = file.window_bytes;
    block.original_len_bytes =
        std::min<std::uint64_t>(remaining, file.window_bytes);
    block.payload.resize(payload_len);
    in.read(reinterpret_cast<char*>(block.payload.data()), payload_len);
    if (in.gcount() != static_cast<std::streamsize>(payload_len)) {
      throw CorruptStreamError("compressed file truncated inside block: " +
                               path.string());
    }
    remaining -= block.original_len_bytes;
    file.blocks.push_back(std::move(block));
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw CorruptStreamError("compressed file has trailing bytes: " +
                             path.string());
  }
  return file;
}

}  // namespace cdma
