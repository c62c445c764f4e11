// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "cdma/error.hpp"
#include "cdma/tensor.hpp"

namespace cdma {

// Numeric tags are part of the file format; do not reorder.
enum class CodecId : std::uint8_t { ZVC = 0, RLE = 1, DEFLATE = 2 };

const char* codec_name(CodecId codec);
CodecId codec_from_name(std::string_view name);

inline constexpr std::uint32_t kDefaultWindowBytes = 4096;
inline constexpr std::size_t kZvcGroupWords = 32;

// DEFLATE effort is pinned to zlib's default so streams are reproducible.
inline constexpr std::uint8_t kDeflateLevel = 6;

// Per-block header charged in all ratio accounting:
// codec u8, level u8, window_bytes u32, original_len u32.
inline constexpr std::uint64_t kBlockHeaderBytes = 10;

// One independently decodable compression window.
struct CompressedBlock {
  CodecId codec = CodecId::ZVC;
  std::uint8_t level = 0;  // DEFLATE effort level; 0 for the other codecs
  std::uint32_t window_bytes = kDefaultWindowBytes;
  std::uint64_t original_len_bytes = 0;  // always a multiple of 4
  std::vector<std::uint8_t> payload;
};

// Aggregate size accounting for a windowed compression run.
//
// "Compression ratio" conventions differ on what metadata they charge, so
// three readings are exposed:
//   ratio()          input / (payloads + per-block headers)
//   payload_ratio()  input / payloads            (headers excluded)
//   data_ratio()     input / (payloads - codec metadata), i.e. what a perfect
//                    zero-eliding code would pay; for ZVC the metadata is the
//                    masks, for RLE the token headers, for DEFLATE zero.
struct CompressionReport {
  std::uint64_t input_bytes = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t metadata_bytes = 0;
  std::uint64_t output_bytes = 0;

  double ratio() const;
  double payload_ratio() const;
  double data_ratio() const;  // +inf when the payload is all metadata
};

// Zero-value compression: per 32-word group, a 32-bit mask (bit i, LSB-first,
// set iff word i is nonzero) followed by the nonzero words in order. A tail
// group shorter than 32 words still emits a full mask with the high bits
// forced to zero; the decoder stops at original_len_bytes.
CompressedBlock zvc_compress(std::span<const std::uint32_t> words,
                             std::uint32_t window_bytes = kDefaultWindowBytes);
std::vector<std::uint32_t> zvc_decompress(const CompressedBlock& block);

// Run-length encoding: a token stream of 16-bit little-endian headers.
// Top bit 1 = run of L zero words, top bit 0 = L literal words followed
// inline (L in 1..32767; longer runs split). Runs are greedy and maximal,
// so literal runs never contain a zero word.
CompressedBlock rle_compress(std::span<const std::uint32_t> words,
                             std::uint32_t window_bytes = kDefaultWindowBytes);
std::vector<std::uint32_t> rle_decompress(const CompressedBlock& block);

// DEFLATE-format baseline (zlib stream, fixed default effort level).
// Serves as the compressibility upper bound; not layout- or zero-specific.
CompressedBlock deflate_compress(
    std::span<const std::uint32_t> words,
    std::uint32_t window_bytes = kDefaultWindowBytes);
std::vector<std::uint32_t> deflate_decompress(const CompressedBlock& block);

CompressedBlock compress(CodecId codec, std::span<const std::uint32_t> words,
                         std::uint32_t window_bytes = kDefaultWindowBytes);
std::vector<std::uint32_t> decompress(const CompressedBlock& block);

// Bytes of codec-internal metadata inside the payload (ZVC masks, RLE token
// headers). Used for CompressionReport::data_ratio().
std::uint64_t codec_metadata_bytes(const CompressedBlock& block);

struct TensorCompression {
  std::vector<CompressedBlock> blocks;
  CompressionReport report;
};

// Splits the flat word stream into windows of window_bytes (the last one may
// be short), compresses each window independently, and aggregates sizes.
// window_bytes must be a nonzero multiple of 128.
TensorCompression compress_words(
    CodecId codec, std::span<const std::uint32_t> words,
    std::uint32_t window_bytes = kDefaultWindowBytes);
TensorCompression compress_tensor(
    const ActivationTensor& t, CodecId codec,
    std::uint32_t window_bytes = kDefaultWindowBytes);

std::vector<std::uint32_t> decompress_blocks(
    std::span<const CompressedBlock> blocks);

// Compressed stream file, all integers little-endian:
//   magic "CDMZ", version u16 = 1, codec u8, window_bytes u32,
//   original_len u64, then one record per block: payload_len u32 + payload.
// Block boundaries are implied: every block covers window_bytes of original
// data except the last, which covers the remainder.
struct CompressedFile {
  CodecId codec = CodecId::ZVC;
  std::uint32_t window_bytes = kDefaultWindowBytes;
  std::uint64_t original_len_bytes = 0;
  std::vector<CompressedBlock> blocks;
};

void write_compressed_file(const std::filesystem::path& path, CodecId codec,
                           std::uint32_t window_bytes,
                           std::span<const CompressedBlock> blocks);
CompressedFile read_compressed_file(const std::filesystem::path& path);

}  // namespace cdma
