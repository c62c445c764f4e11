// SPDX-License-Identifier: Apache-2.0
#include <limits>
#include <string>

#include "bytes.hpp"
#include "cdma/codec.hpp"

namespace cdma {

const char* codec_name(CodecId codec) {
  switch (codec) {
    case CodecId::ZVC: return "zvc";
    case CodecId::RLE: return "rle";
    case CodecId::DEFLATE: return "deflate";
  }
  throw ConfigError("unknown codec tag");
}

CodecId codec_from_name(std::string_view name) {
  if (name == "zvc") return CodecId::ZVC;
  if (name == "rle") return CodecId::RLE;
  if (name == "deflate") return CodecId::DEFLATE;
  throw ConfigError("unknown codec name: " + std::string(name));
}

double CompressionReport::ratio() const {
  return static_cast<double>(input_bytes) / static_cast<double>(output_bytes);
}

double CompressionReport::payload_ratio() const {
  return static_cast<double>(input_bytes) / static_cast<double>(payload_bytes);
}

double CompressionReport::data_ratio() const {
  if (payload_bytes <= metadata_bytes) {
    return std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(input_bytes) /
         static_cast<double>(payload_bytes - metadata_bytes);
}

CompressedBlock compress(CodecId codec, std::span<const std::uint32_t> words,
                         std::uint32_t window_bytes) {
  switch (codec) {
    case CodecId::ZVC: return zvc_compress(words, window_bytes);
    case CodecId::RLE: return rle_compress(words, window_bytes);
    case CodecId::DEFLATE: return deflate_compress(words, window_bytes);
  }
  throw ConfigError("unknown codec tag");
}

std::vector<std::uint32_t> decompress(const CompressedBlock& block) {
  switch (block.codec) {
    case CodecId::ZVC: return zvc_decompress(block);
    case CodecId::RLE: return rle_decompress(block);
    case CodecId::DEFLATE: return deflate_decompress(block);
  }
  throw CorruptStreamError("unknown codec tag in block");
}

std::uint64_t codec_metadata_bytes(const CompressedBlock& block) {
  switch (block.codec) {
    case CodecId::ZVC: {
      const std::uint64_t words = block.original_len_bytes / 4;
      const std::uint64_t groups =
          (words + kZvcGroupWords - 1) / kZvcGroupWords;
      return groups * 4;
    }
    case CodecId::RLE: {
      // Walk the token stream; every token header is 2 bytes of metadata.
      std::uint64_t tokens = 0;
      std::size_t pos = 0;
      while (pos + 2 <= block.payload.size()) {
        const std::uint16_t token =
            detail::load_u16le(block.payload.data() + pos);
        pos += 2;
        ++tokens;
        if (!(token & 0x8000)) {
          pos += std::size_t{token & 0x7FFFu} * 4;
        }
      }
      return tokens * 2;
    }
    case CodecId::DEFLATE:
      return 0;
  }
  throw ConfigError("unknown codec tag");
}

TensorCompression compress_words(CodecId codec,
                                 std::span<const std::uint32_t> words,
                                 std::uint32_t window_bytes) {
  if (window_bytes == 0 || window_bytes % 128 != 0) {
    throw ConfigError("compression window must be a nonzero multiple of 128");
  }
  const std::size_t window_words = window_bytes / 4;

  TensorCompression result;
  result.report.input_bytes = words.size() * 4ull;
  for (std::size_t off = 0; off < words.size(); off += window_words) {
    const std::size_t n = std::min(window_words, words.size() - off);
    CompressedBlock block =
        compress(codec, words.subspan(off, n), window_bytes);
    result.report.payload_bytes += block.payload.size();
    result.report.metadata_bytes += codec_metadata_bytes(block);
    result.blocks.push_back(std::move(block));
  }
  result.report.output_bytes =
      result.report.payload_bytes + kBlockHeaderBytes * result.blocks.size();
  return result;
}

TensorCompression compress_tensor(const ActivationTensor& t, CodecId codec,
                                  std::uint32_t window_bytes) {
  return compress_words(codec, t.words(), window_bytes);
}

std::vector<std::uint32_t> decompress_blocks(
    std::span<const CompressedBlock> blocks) {
  std::vector<std::uint32_t> out;
  std::uint64_t total = 0;
  for (const CompressedBlock& b : blocks) {
    total += b.original_len_bytes / 4;
  }
  out.reserve(total);
  for (const CompressedBlock& b : blocks) {
    std::vector<std::uint32_t> part = decompress(b);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace cdma
