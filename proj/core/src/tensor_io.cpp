// SPDX-License-Identifier: Apache-2.0
#include <cstring>
#include <fstream>

#include "bytes.hpp"
#include "cdma/tensor.hpp"

namespace cdma {

namespace {

constexpr char kMagic[4] = {'C', 'D', 'M', 'A'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 0;

}  // namespace

void write_tensor_file(const std::filesystem::path& path,
                       const ActivationTensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  std::uint8_t header[kTensorFileHeaderBytes];
  std::memcpy(header, kMagic, 4);
  detail::store_u16le(header + 4, kVersion);
  header[6] = kDtypeF32;
  header[7] = static_cast<std::uint8_t>(t.layout());
  detail::store_u32le(header + 8, t.dims().n);
  detail::store_u32le(header + 12, t.dims().c);
  detail::store_u32le(header + 16, t.dims().h);
  detail::store_u32le(header + 20, t.dims().w);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));

  // Encode words explicitly little-endian; chunked to keep writes large.
  std::vector<std::uint8_t> buf;
  buf.resize(1 << 20);
  std::size_t pos = 0;
  for (std::uint32_t v : t.words()) {
    detail::store_u32le(buf.data() + pos, v);
    pos += 4;
    if (pos == buf.size()) {
      out.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(pos));
      pos = 0;
    }
  }
  if (pos > 0) {
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(pos));
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

ActivationTensor read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::uint8_t header[kTensorFileHeaderBytes];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(header))) {
    throw CorruptStreamError("tensor file shorter than header: " +
                             path.string());
  }
  if (std::memcmp(header, kMagic, 4) != 0) {
    throw CorruptStreamError("bad tensor file magic: " + path.string());
  }
  if (detail::load_u16le(header + 4) != kVersion) {
    throw CorruptStreamError("unsupported tensor file version: " +
                             path.string());
  }
  if (header[6] != kDtypeF32) {
    throw CorruptStreamError("unsupported dtype code: " + path.string());
  }
  if (header[7] > 2) {
    throw CorruptStreamError("unknown layout code: " + path.string());
  }
  Dims dims{detail::load_u32le(header + 8), detail::load_u32le(header + 12),
            detail::load_u32le(header + 16), detail::load_u32le(header + 20)};
  if (dims.n == 0 || dims.c == 0 || dims.h == 0 || dims.w == 0) {
    throw CorruptStreamError("tensor file has a zero dimension: " +
                             path.string());
  }

  const std::size_t count = dims.elements();
  std::vector<std::uint8_t> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw CorruptStreamError("tensor file data section truncated: " +
                             path.string());
  }
  // Trailing bytes mean the file does not match its own header.
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw CorruptStreamError("tensor file has trailing bytes: " +
                             path.string());
  }

  std::vector<std::uint32_t> words(count);
  for (std::size_t i = 0; i < count; ++i) {
    words[i] = detail::load_u32le(raw.data() + i * 4);
  }
  return ActivationTensor(dims, static_cast<Layout>(header[7]),
                          std::move(words));
}

}  // namespace cdma
