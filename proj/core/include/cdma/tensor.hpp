// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cdma/error.hpp"

namespace cdma {

// Linearization order of the 4-D activation array, outermost dimension
// listed first; NCHW iterates W fastest, CHWN iterates N fastest.
enum class Layout : std::uint8_t { NCHW = 0, NHWC = 1, CHWN = 2 };

inline constexpr Layout kAllLayouts[] = {Layout::NCHW, Layout::NHWC,
                                         Layout::CHWN};

const char* layout_name(Layout layout);
Layout layout_from_name(std::string_view name);

struct Dims {
  std::uint32_t n = 0;  // minibatch images
  std::uint32_t c = 0;  // channels
  std::uint32_t h = 0;  // rows
  std::uint32_t w = 0;  // columns

  std::size_t elements() const {
    return std::size_t{n} * c * h * w;
  }
  bool operator==(const Dims&) const = default;
};

// Dense 4-D tensor of 32-bit words stored flat in the linearization order
// named by layout(). A word is "zero" iff its bit pattern is 0x00000000;
// -0.0f (0x80000000) and denormals count as nonzero, which keeps every
// codec round trip bit-exact.
class ActivationTensor {
public:
  ActivationTensor(Dims dims, Layout layout);  // zero-filled
  ActivationTensor(Dims dims, Layout layout, std::vector<std::uint32_t> data);

  const Dims& dims() const { return dims_; }
  Layout layout() const { return layout_; }
  std::span<const std::uint32_t> words() const { return data_; }
  std::uint64_t size_bytes() const { return data_.size() * 4ull; }

  // Flat position of logical index (n, c, h, w) under the current layout.
  std::size_t flat_index(std::uint32_t n, std::uint32_t c, std::uint32_t h,
                         std::uint32_t w) const;
  std::uint32_t at(std::uint32_t n, std::uint32_t c, std::uint32_t h,
                   std::uint32_t w) const {
    return data_[flat_index(n, c, h, w)];
  }
  std::uint32_t& at(std::uint32_t n, std::uint32_t c, std::uint32_t h,
                    std::uint32_t w) {
    return data_[flat_index(n, c, h, w)];
  }

private:
  Dims dims_;
  Layout layout_;
  std::vector<std::uint32_t> data_;
};

struct DensityStats {
  std::uint64_t nonzero_count = 0;
  std::uint64_t total_count = 0;
  double density = 0.0;   // nonzero / total
  double sparsity = 0.0;  // 1 - density
};

DensityStats density(std::span<const std::uint32_t> words);
DensityStats density(const ActivationTensor& t);

// Returns a tensor with the same dims and logical content, relinearized
// under `target`. Permuting there and back reproduces the bit pattern.
ActivationTensor permute_layout(const ActivationTensor& t, Layout target);

// Size-weighted network-wide sparsity: sum(sparsity_i * bytes_i) / sum(bytes_i).
// Layers with bigger activation maps count proportionally more.
double weighted_network_sparsity(
    std::span<const std::pair<DensityStats, std::uint64_t>> layers);

// Tensor container file, all integers little-endian:
//   magic "CDMA", version u16 = 1, dtype u8 (0 = 32-bit float),
//   layout u8 (0 = NCHW, 1 = NHWC, 2 = CHWN), dims u32 N, C, H, W,
//   then N*C*H*W raw words.
void write_tensor_file(const std::filesystem::path& path,
                       const ActivationTensor& t);
ActivationTensor read_tensor_file(const std::filesystem::path& path);

inline constexpr std::size_t kTensorFileHeaderBytes = 24;

}  // namespace cdma
