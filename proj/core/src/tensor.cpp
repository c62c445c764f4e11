// SPDX-License-Identifier: Apache-2.0
#include "cdma/tensor.hpp"

#include <limits>
#include <string>

namespace cdma {

const char* layout_name(Layout layout) {
  switch (layout) {
    case Layout::NCHW: return "NCHW";
    case Layout::NHWC: return "NHWC";
    case Layout::CHWN: return "CHWN";
  }
  throw ConfigError("unknown layout code");
}

Layout layout_from_name(std::string_view name) {
  if (name == "NCHW" || name == "nchw") return Layout::NCHW;
  if (name == "NHWC" || name == "nhwc") return Layout::NHWC;
  if (name == "CHWN" || name == "chwn") return Layout::CHWN;
  throw ConfigError("unknown layout name: " + std::string(name));
}

namespace {

void check_dims(const Dims& d) {
  if (d.n == 0 || d.c == 0 || d.h == 0 || d.w == 0) {
    throw ConfigError("tensor dims must all be nonzero");
  }
  // Guard the size_t product; each dim is u32 so two pair products suffice.
  std::uint64_t nc = std::uint64_t{d.n} * d.c;
  std::uint64_t hw = std::uint64_t{d.h} * d.w;
  if (nc != 0 && hw > std::numeric_limits<std::uint64_t>::max() / nc) {
    throw ConfigError("tensor element count overflows");
  }
}

}  // namespace

ActivationTensor::ActivationTensor(Dims dims, Layout layout)
    : dims_(dims), layout_(layout) {
  check_dims(dims_);
  data_.assign(dims_.elements(), 0u);
}

ActivationTensor::ActivationTensor(Dims dims, Layout layout,
                                   std::vector<std::uint32_t> data)
    : dims_(dims), layout_(layout), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != dims_.elements()) {
    throw ConfigError("tensor data length does not match dims");
  }
}

std::size_t ActivationTensor::flat_index(std::uint32_t n, std::uint32_t c,
                                         std::uint32_t h,
                                         std::uint32_t w) const {
  const std::size_t N = dims_.n, C = dims_.c, H = dims_.h, W = dims_.w;
  switch (layout_) {
    case Layout::NCHW: return ((std::size_t{n} * C + c) * H + h) * W + w;
    case Layout::NHWC: return ((std::size_t{n} * H + h) * W + w) * C + c;
    case Layout::CHWN: return ((std::size_t{c} * H + h) * W + w) * N + n;
  }
  throw ConfigError("unknown layout code");
}

DensityStats density(std::span<const std::uint32_t> words) {
  if (words.empty()) {
    throw ConfigError("density of an empty word sequence is undefined");
  }
  std::uint64_t nonzero = 0;
  for (std::uint32_t v : words) {
    nonzero += (v != 0u);
  }
  DensityStats s;
  s.nonzero_count = nonzero;
  s.total_count = words.size();
  s.density = static_cast<double>(nonzero) / static_cast<double>(words.size());
  s.sparsity = 1.0 - s.density;
  return s;
}

DensityStats density(const ActivationTensor& t) { return density(t.words()); }

ActivationTensor permute_layout(const ActivationTensor& t, Layout target) {
  if (target == t.layout()) {
    return t;
  }
  const Dims& d = t.dims();
  ActivationTensor out(d, target);
  for (std::uint32_t n = 0; n < d.n; ++n) {
    for (std::uint32_t c = 0; c < d.c; ++c) {
      for (std::uint32_t h = 0; h < d.h; ++h) {
        for (std::uint32_t w = 0; w < d.w; ++w) {
          out.at(n, c, h, w) = t.at(n, c, h, w);
        }
      }
    }
  }
  return out;
}

double weighted_network_sparsity(
    std::span<const std::pair<DensityStats, std::uint64_t>> layers) {
  if (layers.empty()) {
    throw ConfigError("weighted_network_sparsity needs at least one layer");
  }
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& [stats, bytes] : layers) {
    if (bytes == 0) {
      throw ConfigError("layer byte size must be positive");
    }
    weighted += stats.sparsity * static_cast<double>(bytes);
    total += static_cast<double>(bytes);
  }
  return weighted / total;
}

}  // namespace cdma
