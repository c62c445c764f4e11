// SPDX-License-Identifier: Apache-2.0
#include "cdma/workload.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace cdma {

void SparsityProfile::validate() const {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw ConfigError("density must lie in [0, 1]");
  }
  if (!(clustering >= 0.0 && clustering <= 1.0)) {
    throw ConfigError("clustering must lie in [0, 1]");
  }
}

namespace {

// Uniform in [0, 1) from the top 53 bits; independent of any library
// distribution internals so streams are reproducible everywhere.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Half-normal magnitude via Box-Muller, one value per call.
float halfnormal(std::mt19937_64& rng) {
  const double u1 =
      (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(rng);
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return static_cast<float>(std::abs(z));
}

}  // namespace

std::vector<std::uint32_t> generate_words(std::size_t count,
                                          const SparsityProfile& profile) {
  profile.validate();
  std::mt19937_64 rng(profile.seed);

  // Two-state chain over the zero/nonzero indicator with stationary nonzero
  // probability `density`. Clustering c scales the off-diagonal transition
  // probabilities by (1 - c), which lengthens runs of both states without
  // moving the stationary point.
  const double d = profile.density;
  const double c = profile.clustering;
  const double p_stay_nonzero = d + (1.0 - d) * c;
  const double p_enter_nonzero = d * (1.0 - c);

  std::vector<std::uint32_t> words(count);
  bool nonzero = uniform01(rng) < d;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) {
      const double p = nonzero ? p_stay_nonzero : p_enter_nonzero;
      nonzero = uniform01(rng) < p;
    }
    if (nonzero) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(halfnormal(rng));
      if (bits == 0) {
        bits = 0x00800000u;  // FLT_MIN, keeps the word nonzero
      }
      words[i] = bits;
    }
  }
  return words;
}

ActivationTensor generate(Dims dims, Layout layout,
                          const SparsityProfile& profile) {
  if (dims.elements() == 0) {
    throw ConfigError("cannot generate a zero-element tensor");
  }
  return ActivationTensor(dims, layout,
                          generate_words(dims.elements(), profile));
}

}  // namespace cdma
