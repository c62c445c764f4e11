// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdma/tensor.hpp"
#include "cdma/transfer_sim.hpp"

namespace cdma {

// Controls for synthetic activation data. Zero/nonzero placement follows a
// two-state Markov chain over the flat word stream whose stationary nonzero
// probability is `density`; `clustering` is the chain's stickiness, so 0
// gives i.i.d. Bernoulli placement and values near 1 give long contiguous
// runs at the same density. Nonzero magnitudes are half-normal (positive,
// ReLU-like). Generation is deterministic in (profile, dims).
struct SparsityProfile {
  double density = 0.5;
  double clustering = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<std::uint32_t> generate_words(std::size_t count,
                                          const SparsityProfile& profile);
ActivationTensor generate(Dims dims, Layout layout,
                          const SparsityProfile& profile);

// Example-network presets. Layer names and output shapes follow the usual
// published configurations of each network; compute times in the emitted
// traces are synthetic placeholders scaled off the transfer time, not
// measurements.
struct PresetLayer {
  std::string_view name;
  std::uint32_t c = 0, h = 0, w = 0;
  double compute_scale = 1.0;  // fwd compute relative to uncompressed transfer
};

struct NetworkPreset {
  std::string_view name;
  std::uint32_t batch = 0;  // minibatch images per iteration
  std::span<const PresetLayer> layers;
};

std::span<const NetworkPreset> network_presets();
const NetworkPreset& find_preset(std::string_view name);

// Builds a trace for one preset with a uniform per-layer density.
std::vector<LayerTraceRecord> make_preset_trace(std::string_view name,
                                                double density);

// All six presets at their default densities.
std::vector<std::pair<std::string, std::vector<LayerTraceRecord>>>
load_trace_presets();

}  // namespace cdma
