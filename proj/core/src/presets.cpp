// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <string>

#include "cdma/workload.hpp"

namespace cdma {

namespace {

// Output shapes follow the published configurations (Caffe-style prototxts);
// compute_scale is a synthetic compute/transfer ratio used to fabricate
// placeholder timings: cheap pooling layers stay transfer-bound, late
// convolutions and the classifier stay compute-bound.

constexpr PresetLayer kAlexNet[] = {
    {"conv0", 96, 55, 55, 0.75}, {"pool0", 96, 27, 27, 0.2},
    {"conv1", 256, 27, 27, 0.85}, {"pool1", 256, 13, 13, 0.2},
    {"conv2", 384, 13, 13, 1.4},  {"conv3", 384, 13, 13, 1.5},
    {"conv4", 256, 13, 13, 1.3},  {"pool2", 256, 6, 6, 0.2},
    {"fc0", 4096, 1, 1, 6.0},     {"fc1", 4096, 1, 1, 4.0},
    {"fc2", 1000, 1, 1, 2.5},
};

constexpr PresetLayer kOverFeat[] = {
    {"conv0", 96, 56, 56, 0.7},   {"pool0", 96, 28, 28, 0.2},
    {"conv1", 256, 24, 24, 0.9},  {"pool1", 256, 12, 12, 0.2},
    {"conv2", 512, 12, 12, 1.4},  {"conv3", 1024, 12, 12, 1.6},
    {"conv4", 1024, 12, 12, 1.6}, {"pool2", 1024, 6, 6, 0.2},
    {"fc0", 3072, 1, 1, 6.0},     {"fc1", 4096, 1, 1, 4.0},
    {"fc2", 1000, 1, 1, 2.5},
};

constexpr PresetLayer kNiN[] = {
    {"conv0", 96, 54, 54, 0.8},   {"cccp0", 96, 54, 54, 0.5},
    {"cccp1", 96, 54, 54, 0.5},   {"pool0", 96, 27, 27, 0.2},
    {"conv1", 256, 27, 27, 1.0},  {"cccp2", 256, 27, 27, 0.6},
    {"cccp3", 256, 27, 27, 0.6},  {"pool1", 256, 13, 13, 0.2},
    {"conv2", 384, 13, 13, 1.3},  {"cccp4", 384, 13, 13, 0.7},
    {"cccp5", 384, 13, 13, 0.7},  {"pool2", 384, 6, 6, 0.2},
    {"conv3", 1024, 6, 6, 1.5},   {"cccp6", 1024, 6, 6, 0.8},
    {"cccp7", 1000, 6, 6, 0.8},   {"pool3", 1000, 1, 1, 0.2},
};

constexpr PresetLayer kVgg[] = {
    {"conv0_0", 64, 224, 224, 0.6},  {"conv0_1", 64, 224, 224, 0.9},
    {"pool0", 64, 112, 112, 0.2},    {"conv1_0", 128, 112, 112, 0.9},
    {"conv1_1", 128, 112, 112, 1.0}, {"pool1", 128, 56, 56, 0.2},
    {"conv2_0", 256, 56, 56, 1.1},   {"conv2_1", 256, 56, 56, 1.2},
    {"conv2_2", 256, 56, 56, 1.2},   {"pool2", 256, 28, 28, 0.2},
    {"conv3_0", 512, 28, 28, 1.4},   {"conv3_1", 512, 28, 28, 1.5},
    {"conv3_2", 512, 28, 28, 1.5},   {"pool3", 512, 14, 14, 0.2},
    {"conv4_0", 512, 14, 14, 1.7},   {"conv4_1", 512, 14, 14, 1.7},
    {"conv4_2", 512, 14, 14, 1.7},   {"pool4", 512, 7, 7, 0.2},
    {"fc0", 4096, 1, 1, 7.0},        {"fc1", 4096, 1, 1, 4.0},
    {"fc2", 1000, 1, 1, 2.5},
};

constexpr PresetLayer kSqueezeNet[] = {
    {"conv0", 96, 111, 111, 0.7}, {"pool0", 96, 55, 55, 0.2},
    {"fire0", 128, 55, 55, 0.8},  {"fire1", 128, 55, 55, 0.8},
    {"fire2", 256, 55, 55, 0.9},  {"pool1", 256, 27, 27, 0.2},
    {"fire3", 256, 27, 27, 1.0},  {"fire4", 384, 27, 27, 1.1},
    {"fire5", 384, 27, 27, 1.1},  {"fire6", 512, 27, 27, 1.2},
    {"pool2", 512, 13, 13, 0.2},  {"fire7", 512, 13, 13, 1.3},
    {"conv1", 1000, 13, 13, 1.5}, {"pool3", 1000, 1, 1, 0.2},
};

constexpr PresetLayer kGoogLeNet[] = {
    {"conv0", 64, 112, 112, 0.7}, {"pool0", 64, 56, 56, 0.2},
    {"conv1", 64, 56, 56, 0.8},   {"conv2", 192, 56, 56, 1.0},
    {"pool1", 192, 28, 28, 0.2},  {"inc3a", 256, 28, 28, 1.1},
    {"inc3b", 480, 28, 28, 1.2},  {"pool2", 480, 14, 14, 0.2},
    {"inc4a", 512, 14, 14, 1.3},  {"inc4b", 512, 14, 14, 1.3},
    {"inc4c", 512, 14, 14, 1.3},  {"inc4d", 528, 14, 14, 1.4},
    {"inc4e", 832, 14, 14, 1.5},  {"pool3", 832, 7, 7, 0.2},
    {"inc5a", 832, 7, 7, 1.6},    {"inc5b", 1024, 7, 7, 1.7},
    {"pool4", 1024, 1, 1, 0.2},   {"fc0", 1000, 1, 1, 2.0},
};

constexpr NetworkPreset kPresets[] = {
    {"alexnet", 256, kAlexNet},       {"overfeat", 256, kOverFeat},
    {"nin", 128, kNiN},               {"vgg", 128, kVgg},
    {"squeezenet", 512, kSqueezeNet}, {"googlenet", 256, kGoogLeNet},
};

// Reference link speed used to turn bytes into placeholder milliseconds.
constexpr double kReferencePcie = 16e9;

double round_us(double seconds) {
  return std::round(seconds * 1e6) / 1e6;
}

}  // namespace

std::span<const NetworkPreset> network_presets() { return kPresets; }

const NetworkPreset& find_preset(std::string_view name) {
  for (const NetworkPreset& p : kPresets) {
    if (p.name == name) {
      return p;
    }
  }
  throw ConfigError("unknown network preset: " + std::string(name));
}

std::vector<LayerTraceRecord> make_preset_trace(std::string_view name,
                                                double density) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw ConfigError("density must lie in [0, 1]");
  }
  const NetworkPreset& preset = find_preset(name);
  std::vector<LayerTraceRecord> trace;
  trace.reserve(preset.layers.size());
  for (const PresetLayer& layer : preset.layers) {
    LayerTraceRecord rec;
    rec.name = std::string(layer.name);
    rec.offload_bytes = std::uint64_t{preset.batch} * layer.c * layer.h *
                        layer.w * sizeof(std::uint32_t);
    rec.density = density;
    const double xfer = static_cast<double>(rec.offload_bytes) / kReferencePcie;
    rec.fwd_time = round_us(xfer * layer.compute_scale);
    rec.bwd_time = round_us(xfer * layer.compute_scale * 1.9);
    trace.push_back(std::move(rec));
  }
  return trace;
}

std::vector<std::pair<std::string, std::vector<LayerTraceRecord>>>
load_trace_presets() {
  std::vector<std::pair<std::string, std::vector<LayerTraceRecord>>> all;
  all.reserve(std::size(kPresets));
  for (const NetworkPreset& p : kPresets) {
    // AlexNet's published network-wide average density; the others default
    // to an even split. Density is a free parameter either way.
    const double density = (p.name == "alexnet") ? 0.506 : 0.5;
    all.emplace_back(std::string(p.name), make_preset_trace(p.name, density));
  }
  return all;
}

}  // namespace cdma
