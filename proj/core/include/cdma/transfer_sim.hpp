// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdma/error.hpp"

namespace cdma {

// Platform constants for the offload/prefetch model. Defaults match a
// 16 GB/s PCIe gen3 link and a GPU with 200 GB/s of memory read bandwidth
// budgeted for the compressing DMA engine out of 236 GB/s left over by the
// compute kernels.
struct PlatformConfig {
  double pcie_bw = 16e9;            // bytes/sec
  double dram_comp_budget = 200e9;  // bytes/sec the engine may read
  double dram_leftover = 236e9;     // bytes/sec headroom, reporting only
  double memory_latency = 350e-9;   // seconds, request to first data

  // What-if mode: overlap each layer's transfer with the *next* layer's
  // compute instead of its own. Not the primary model.
  bool overlap_next_layer = false;

  void validate() const;
};

// One layer of an offload trace. Times are per-minibatch compute latencies;
// offload_bytes is the full activation map moved each direction.
struct LayerTraceRecord {
  std::string name;
  std::uint64_t offload_bytes = 0;
  double density = 0.0;   // nonzero fraction in [0, 1]
  double fwd_time = 0.0;  // seconds
  double bwd_time = 0.0;  // seconds
};

// Time to move `bytes` of original data off the GPU at compression ratio
// `ratio` (>= 1; 1 models the uncompressed baseline). Keeping PCIe saturated
// with compressed data needs a GPU-memory read rate of ratio * pcie_bw
// ("COMP_BW"); when that exceeds the DRAM budget the transfer slows by
// COMP_BW / budget, which is exactly
//   max((bytes / ratio) / pcie_bw, bytes / dram_comp_budget).
double offload_time(std::uint64_t bytes, double ratio,
                    const PlatformConfig& cfg = {});

// Transfer fully overlaps compute; the step takes whichever is longer.
double layer_step_time(double compute, double transfer);

// Expected ZVC ratio at a given density, from the record format: 32 words
// become 1 mask word plus the nonzeros, so ratio = 32 / (1 + 32 d). Clamped
// to 1 (the engine would bypass compression rather than expand).
double zvc_expected_ratio(double density);
std::vector<double> derive_zvc_ratios(std::span<const LayerTraceRecord> trace);

struct LayerSimResult {
  std::string name;
  double ratio = 1.0;
  double offload_time = 0.0;   // seconds, compressed
  double prefetch_time = 0.0;  // seconds, compressed
  double stall_time = 0.0;     // transfer time not hidden under compute
};

struct SimReport {
  std::vector<LayerSimResult> layers;
  double vdnn_time = 0.0;    // all ratios forced to 1
  double cdma_time = 0.0;    // with the given ratios
  double oracle_time = 0.0;  // every transfer hidden
  double speedup_vs_vdnn = 1.0;
  double vdnn_traffic_bytes = 0.0;
  double cdma_traffic_bytes = 0.0;
  double traffic_quotient = 1.0;  // cdma / vdnn offloaded bytes
  double weighted_avg_ratio = 1.0;
  double max_ratio = 1.0;
};

// Evaluates one training iteration: forward = sum over layers of
// max(fwd_time, offload_time), backward likewise with prefetch, oracle =
// pure compute. ratios must match the trace length, each >= 1.
SimReport simulate(std::span<const LayerTraceRecord> trace,
                   std::span<const double> ratios,
                   const PlatformConfig& cfg = {});

struct TrafficReport {
  double vdnn_bytes = 0.0;
  double cdma_bytes = 0.0;
  double quotient = 1.0;  // cdma / vdnn
};

// Offloaded-bytes accounting only, no timing.
TrafficReport traffic_report(std::span<const LayerTraceRecord> trace,
                             std::span<const double> ratios);

// Traffic-true aggregate ratio: sum(bytes) / sum(bytes / ratio). Harmonic
// weighting, so it reflects the actual reduction in PCIe traffic.
double weighted_avg_ratio(std::span<const LayerTraceRecord> trace,
                          std::span<const double> ratios);

// Layer trace file: UTF-8 text, one layer per row,
//   name, offload_bytes, density, fwd_ms, bwd_ms
// comma-separated; lines starting with '#' and blank lines are skipped.
std::vector<LayerTraceRecord> read_trace_file(
    const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path,
                      std::span<const LayerTraceRecord> trace,
                      std::string_view note = {});

}  // namespace cdma
