// SPDX-License-Identifier: Apache-2.0
#include "cdma/transfer_sim.hpp"

#include <algorithm>
#include <cmath>

namespace cdma {

void PlatformConfig::validate() const {
  if (!(pcie_bw > 0.0) || !(dram_comp_budget > 0.0) ||
      !(dram_leftover > 0.0) || !(memory_latency > 0.0)) {
    throw ConfigError("platform bandwidths and latency must be positive");
  }
  if (dram_comp_budget > dram_leftover) {
    throw ConfigError("compression budget exceeds leftover DRAM bandwidth");
  }
}

double offload_time(std::uint64_t bytes, double ratio,
                    const PlatformConfig& cfg) {
  cfg.validate();
  if (bytes == 0) {
    throw ConfigError("transfer size must be positive");
  }
  if (!(ratio >= 1.0)) {
    throw ConfigError("compression ratio must be >= 1");
  }
  const double b = static_cast<double>(bytes);
  const double pcie_time = (b / ratio) / cfg.pcie_bw;
  const double dram_time = b / cfg.dram_comp_budget;
  // When COMP_BW = ratio * pcie_bw fits in the budget the link limits the
  // transfer; beyond it the engine cannot feed PCIe and the DRAM budget
  // limits it. Both branches meet at bytes / dram_comp_budget.
  return std::max(pcie_time, dram_time);
}

double layer_step_time(double compute, double transfer) {
  return std::max(compute, transfer);
}

double zvc_expected_ratio(double density) {
  if (density < 0.0 || density > 1.0) {
    throw ConfigError("density must lie in [0, 1]");
  }
  const double ratio = 32.0 / (1.0 + 32.0 * density);
  return std::max(1.0, ratio);
}

std::vector<double> derive_zvc_ratios(
    std::span<const LayerTraceRecord> trace) {
  std::vector<double> ratios;
  ratios.reserve(trace.size());
  for (const LayerTraceRecord& rec : trace) {
    ratios.push_back(zvc_expected_ratio(rec.density));
  }
  return ratios;
}

namespace {

void check_inputs(std::span<const LayerTraceRecord> trace,
                  std::span<const double> ratios) {
  if (trace.empty()) {
    throw ConfigError("trace must contain at least one layer");
  }
  if (ratios.size() != trace.size()) {
    throw ConfigError("one ratio per trace layer required");
  }
  for (const LayerTraceRecord& rec : trace) {
    if (rec.offload_bytes == 0) {
      throw ConfigError("layer offload size must be positive: " + rec.name);
    }
    if (rec.fwd_time < 0.0 || rec.bwd_time < 0.0) {
      throw ConfigError("layer compute times must be nonnegative: " +
                        rec.name);
    }
  }
  for (double r : ratios) {
    if (!(r >= 1.0)) {
      throw ConfigError("compression ratios must be >= 1");
    }
  }
}

// Each phase as a one-deep software pipeline: layer i's transfer overlaps
// layer i+1's compute, with a final drain. Used only in the what-if mode.
double phase_time_overlap_next(std::span<const double> computes,
                               std::span<const double> transfers) {
  double total = 0.0;
  double pending = 0.0;
  for (std::size_t i = 0; i < computes.size(); ++i) {
    total += std::max(computes[i], pending);
    pending = transfers[i];
  }
  return total + pending;
}

}  // namespace

SimReport simulate(std::span<const LayerTraceRecord> trace,
                   std::span<const double> ratios,
                   const PlatformConfig& cfg) {
  cfg.validate();
  check_inputs(trace, ratios);

  const std::size_t n = trace.size();
  std::vector<double> fwd(n), bwd(n), xfer(n), base_xfer(n);
  for (std::size_t i = 0; i < n; ++i) {
    fwd[i] = trace[i].fwd_time;
    bwd[i] = trace[i].bwd_time;
    xfer[i] = offload_time(trace[i].offload_bytes, ratios[i], cfg);
    base_xfer[i] = offload_time(trace[i].offload_bytes, 1.0, cfg);
  }

  SimReport report;
  report.layers.reserve(n);
  if (cfg.overlap_next_layer) {
    // Backward propagation visits layers in reverse order.
    std::vector<double> bwd_rev(bwd.rbegin(), bwd.rend());
    std::vector<double> xfer_rev(xfer.rbegin(), xfer.rend());
    std::vector<double> base_rev(base_xfer.rbegin(), base_xfer.rend());
    report.cdma_time = phase_time_overlap_next(fwd, xfer) +
                       phase_time_overlap_next(bwd_rev, xfer_rev);
    report.vdnn_time = phase_time_overlap_next(fwd, base_xfer) +
                       phase_time_overlap_next(bwd_rev, base_rev);
  } else {
    report.cdma_time = 0.0;
    report.vdnn_time = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      report.cdma_time += layer_step_time(fwd[i], xfer[i]) +
                          layer_step_time(bwd[i], xfer[i]);
      report.vdnn_time += layer_step_time(fwd[i], base_xfer[i]) +
                          layer_step_time(bwd[i], base_xfer[i]);
    }
  }

  report.oracle_time = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    report.oracle_time += fwd[i] + bwd[i];

    LayerSimResult layer;
    layer.name = trace[i].name;
    layer.ratio = ratios[i];
    layer.offload_time = xfer[i];
    layer.prefetch_time = xfer[i];
    layer.stall_time = std::max(0.0, xfer[i] - fwd[i]) +
                       std::max(0.0, xfer[i] - bwd[i]);
    report.layers.push_back(std::move(layer));
  }

  report.speedup_vs_vdnn = report.vdnn_time / report.cdma_time;

  const TrafficReport traffic = traffic_report(trace, ratios);
  report.vdnn_traffic_bytes = traffic.vdnn_bytes;
  report.cdma_traffic_bytes = traffic.cdma_bytes;
  report.traffic_quotient = traffic.quotient;
  report.weighted_avg_ratio = weighted_avg_ratio(trace, ratios);
  report.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  return report;
}

TrafficReport traffic_report(std::span<const LayerTraceRecord> trace,
                             std::span<const double> ratios) {
  check_inputs(trace, ratios);
  TrafficReport t;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double b = static_cast<double>(trace[i].offload_bytes);
    t.vdnn_bytes += b;
    t.cdma_bytes += b / ratios[i];
  }
  t.quotient = t.cdma_bytes / t.vdnn_bytes;
  return t;
}

double weighted_avg_ratio(std::span<const LayerTraceRecord> trace,
                          std::span<const double> ratios) {
  const TrafficReport t = traffic_report(trace, ratios);
  return t.vdnn_bytes / t.cdma_bytes;
}

}  // namespace cdma
