// SPDX-License-Identifier: Apache-2.0
//
// cdma: compress/decompress activation tensor files, analyze their density
// and compressibility, generate synthetic workloads, and run the
// offload/prefetch transfer simulation.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "cdma/codec.hpp"
#include "cdma/engine_model.hpp"
#include "cdma/tensor.hpp"
#include "cdma/transfer_sim.hpp"
#include "cdma/workload.hpp"

namespace fs = std::filesystem;
using namespace cdma;

namespace {

// Exit codes: 0 success, 2 I/O failure, 3 corrupt input, 4 invalid config.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIo = 2;
constexpr int kExitCorrupt = 3;
constexpr int kExitConfig = 4;

std::string fmt3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void print_compression_report(const CompressionReport& report, CodecId codec,
                              std::uint32_t window) {
  std::printf("codec                 %s\n", codec_name(codec));
  std::printf("window_bytes          %u\n", window);
  std::printf("input_bytes           %llu\n",
              static_cast<unsigned long long>(report.input_bytes));
  std::printf("payload_bytes         %llu\n",
              static_cast<unsigned long long>(report.payload_bytes));
  std::printf("output_bytes          %llu\n",
              static_cast<unsigned long long>(report.output_bytes));
  std::printf("ratio_payload_only    %s\n", fmt3(report.payload_ratio()).c_str());
  std::printf("ratio_with_metadata   %s\n", fmt3(report.ratio()).c_str());
}

Dims parse_dims(const std::vector<std::uint32_t>& raw) {
  if (raw.size() != 4) {
    throw ConfigError("--dims expects N,C,H,W");
  }
  return Dims{raw[0], raw[1], raw[2], raw[3]};
}

// Write through a temp file and rename so a failure never leaves a partial
// output behind.
template <typename WriteFn>
void write_atomically(const fs::path& path, WriteFn&& write_fn) {
  fs::path tmp = path;
  tmp += ".tmp";
  try {
    write_fn(tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

int cmd_compress(const std::string& input, const std::string& output,
                 const std::string& codec_str, std::uint32_t window) {
  const CodecId codec = codec_from_name(codec_str);
  const ActivationTensor tensor = read_tensor_file(input);
  const TensorCompression compressed = compress_tensor(tensor, codec, window);
  write_atomically(output, [&](const fs::path& tmp) {
    write_compressed_file(tmp, codec, window, compressed.blocks);
  });
  print_compression_report(compressed.report, codec, window);
  return kExitOk;
}

int cmd_decompress(const std::string& input, const std::string& output,
                   const std::vector<std::uint32_t>& dims_raw,
                   const std::string& layout_str) {
  const CompressedFile file = read_compressed_file(input);
  const std::vector<std::uint32_t> words = decompress_blocks(file.blocks);

  if (!dims_raw.empty()) {
    // Reconstruct a full tensor file; the compressed container does not
    // carry dims, so the caller supplies them.
    const Dims dims = parse_dims(dims_raw);
    if (dims.elements() != words.size()) {
      throw ConfigError("--dims do not match the decompressed word count");
    }
    const Layout layout = layout_from_name(layout_str);
    ActivationTensor tensor(dims, layout, words);
    write_atomically(output, [&](const fs::path& tmp) {
      write_tensor_file(tmp, tensor);
    });
  } else {
    // Raw little-endian word stream (the tensor file's data section).
    write_atomically(output, [&](const fs::path& tmp) {
      std::FILE* f = std::fopen(tmp.string().c_str(), "wb");
      if (!f) {
        throw IoError("cannot open for writing: " + tmp.string());
      }
      std::vector<std::uint8_t> bytes(words.size() * 4);
      for (std::size_t i = 0; i < words.size(); ++i) {
        const std::uint32_t v = words[i];
        bytes[i * 4 + 0] = static_cast<std::uint8_t>(v);
        bytes[i * 4 + 1] = static_cast<std::uint8_t>(v >> 8);
        bytes[i * 4 + 2] = static_cast<std::uint8_t>(v >> 16);
        bytes[i * 4 + 3] = static_cast<std::uint8_t>(v >> 24);
      }
      const std::size_t written =
          std::fwrite(bytes.data(), 1, bytes.size(), f);
      std::fclose(f);
      if (written != bytes.size()) {
        throw IoError("write failed: " + tmp.string());
      }
    });
  }
  std::printf("decompressed_bytes    %llu\n",
              static_cast<unsigned long long>(words.size() * 4ull));
  return kExitOk;
}

int cmd_analyze(const std::string& input, const std::string& layouts,
                std::uint32_t window) {
  const ActivationTensor tensor = read_tensor_file(input);
  const DensityStats stats = density(tensor);

  std::printf("dims                  %ux%ux%ux%u\n", tensor.dims().n,
              tensor.dims().c, tensor.dims().h, tensor.dims().w);
  std::printf("layout                %s\n", layout_name(tensor.layout()));
  std::printf("words                 %llu\n",
              static_cast<unsigned long long>(stats.total_count));
  std::printf("nonzero               %llu\n",
              static_cast<unsigned long long>(stats.nonzero_count));
  std::printf("density               %s\n", fmt3(stats.density).c_str());
  std::printf("sparsity              %s\n", fmt3(stats.sparsity).c_str());

  std::vector<Layout> targets;
  if (layouts == "all") {
    targets.assign(std::begin(kAllLayouts), std::end(kAllLayouts));
  } else if (layouts == "native") {
    targets.push_back(tensor.layout());
  } else {
    targets.push_back(layout_from_name(layouts));
  }

  std::printf("\nratio_payload_only (window %u)\n", window);
  std::printf("%-10s", "codec");
  for (Layout l : targets) {
    std::printf("%10s", layout_name(l));
  }
  std::printf("\n");
  for (CodecId codec : {CodecId::ZVC, CodecId::RLE, CodecId::DEFLATE}) {
    std::printf("%-10s", codec_name(codec));
    for (Layout l : targets) {
      const ActivationTensor view = permute_layout(tensor, l);
      const auto report = compress_tensor(view, codec, window).report;
      std::printf("%10s", fmt3(report.payload_ratio()).c_str());
    }
    std::printf("\n");
  }
  return kExitOk;
}

int cmd_gen_tensor(const std::string& output,
                   const std::vector<std::uint32_t>& dims_raw, double density,
                   double clustering, std::uint64_t seed,
                   const std::string& layout_str) {
  const Dims dims = parse_dims(dims_raw);
  const Layout layout = layout_from_name(layout_str);
  const SparsityProfile profile{density, clustering, seed};
  const ActivationTensor tensor = generate(dims, layout, profile);
  write_atomically(output, [&](const fs::path& tmp) {
    write_tensor_file(tmp, tensor);
  });
  const DensityStats stats = cdma::density(tensor);
  std::printf("wrote %s: %llu words, measured density %s\n", output.c_str(),
              static_cast<unsigned long long>(stats.total_count),
              fmt3(stats.density).c_str());
  return kExitOk;
}

int cmd_gen_trace(const std::string& output, const std::string& preset,
                  double density) {
  const std::vector<LayerTraceRecord> trace =
      make_preset_trace(preset, density);
  write_atomically(output, [&](const fs::path& tmp) {
    write_trace_file(tmp, trace,
                     "preset '" + preset +
                         "'; compute times are synthetic placeholders");
  });
  std::printf("wrote %s: %zu layers, uniform density %s\n", output.c_str(),
              trace.size(), fmt3(density).c_str());
  return kExitOk;
}

int cmd_simulate(const std::string& input, double pcie_gbps,
                 double budget_gbps, double leftover_gbps, double latency_ns,
                 const std::string& codec_str, double uniform_ratio,
                 bool overlap_next) {
  const std::vector<LayerTraceRecord> trace = read_trace_file(input);

  PlatformConfig cfg;
  cfg.pcie_bw = pcie_gbps * 1e9;
  cfg.dram_comp_budget = budget_gbps * 1e9;
  cfg.dram_leftover = leftover_gbps * 1e9;
  cfg.memory_latency = latency_ns * 1e-9;
  cfg.overlap_next_layer = overlap_next;
  cfg.validate();

  std::vector<double> ratios;
  if (uniform_ratio > 0.0) {
    ratios.assign(trace.size(), uniform_ratio);
  } else if (codec_str == "zvc") {
    ratios = derive_zvc_ratios(trace);
  } else if (codec_str == "none") {
    ratios.assign(trace.size(), 1.0);
  } else {
    throw ConfigError(
        "simulate derives ratios for --codec zvc or none; use --ratio to "
        "pin another codec's measured ratio");
  }

  const SimReport report = simulate(trace, ratios, cfg);
  const BufferSpec buffer =
      size_buffer(cfg.dram_comp_budget, cfg.memory_latency);

  // Size-weighted network sparsity over the trace's density column.
  std::vector<std::pair<DensityStats, std::uint64_t>> layer_stats;
  layer_stats.reserve(trace.size());
  for (const LayerTraceRecord& rec : trace) {
    DensityStats s;
    s.density = rec.density;
    s.sparsity = 1.0 - rec.density;
    layer_stats.emplace_back(s, rec.offload_bytes);
  }
  const double net_sparsity = weighted_network_sparsity(layer_stats);

  std::printf("# platform: pcie %s GB/s, comp budget %s GB/s, leftover %s "
              "GB/s, latency %s ns\n",
              fmt3(pcie_gbps).c_str(), fmt3(budget_gbps).c_str(),
              fmt3(leftover_gbps).c_str(), fmt3(latency_ns).c_str());
  std::printf("# engine: staging buffer %llu bytes (bandwidth-delay "
              "product)\n",
              static_cast<unsigned long long>(buffer.required_bytes));
  std::printf("# engine: peak COMP_BW demand %s GB/s (max ratio x pcie) "
              "against a %s GB/s budget\n",
              fmt3(report.max_ratio * cfg.pcie_bw / 1e9).c_str(),
              fmt3(cfg.dram_comp_budget / 1e9).c_str());
  std::printf("# %-12s %10s %8s %12s %12s %10s\n", "layer", "MB", "ratio",
              "offload_ms", "prefetch_ms", "stall_ms");
  for (std::size_t i = 0; i < report.layers.size(); ++i) {
    const LayerSimResult& l = report.layers[i];
    std::printf("  %-12s %10s %8s %12s %12s %10s\n", l.name.c_str(),
                fmt3(trace[i].offload_bytes / 1e6).c_str(),
                fmt3(l.ratio).c_str(), fmt3(l.offload_time * 1e3).c_str(),
                fmt3(l.prefetch_time * 1e3).c_str(),
                fmt3(l.stall_time * 1e3).c_str());
  }
  std::printf("vdnn_time_ms          %s\n", fmt3(report.vdnn_time * 1e3).c_str());
  std::printf("cdma_time_ms          %s\n", fmt3(report.cdma_time * 1e3).c_str());
  std::printf("oracle_time_ms        %s\n",
              fmt3(report.oracle_time * 1e3).c_str());
  std::printf("speedup_vs_vdnn       %s\n", fmt3(report.speedup_vs_vdnn).c_str());
  std::printf("traffic_vdnn_bytes    %s\n",
              fmt3(report.vdnn_traffic_bytes).c_str());
  std::printf("traffic_cdma_bytes    %s\n",
              fmt3(report.cdma_traffic_bytes).c_str());
  std::printf("traffic_quotient      %s\n", fmt3(report.traffic_quotient).c_str());
  std::printf("weighted_avg_ratio    %s\n",
              fmt3(report.weighted_avg_ratio).c_str());
  std::printf("max_ratio             %s\n", fmt3(report.max_ratio).c_str());
  std::printf("weighted_sparsity     %s\n", fmt3(net_sparsity).c_str());
  return kExitOk;
}

int cmd_bench(double bytes, double density_v, double clustering,
              std::uint64_t seed, const std::string& codec_str) {
  if (!(bytes >= 4096)) {
    throw ConfigError("--bytes must be at least 4096");
  }
  const std::size_t count = static_cast<std::size_t>(bytes / 4.0);
  const SparsityProfile profile{density_v, clustering, seed};
  const std::vector<std::uint32_t> words = generate_words(count, profile);

  std::vector<CodecId> codecs;
  if (codec_str == "all") {
    codecs = {CodecId::ZVC, CodecId::RLE, CodecId::DEFLATE};
  } else {
    codecs = {codec_from_name(codec_str)};
  }

  using clock = std::chrono::steady_clock;
  for (CodecId codec : codecs) {
    const auto t0 = clock::now();
    const CompressedBlock block = compress(codec, words);
    const auto t1 = clock::now();
    const std::vector<std::uint32_t> out = decompress(block);
    const auto t2 = clock::now();
    if (out != words) {
      throw Error("round trip mismatch during bench");
    }
    const double comp_s = std::chrono::duration<double>(t1 - t0).count();
    const double decomp_s = std::chrono::duration<double>(t2 - t1).count();
    const double in_bytes = static_cast<double>(count) * 4.0;
    std::printf("%-8s compress %s B/s  decompress %s B/s  ratio %s\n",
                codec_name(codec), fmt3(in_bytes / comp_s).c_str(),
                fmt3(in_bytes / decomp_s).c_str(),
                fmt3(in_bytes / static_cast<double>(block.payload.size()))
                    .c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressing-DMA activation toolkit"};
  app.require_subcommand(1);

  // compress
  auto* compress_cmd =
      app.add_subcommand("compress", "compress a tensor file (CDMA -> CDMZ)");
  std::string in_path, out_path, codec_str = "zvc";
  std::uint32_t window = kDefaultWindowBytes;
  compress_cmd->add_option("-i,--input", in_path, "input tensor file")
      ->required();
  compress_cmd->add_option("-o,--output", out_path, "output compressed file")
      ->required();
  compress_cmd->add_option("--codec", codec_str, "zvc | rle | deflate")
      ->capture_default_str();
  compress_cmd->add_option("--window", window, "compression window in bytes")
      ->capture_default_str();

  // decompress
  auto* decompress_cmd = app.add_subcommand(
      "decompress", "decompress a CDMZ file to raw words or a tensor file");
  std::vector<std::uint32_t> dims_raw;
  std::string layout_str = "NCHW";
  decompress_cmd->add_option("-i,--input", in_path, "input compressed file")
      ->required();
  decompress_cmd->add_option("-o,--output", out_path, "output file")
      ->required();
  decompress_cmd
      ->add_option("--dims", dims_raw,
                   "N,C,H,W to rebuild a tensor file (default: raw)")
      ->delimiter(',');
  decompress_cmd->add_option("--layout", layout_str,
                             "layout tag when --dims is given")
      ->capture_default_str();

  // analyze
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "density and per-codec ratios for a tensor file");
  std::string layouts = "native";
  analyze_cmd->add_option("-i,--input", in_path, "input tensor file")
      ->required();
  analyze_cmd->add_option("--layouts", layouts,
                          "native | all | NCHW | NHWC | CHWN")
      ->capture_default_str();
  analyze_cmd->add_option("--window", window, "compression window in bytes")
      ->capture_default_str();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate synthetic inputs");
  gen_cmd->require_subcommand(1);
  auto* gen_tensor_cmd =
      gen_cmd->add_subcommand("tensor", "write a synthetic tensor file");
  double density_v = 0.5, clustering = 0.0;
  std::uint64_t seed = 0;
  gen_tensor_cmd->add_option("-o,--output", out_path, "output tensor file")
      ->required();
  gen_tensor_cmd->add_option("--dims", dims_raw, "N,C,H,W")
      ->required()
      ->delimiter(',');
  gen_tensor_cmd->add_option("--density", density_v, "nonzero fraction [0,1]")
      ->capture_default_str();
  gen_tensor_cmd
      ->add_option("--clustering", clustering, "zero-run clustering [0,1]")
      ->capture_default_str();
  gen_tensor_cmd->add_option("--seed", seed, "rng seed")->capture_default_str();
  gen_tensor_cmd->add_option("--layout", layout_str, "NCHW | NHWC | CHWN")
      ->capture_default_str();

  auto* gen_trace_cmd =
      gen_cmd->add_subcommand("trace", "write a preset network trace");
  std::string preset = "alexnet";
  gen_trace_cmd->add_option("-o,--output", out_path, "output trace file")
      ->required();
  gen_trace_cmd
      ->add_option("--preset", preset,
                   "alexnet | overfeat | nin | vgg | squeezenet | googlenet")
      ->capture_default_str();
  gen_trace_cmd->add_option("--density", density_v, "uniform layer density")
      ->capture_default_str();

  // simulate
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "offload/prefetch performance model over a trace");
  double pcie_gbps = 16.0, budget_gbps = 200.0, leftover_gbps = 236.0;
  double latency_ns = 350.0, uniform_ratio = 0.0;
  bool overlap_next = false;
  std::string sim_codec = "zvc";
  simulate_cmd->add_option("-i,--input", in_path, "input trace file")
      ->required();
  simulate_cmd->add_option("--pcie-gbps", pcie_gbps, "PCIe bandwidth")
      ->capture_default_str();
  simulate_cmd
      ->add_option("--comp-budget-gbps", budget_gbps,
                   "DRAM read budget for compression")
      ->capture_default_str();
  simulate_cmd
      ->add_option("--leftover-gbps", leftover_gbps,
                   "DRAM bandwidth left over by compute (reporting)")
      ->capture_default_str();
  simulate_cmd->add_option("--latency-ns", latency_ns, "memory round trip")
      ->capture_default_str();
  simulate_cmd
      ->add_option("--codec", sim_codec,
                   "zvc (ratio from density) | none (ratio 1)")
      ->capture_default_str();
  simulate_cmd->add_option(
      "--ratio", uniform_ratio,
      "override: uniform compression ratio for every layer");
  simulate_cmd->add_flag("--overlap-next", overlap_next,
                         "what-if: overlap transfers with the next layer");

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "single-thread codec throughput");
  double bench_bytes = 256e6;
  std::string bench_codec = "all";
  bench_cmd->add_option("--bytes", bench_bytes, "input size in bytes")
      ->capture_default_str();
  bench_cmd->add_option("--density", density_v, "nonzero fraction")
      ->capture_default_str();
  bench_cmd->add_option("--clustering", clustering, "zero-run clustering")
      ->capture_default_str();
  bench_cmd->add_option("--seed", seed, "rng seed")->capture_default_str();
  bench_cmd->add_option("--codec", bench_codec, "zvc | rle | deflate | all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (compress_cmd->parsed()) {
      return cmd_compress(in_path, out_path, codec_str, window);
    }
    if (decompress_cmd->parsed()) {
      return cmd_decompress(in_path, out_path, dims_raw, layout_str);
    }
    if (analyze_cmd->parsed()) {
      return cmd_analyze(in_path, layouts, window);
    }
    if (gen_cmd->parsed()) {
      if (gen_tensor_cmd->parsed()) {
        return cmd_gen_tensor(out_path, dims_raw, density_v, clustering, seed,
                              layout_str);
      }
      return cmd_gen_trace(out_path, preset, density_v);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(in_path, pcie_gbps, budget_gbps, leftover_gbps,
                          latency_ns, sim_codec, uniform_ratio, overlap_next);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(bench_bytes, density_v, clustering, seed, bench_codec);
    }
    return kExitError;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const CorruptStreamError& e) {
    std::fprintf(stderr, "corrupt input: %s\n", e.what());
    return kExitCorrupt;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
