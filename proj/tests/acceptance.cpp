// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// gating criterion fails. Criterion 8 (software throughput) is reported for
// information only and does not gate.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cdma/codec.hpp"
#include "cdma/engine_model.hpp"
#include "cdma/tensor.hpp"
#include "cdma/transfer_sim.hpp"
#include "cdma/workload.hpp"

using namespace cdma;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok, double elapsed_s,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL",
              criterion, name, elapsed_s, detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++g_failures;
  }
}

struct Timer {
  clock_type::time_point start = clock_type::now();
  double elapsed() const {
    return std::chrono::duration<double>(clock_type::now() - start).count();
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: ZVC golden records, exact

void criterion_1() {
  Timer timer;
  bool ok = true;
  std::string detail;

  const std::vector<std::uint32_t> zeros(32, 0u);
  const CompressedBlock z = zvc_compress(zeros);
  ok &= (z.payload.size() == 4);
  ok &= (128.0 / static_cast<double>(z.payload.size()) == 32.0);

  std::vector<std::uint32_t> dense(32);
  std::mt19937_64 rng(1);
  for (auto& w : dense) w = static_cast<std::uint32_t>(rng()) | 1u;
  const CompressedBlock d = zvc_compress(dense);
  ok &= (d.payload.size() == 132);
  const double overhead =
      static_cast<double>(d.payload.size() - 128) / 128.0;
  ok &= (overhead == 0.03125);  // the 3.125% metadata overhead, exactly

  detail = "all-zero record " + std::to_string(z.payload.size()) +
           " B, dense record " + std::to_string(d.payload.size()) +
           " B, overhead " + fmt(overhead * 100) + "%";
  const double t = timer.elapsed();
  report(1, "zvc golden records", ok && t < 1.0, t, detail);
}

// ---------------------------------------------------------------------------
// criterion 2: ZVC density law on 10^6-word i.i.d. streams, +/-2%

void criterion_2() {
  Timer timer;
  bool ok = true;
  std::string detail;

  for (double d : {0.1, 0.4, 0.7}) {
    const auto words =
        generate_words(1'000'000, {d, 0.0, 20260100 + std::uint64_t(d * 10)});
    const auto rep = compress_words(CodecId::ZVC, words).report;
    const double expected = 32.0 / (1.0 + 32.0 * d);
    const double measured = rep.payload_ratio();
    const bool within = std::abs(measured / expected - 1.0) <= 0.02;
    ok &= within;
    detail += "d=" + fmt(d) + ": " + fmt(measured) + " vs " + fmt(expected) +
              (within ? "; " : " OUT OF TOLERANCE; ");
    if (d == 0.4) {
      // The mask-free reading of the ratio at 60% sparsity is 2.5x.
      const double mask_free = rep.data_ratio();
      const bool mf_ok = std::abs(mask_free / 2.5 - 1.0) <= 0.02;
      ok &= mf_ok;
      detail += "mask-free at d=0.4: " + fmt(mask_free) +
                (mf_ok ? "; " : " OUT OF TOLERANCE; ");
    }
  }
  const double t = timer.elapsed();
  report(2, "zvc density law", ok && t < 10.0, t, detail);
}

// ---------------------------------------------------------------------------
// criterion 3: round-trip property and corrupt-stream fuzzing

// Byte offsets of ZVC masks within a payload.
std::vector<std::size_t> zvc_mask_offsets(const CompressedBlock& block) {
  std::vector<std::size_t> offsets;
  std::size_t pos = 0;
  while (pos + 4 <= block.payload.size()) {
    offsets.push_back(pos);
    std::uint32_t mask = 0;
    std::memcpy(&mask, block.payload.data() + pos, 4);
    pos += 4 + 4u * static_cast<unsigned>(std::popcount(mask));
  }
  return offsets;
}

// Byte offsets of RLE token headers within a payload.
std::vector<std::size_t> rle_token_offsets(const CompressedBlock& block) {
  std::vector<std::size_t> offsets;
  std::size_t pos = 0;
  while (pos + 2 <= block.payload.size()) {
    offsets.push_back(pos);
    const std::uint16_t token = static_cast<std::uint16_t>(
        block.payload[pos] | (block.payload[pos + 1] << 8));
    pos += 2;
    if (!(token & 0x8000)) {
      pos += std::size_t{token & 0x7FFFu} * 4;
    }
  }
  return offsets;
}

void criterion_3() {
  Timer timer;
  std::mt19937_64 rng(333);
  const CodecId codecs[] = {CodecId::ZVC, CodecId::RLE, CodecId::DEFLATE};

  std::uint64_t round_trips = 0;
  std::uint64_t failed_round_trips = 0;

  // Corrupt-stream fuzzing runs in two tiers.
  //
  // Gated (zero silent wrong outputs required): every class the format
  // structurally detects regardless of data -- truncation and extension at
  // any point, any bit flip in a DEFLATE stream (zlib checksums the whole
  // payload), bit flips in the final ZVC group mask or final RLE token
  // (pinned down by the exact-consumption and declared-length checks), and
  // header fields driven to invalid values.
  //
  // Reported (detection rate printed, not gated): single-bit flips in
  // *interior* ZVC masks / RLE token headers and in the declared length.
  // The wire format carries no integrity metadata, so a flipped interior
  // mask can resynchronize the walk by chance; guaranteed detection there
  // is impossible for any decoder of this format.
  std::uint64_t gated_cases = 0, gated_silent = 0;
  std::uint64_t interior_cases = 0, interior_caught = 0;

  for (int i = 0; i < 10'000; ++i) {
    const std::size_t count = rng() % 2048;
    const double density = (rng() % 101) / 100.0;
    const double clustering = (rng() % 10) / 10.0;
    const auto words =
        generate_words(count, {density, clustering, rng()});

    for (CodecId codec : codecs) {
      const CompressedBlock block = compress(codec, words);
      if (decompress(block) != words) {
        ++failed_round_trips;
      }
      ++round_trips;
    }

    if (i % 10 != 0) {
      continue;
    }
    auto probe_gated = [&](const CompressedBlock& mutated) {
      ++gated_cases;
      try {
        if (decompress(mutated) != words) {
          ++gated_silent;
        }
      } catch (const CorruptStreamError&) {
      } catch (const ConfigError&) {
      }
    };
    auto probe_interior = [&](const CompressedBlock& mutated) {
      ++interior_cases;
      try {
        if (decompress(mutated) == words) {
          ++interior_caught;  // flip landed on a don't-care bit
        }
      } catch (const CorruptStreamError&) {
        ++interior_caught;
      } catch (const ConfigError&) {
        ++interior_caught;
      }
    };

    for (CodecId codec : codecs) {
      const CompressedBlock block = compress(codec, words);

      // Truncation and extension.
      if (!block.payload.empty()) {
        for (int cut = 0; cut < 3; ++cut) {
          CompressedBlock mutated = block;
          mutated.payload.resize(rng() % block.payload.size());
          probe_gated(mutated);
        }
      }
      {
        CompressedBlock mutated = block;
        const std::size_t extra = 1 + rng() % 8;
        for (std::size_t k = 0; k < extra; ++k) {
          mutated.payload.push_back(static_cast<std::uint8_t>(rng()));
        }
        probe_gated(mutated);
      }

      // Invalid codec tag.
      {
        CompressedBlock mutated = block;
        mutated.codec = static_cast<CodecId>(3 + rng() % 253);
        probe_gated(mutated);
      }

      if (block.payload.empty()) {
        continue;
      }
      if (codec == CodecId::DEFLATE) {
        for (int flip = 0; flip < 6; ++flip) {
          CompressedBlock mutated = block;
          const std::size_t byte = rng() % mutated.payload.size();
          mutated.payload[byte] ^=
              static_cast<std::uint8_t>(1u << (rng() % 8));
          probe_gated(mutated);
        }
        continue;
      }

      const std::vector<std::size_t> offsets =
          (codec == CodecId::ZVC) ? zvc_mask_offsets(block)
                                  : rle_token_offsets(block);
      const std::size_t width = (codec == CodecId::ZVC) ? 4 : 2;
      for (int flip = 0; flip < 6; ++flip) {
        CompressedBlock mutated = block;
        const std::size_t pick = rng() % offsets.size();
        const std::size_t byte = offsets[pick] + rng() % width;
        mutated.payload[byte] ^=
            static_cast<std::uint8_t>(1u << (rng() % 8));
        if (pick + 1 == offsets.size()) {
          probe_gated(mutated);
        } else {
          probe_interior(mutated);
        }
      }
      // Declared-length flips reinterpret trailing zero padding; reported.
      {
        CompressedBlock mutated = block;
        mutated.original_len_bytes ^= (4ull << (rng() % 4));
        probe_interior(mutated);
      }
    }
  }

  const bool ok = failed_round_trips == 0 && gated_silent == 0;
  const double t = timer.elapsed();
  const double caught_pct =
      interior_cases == 0
          ? 100.0
          : 100.0 * static_cast<double>(interior_caught) /
                static_cast<double>(interior_cases);
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%llu round trips (%llu failed); gated fuzz %llu cases, %llu "
                "silent; interior-flip fuzz %llu cases, %.1f%% caught "
                "(format has no integrity metadata; informational)",
                static_cast<unsigned long long>(round_trips),
                static_cast<unsigned long long>(failed_round_trips),
                static_cast<unsigned long long>(gated_cases),
                static_cast<unsigned long long>(gated_silent),
                static_cast<unsigned long long>(interior_cases), caught_pct);
  report(3, "round-trip property and fuzzing", ok && t < 60.0, t, detail);
}

// ---------------------------------------------------------------------------
// criterion 4: layout behavior

void criterion_4() {
  Timer timer;
  std::mt19937_64 rng(44);
  bool zvc_exact = true;

  for (int i = 0; i < 100; ++i) {
    const Dims dims{static_cast<std::uint32_t>(1 + rng() % 4),
                    static_cast<std::uint32_t>(1 + rng() % 12),
                    static_cast<std::uint32_t>(1 + rng() % 24),
                    static_cast<std::uint32_t>(1 + rng() % 24)};
    const double d = (rng() % 90 + 5) / 100.0;
    const ActivationTensor t =
        generate(dims, Layout::NCHW, {d, 0.3, rng()});
    const auto base = compress_tensor(t, CodecId::ZVC).report;
    for (Layout target : {Layout::NHWC, Layout::CHWN}) {
      const auto other =
          compress_tensor(permute_layout(t, target), CodecId::ZVC).report;
      zvc_exact &= (other.output_bytes == base.output_bytes);
    }
  }

  int rle_strictly_better = 0;
  for (int seed = 0; seed < 100; ++seed) {
    auto words = generate_words(
        65'536, {0.45, 0.9, static_cast<std::uint64_t>(9000 + seed)});
    auto shuffled = words;
    std::mt19937_64 shuffle_rng(777 + seed);
    std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
    const auto clustered_size = rle_compress(words).payload.size();
    const auto shuffled_size = rle_compress(shuffled).payload.size();
    if (clustered_size < shuffled_size) {
      ++rle_strictly_better;
    }
  }

  const bool ok = zvc_exact && rle_strictly_better >= 95;
  const double t = timer.elapsed();
  report(4, "layout behavior", ok && t < 60.0, t,
         std::string("zvc exact across layouts: ") +
             (zvc_exact ? "yes" : "NO") + ", rle clustered beats shuffled " +
             std::to_string(rle_strictly_better) + "/100 seeds");
}

// ---------------------------------------------------------------------------
// criterion 5: microarchitecture goldens

void criterion_5() {
  Timer timer;
  bool ok = true;

  const EngineConfig cfg;
  ok &= (compress_latency_cycles(1, cfg) == 6);
  ok &= (decompress_latency_cycles(1, cfg) - cfg.sectors_per_line() == 2);
  ok &= (size_buffer(200e9, 350e-9).required_bytes == 70'000);

  std::mt19937_64 rng(55);
  int equivalent = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::uint32_t> line(32, 0u);
    const double d = (rng() % 101) / 100.0;
    for (auto& w : line) {
      if ((rng() >> 11) * 0x1.0p-53 < d) {
        w = static_cast<std::uint32_t>(rng()) | 1u;
      }
    }
    equivalent += functional_equivalence_check(line);
  }
  ok &= (equivalent == 1000);

  const double t = timer.elapsed();
  report(5, "microarchitecture goldens", ok && t < 10.0, t,
         "1-line latency 6, decompress extra 2, buffer 70000 B, datapath "
         "equivalent on " +
             std::to_string(equivalent) + "/1000 lines");
}

// ---------------------------------------------------------------------------
// criterion 6: transfer-model goldens

void criterion_6() {
  Timer timer;
  bool ok = true;
  std::string detail;

  // Continuity at COMP_BW == budget: both branch expressions agree to
  // machine precision.
  {
    const PlatformConfig cfg;
    const std::uint64_t bytes = 512'000'000;
    const double crossover = cfg.dram_comp_budget / cfg.pcie_bw;
    const double pcie_branch =
        (static_cast<double>(bytes) / crossover) / cfg.pcie_bw;
    const double dram_branch =
        static_cast<double>(bytes) / cfg.dram_comp_budget;
    const bool continuous =
        std::abs(pcie_branch - dram_branch) <=
        1e-14 * std::max(pcie_branch, dram_branch);
    ok &= continuous;
    detail += std::string("crossover continuous: ") +
              (continuous ? "yes" : "NO") + "; ";
  }

  // Hand-computed two-layer trace: vdnn 12 ms, cdma 8 ms, speedup 1.50.
  {
    std::vector<LayerTraceRecord> trace(2);
    trace[0] = {"big", 64'000'000, 0.21875, 0.002, 0.002};
    trace[1] = {"small", 16'000'000, 0.96875, 0.002, 0.002};
    const double ratios[] = {4.0, 1.0};
    const SimReport r = simulate(trace, ratios);
    const bool exact = (r.speedup_vs_vdnn == 1.5);
    ok &= exact;
    detail += "golden speedup " + fmt(r.speedup_vs_vdnn) +
              (exact ? "; " : " NOT EXACT; ");

    const double ones[] = {1.0, 1.0};
    const SimReport base = simulate(trace, ones);
    const bool identity = (base.cdma_time == base.vdnn_time);
    ok &= identity;
    detail += std::string("ratio-1 reproduces vdnn: ") +
              (identity ? "yes" : "NO") + "; ";
  }

  // Monotonicity and ordering over randomized traces.
  {
    std::mt19937_64 rng(66);
    auto uniform = [&](double lo, double hi) {
      return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    std::uint64_t violations = 0;
    for (int trial = 0; trial < 10'000; ++trial) {
      const std::size_t n = 1 + rng() % 8;
      std::vector<LayerTraceRecord> trace(n);
      std::vector<double> ratios(n);
      for (std::size_t i = 0; i < n; ++i) {
        trace[i] = {"L" + std::to_string(i), 1 + rng() % 500'000'000, 0.5,
                    uniform(0.0, 0.04), uniform(0.0, 0.04)};
        ratios[i] = uniform(1.0, 14.0);
      }
      const SimReport r = simulate(trace, ratios);
      if (!(r.oracle_time <= r.cdma_time * (1 + 1e-12) &&
            r.cdma_time <= r.vdnn_time * (1 + 1e-12))) {
        ++violations;
      }
      auto bumped = ratios;
      const std::size_t pick = rng() % n;
      bumped[pick] *= uniform(1.0, 3.0);
      const SimReport r2 = simulate(trace, bumped);
      if (r2.cdma_time > r.cdma_time * (1 + 1e-12) ||
          r2.cdma_traffic_bytes > r.cdma_traffic_bytes * (1 + 1e-12)) {
        ++violations;
      }
    }
    ok &= (violations == 0);
    detail += std::to_string(violations) + " violations in 10000 traces";
  }

  const double t = timer.elapsed();
  report(6, "transfer-model goldens", ok && t < 30.0, t, detail);
}

// ---------------------------------------------------------------------------
// criterion 7: end-to-end alexnet scenario at density 0.506

void criterion_7() {
  Timer timer;
  bool ok = true;
  std::string detail;

  const double density = 0.506;
  const auto trace_mem = make_preset_trace("alexnet", density);

  // Push the trace through the text format, as the CLI pipeline would.
  const auto path =
      std::filesystem::temp_directory_path() / "cdma_acceptance_alexnet.trace";
  write_trace_file(path, trace_mem, "acceptance scenario");
  const auto trace = read_trace_file(path);
  std::filesystem::remove(path);

  const std::vector<double> ratios = derive_zvc_ratios(trace);
  const SimReport r = simulate(trace, ratios);

  const double closed_form = 32.0 / (1.0 + 32.0 * density);
  const double predicted_quotient = 1.0 / closed_form;
  const bool traffic_ok =
      std::abs(r.traffic_quotient / predicted_quotient - 1.0) <= 0.05;
  ok &= traffic_ok;
  detail += "traffic quotient " + fmt(r.traffic_quotient) + " vs predicted " +
            fmt(predicted_quotient) + (traffic_ok ? "; " : " OFF; ");

  const bool ordered =
      r.oracle_time <= r.cdma_time && r.cdma_time <= r.vdnn_time;
  ok &= ordered;
  detail += "oracle " + fmt(r.oracle_time * 1e3) + " ms <= cdma " +
            fmt(r.cdma_time * 1e3) + " ms <= vdnn " +
            fmt(r.vdnn_time * 1e3) + " ms: " + (ordered ? "yes" : "NO");

  const double t = timer.elapsed();
  report(7, "end-to-end alexnet scenario", ok && t < 30.0, t, detail);
}

// ---------------------------------------------------------------------------
// criterion 8: software throughput, informational

void criterion_8() {
  Timer timer;
  const std::size_t count = 512'000'000 / 4;  // 512 MB of words
  const auto words = generate_words(count, {0.4, 0.0, 88});

  const auto t0 = clock_type::now();
  const CompressedBlock block = zvc_compress(words);
  const auto t1 = clock_type::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  const double gbps = static_cast<double>(words.size()) * 4.0 / seconds / 1e9;

  const bool ok = gbps >= 1.0;
  std::printf("[%s] criterion 8: zvc software throughput %.2f GB/s over %zu "
              "MB, single-threaded (informational, 1 GB/s reference; %.2fs)\n",
              ok ? "info" : "info/low", gbps, words.size() * 4 / 1'000'000,
              timer.elapsed());
  std::fflush(stdout);
  (void)block;
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all gating criteria passed\n");
  return 0;
}
