// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "cdma/transfer_sim.hpp"

namespace cdma {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_line(const std::filesystem::path& path, std::size_t line,
                           const std::string& why) {
  throw CorruptStreamError(path.string() + ":" + std::to_string(line) + ": " +
                           why);
}

double parse_number(const std::string& field, const std::filesystem::path& p,
                    std::size_t line, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    bad_line(p, line, std::string("cannot parse ") + what);
  }
  if (used != field.size()) {
    bad_line(p, line, std::string("junk after ") + what);
  }
  return value;
}

}  // namespace

std::vector<LayerTraceRecord> read_trace_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::vector<LayerTraceRecord> trace;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(trim(field));
    }
    if (fields.size() != 5) {
      bad_line(path, line_no, "expected 5 comma-separated fields");
    }

    LayerTraceRecord rec;
    rec.name = fields[0];
    if (rec.name.empty()) {
      bad_line(path, line_no, "empty layer name");
    }
    const double bytes = parse_number(fields[1], path, line_no, "offload_bytes");
    if (!(bytes >= 1.0) || bytes != std::floor(bytes) || bytes > 0x1p53) {
      bad_line(path, line_no, "offload_bytes must be a positive integer");
    }
    rec.offload_bytes = static_cast<std::uint64_t>(bytes);
    rec.density = parse_number(fields[2], path, line_no, "density");
    if (rec.density < 0.0 || rec.density > 1.0) {
      bad_line(path, line_no, "density must lie in [0, 1]");
    }
    const double fwd_ms = parse_number(fields[3], path, line_no, "fwd_ms");
    const double bwd_ms = parse_number(fields[4], path, line_no, "bwd_ms");
    if (fwd_ms < 0.0 || bwd_ms < 0.0) {
      bad_line(path, line_no, "compute times must be nonnegative");
    }
    rec.fwd_time = fwd_ms * 1e-3;
    rec.bwd_time = bwd_ms * 1e-3;
    trace.push_back(std::move(rec));
  }
  return trace;
}

void write_trace_file(const std::filesystem::path& path,
                      std::span<const LayerTraceRecord> trace,
                      std::string_view note) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << "# cdma layer trace\n";
  out << "# columns: name, offload_bytes, density, fwd_ms, bwd_ms\n";
  if (!note.empty()) {
    out << "# " << note << "\n";
  }
  char buf[192];
  for (const LayerTraceRecord& rec : trace) {
    if (rec.name.find(',') != std::string::npos || rec.name.empty()) {
      throw ConfigError("layer names must be nonempty and comma-free: '" +
                        rec.name + "'");
    }
    std::snprintf(buf, sizeof(buf), "%s, %llu, %.6g, %.3f, %.3f\n",
                  rec.name.c_str(),
                  static_cast<unsigned long long>(rec.offload_bytes),
                  rec.density, rec.fwd_time * 1e3, rec.bwd_time * 1e3);
    out << buf;
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace cdma
