#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "lasalt/config.hpp"
#include "lasalt/diagnostics.hpp"

namespace lasalt::io {

/// Streaming newline-delimited JSON, one object per record, flushed per
/// write:  {"t":0.0,"name":1.0,...}\n  with shortest round-trip floats.
class NdjsonWriter {
 public:
  explicit NdjsonWriter(const std::filesystem::path& path);
  void write(const DiagnosticsRecord& record);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

std::string ndjson_line(const DiagnosticsRecord& record);

struct FieldMeta {
  std::size_t nx = 0;
  std::size_t ny = 0;  // 0 for 1D dumps
  double length = 0.0;
  double t = 0.0;
  std::string name;
  std::string model;
};

/// Raw little-endian f64, row-major, to <stem>.f64 plus a JSON sidecar
/// <stem>.json carrying {nx, ny (or n), L, t, name, model}.
void dump_field(std::span<const double> data, const FieldMeta& meta,
                const std::filesystem::path& stem);
std::vector<double> load_field(const std::filesystem::path& stem,
                               FieldMeta* meta = nullptr);

/// One two-column CSV (t, value) per diagnostic under dir.
void write_plotdata(std::span<const DiagnosticsRecord> records,
                    const std::filesystem::path& dir);

struct CliOptions {
  unsigned threads = 1;
};

/// Runs a full experiment described by config; returns collected records
/// (also written under config.output_dir).
std::vector<DiagnosticsRecord> run_experiment(const RunConfig& config,
                                              unsigned threads = 1);

/// lasalt <model> --config PATH [--seed U64] [--out DIR]
///        [--mode coupled|decoupled] [--members M] [--threads N]
/// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace lasalt::io
