#include "lasalt/diagio.hpp"

#include <cstring>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lasalt/errors.hpp"

namespace lasalt::io {

namespace fs = std::filesystem;

NdjsonWriter::NdjsonWriter(const fs::path& path) : path_(path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + path.string());
}

std::string ndjson_line(const DiagnosticsRecord& record) {
  std::string line = "{\"t\":" + format_double(record.t);
  for (const auto& [name, value] : record.values)
    line += ",\"" + name + "\":" + format_double(value);
  line += "}\n";
  return line;
}

void NdjsonWriter::write(const DiagnosticsRecord& record) {
  out_ << ndjson_line(record);
  out_.flush();
  if (!out_) throw IoError("write failed on " + path_.string());
}

void dump_field(std::span<const double> data, const FieldMeta& meta,
                const fs::path& stem) {
  fs::path raw = stem;
  raw += ".f64";
  if (raw.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(raw.parent_path(), ec);
  }
  {
    std::ofstream out(raw, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + raw.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw IoError("write failed on " + raw.string());
  }
  fs::path side = stem;
  side += ".json";
  std::ofstream out(side, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + side.string());
  out << "{";
  if (meta.ny > 0)
    out << "\"nx\":" << meta.nx << ",\"ny\":" << meta.ny;
  else
    out << "\"n\":" << meta.nx;
  out << ",\"L\":" << format_double(meta.length)
      << ",\"t\":" << format_double(meta.t) << ",\"name\":\"" << meta.name
      << "\",\"model\":\"" << meta.model << "\"}\n";
  if (!out) throw IoError("write failed on " + side.string());
}

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// minimal scanner for the fixed sidecar schema
double sidecar_number(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\":");
  if (pos == std::string::npos) return 0.0;
  return std::strtod(text.c_str() + pos + key.size() + 3, nullptr);
}

std::string sidecar_string(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\":\"");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 4;
  const auto end = text.find('"', start);
  return text.substr(start, end - start);
}

}  // namespace

std::vector<double> load_field(const fs::path& stem, FieldMeta* meta) {
  fs::path side = stem;
  side += ".json";
  const std::string text = slurp(side);
  FieldMeta m;
  m.nx = static_cast<std::size_t>(sidecar_number(text, "nx"));
  m.ny = static_cast<std::size_t>(sidecar_number(text, "ny"));
  if (m.nx == 0) m.nx = static_cast<std::size_t>(sidecar_number(text, "n"));
  m.length = sidecar_number(text, "L");
  m.t = sidecar_number(text, "t");
  m.name = sidecar_string(text, "name");
  m.model = sidecar_string(text, "model");
  if (meta) *meta = m;

  fs::path raw = stem;
  raw += ".f64";
  std::ifstream in(raw, std::ios::binary);
  if (!in) throw IoError("cannot open " + raw.string());
  const std::size_t count = m.nx * (m.ny > 0 ? m.ny : 1);
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
    throw IoError("short read on " + raw.string());
  return data;
}

void write_plotdata(std::span<const DiagnosticsRecord> records,
                    const fs::path& dir) {
  if (records.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<std::string> names;
  for (const auto& [name, value] : records.front().values)
    names.push_back(name);
  for (const std::string& name : names) {
    std::string fname = name;
    for (char& ch : fname)
      if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    std::ofstream out(dir / (fname + ".csv"), std::ios::trunc);
    if (!out) throw IoError("cannot open plotdata for " + name);
    out << "t," << name << "\n";
    for (const auto& rec : records) {
      const double v = rec.get(name);
      out << format_double(rec.t) << "," << format_double(v) << "\n";
    }
    if (!out) throw IoError("write failed on plotdata for " + name);
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"lasalt: mean-field stochastic transport laboratory"};
  std::string model, config_path, out_dir, mode;
  std::uint64_t seed = 0;
  std::size_t members = 0;
  unsigned threads = 1;
  bool seed_set = false, members_set = false;
  app.add_option("model", model,
                 "model: rigidbody | burgers | peakons | euler2d")
      ->required();
  app.add_option("--config", config_path, "path to a run config")->required();
  app.add_option("--seed", seed, "override config seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--out", out_dir, "override output directory");
  app.add_option("--mode", mode, "override mode: coupled | decoupled");
  app.add_option("--members", members, "override ensemble size")
      ->each([&](const std::string&) { members_set = true; });
  app.add_option("--threads", threads, "worker threads for member updates");

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (!fs::exists(config_path)) {
      std::cerr << "config error: no such file: " << config_path << "\n";
      return 2;
    }
    RunConfig config = parse_config(slurp(config_path));
    if (config.model != model) config.model = model;
    if (seed_set) config.seed = seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!mode.empty()) {
      if (mode != "coupled" && mode != "decoupled")
        throw ConfigError("--mode must be coupled or decoupled");
      config.mode = mode;
    }
    if (members_set) {
      if (members < 1) throw ConfigError("--members must be >= 1");
      config.members = members;
    }
    run_experiment(config, threads);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lasalt::io
