#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lasalt {

/// Timestamped map of named scalar diagnostics; insertion order is the
/// serialization order.
struct DiagnosticsRecord {
  double t = 0.0;
  std::vector<std::pair<std::string, double>> values;

  void set(std::string name, double value) {
    values.emplace_back(std::move(name), value);
  }
  double get(const std::string& name) const {
    for (const auto& [k, v] : values)
      if (k == name) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace lasalt
