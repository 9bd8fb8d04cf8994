#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lasalt::io {

struct NoiseSpec {
  std::string kind = "constant";  // "constant" | "fourier"
  double nu = 0.05;
  std::vector<std::array<double, 4>> modes;  // [kx, ky, amp, phase]
};

struct RigidBodyConfig {
  std::array<double, 3> inertia{1.0, 2.0, 3.0};
  std::array<double, 3> pi0{0.2, 1.0, 0.2};
};

struct BurgersConfig {
  std::size_t n = 256;
  double length = 6.283185307179586476925286766559;
  std::string u0 = "sine";  // "sine" | field dump stem
};

struct PeakonConfig {
  std::size_t n = 2;
  double alpha = 1.0;
  std::vector<double> q0{2.5, 3.8};
  std::vector<double> p0{1.0, 0.6};
  std::string kernel = "line";  // "line" | "periodic"
};

struct Euler2DConfig {
  std::size_t n = 64;
  std::string omega0 = "taylor-green";  // | "random-shear" | field dump stem
  std::vector<double> loop;             // empty or [cx, cy, radius, markers]
};

/// Full declarative description of one experiment. Unknown config keys are
/// hard errors.
struct RunConfig {
  std::string model;  // rigidbody | burgers | peakons | euler2d
  std::string mode = "coupled";
  double dt = 1e-3;
  double horizon = 1.0;  // key "T"
  std::size_t members = 256;
  std::uint64_t seed = 0;
  std::string stepper = "heun";  // "heun" | "em"
  std::string output_dir = "out";
  std::size_t output_every = 10;
  NoiseSpec noise;
  RigidBodyConfig rigidbody;
  BurgersConfig burgers;
  PeakonConfig peakons;
  Euler2DConfig euler2d;

  std::size_t steps() const;
};

/// Parses the flat TOML subset (dotted keys, strings, numbers, booleans,
/// single-line possibly nested arrays, # comments). Errors carry line and
/// key attribution.
RunConfig parse_config(const std::string& text);

/// Canonical form: parse(serialize(c)) round-trips exactly.
std::string serialize_config(const RunConfig& config);

/// Shortest decimal representation that round-trips; integral values carry
/// a trailing ".0" so the token stays a float.
std::string format_double(double v);

}  // namespace lasalt::io
