#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

// Noise-correlate bases: time-independent vector fields xi^(k) multiplying
// independent Wiener processes in the transport velocity, plus reproducible
// Gaussian increments for the ensemble.

namespace lasalt::noise {

enum class CorrelateKind {
  Constant,   // constant vector in R^d
  Fourier2D,  // amp * kperp/|k| * cos(k.x + phase), exactly divergence-free
  Fourier1D,  // offset + sum of amp_j * cos(k_j x + phase_j) (scalar field)
};

struct Mode1D {
  int k = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct Correlate {
  CorrelateKind kind = CorrelateKind::Constant;
  std::array<double, 3> constant{0.0, 0.0, 0.0};
  // Fourier2D
  std::array<int, 2> wavevector{0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
  // Fourier1D
  double offset = 0.0;
  std::vector<Mode1D> modes;
};

class NoiseBasis {
 public:
  NoiseBasis(int dimension, std::vector<Correlate> correlates,
             bool divergence_free);

  int dimension() const { return dimension_; }
  std::size_t size() const { return correlates_.size(); }
  bool divergence_free() const { return divergence_free_; }
  double kappa() const { return kappa_; }
  void set_kappa(double kappa) { kappa_ = kappa; }
  const Correlate& correlate(std::size_t k) const { return correlates_[k]; }

  /// Constant correlate as a 3-vector (unused trailing entries zero).
  std::array<double, 3> constant3(std::size_t k) const;

  // 2D field evaluation (Constant and Fourier2D correlates).
  std::array<double, 2> eval2(std::size_t k, double x, double y) const;
  /// grad[i][j] = d xi^j / d x_i.
  std::array<std::array<double, 2>, 2> grad2(std::size_t k, double x,
                                             double y) const;
  /// hess[a][b][j] = d^2 xi^j / d x_a d x_b.
  std::array<std::array<std::array<double, 2>, 2>, 2> hess2(std::size_t k,
                                                            double x,
                                                            double y) const;

  // 1D field evaluation (Constant and Fourier1D correlates).
  double eval1(std::size_t k, double x) const;
  double eval1_d1(std::size_t k, double x) const;
  double eval1_d2(std::size_t k, double x) const;

 private:
  int dimension_;
  std::vector<Correlate> correlates_;
  bool divergence_free_;
  double kappa_ = 0.0;
};

/// d constant correlates sqrt(2 nu) e_k; kappa = nu exactly.
NoiseBasis build_constant_basis(int dimension, double nu);

struct FourierModeSpec {
  int kx = 0;
  int ky = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Divergence-free 2D Fourier correlates on the torus [0,2*pi)^2; kappa is
/// estimated on a default 64^2 grid (an estimate, not a nondegeneracy proof).
NoiseBasis build_fourier_divfree_basis(const std::vector<FourierModeSpec>& modes);

/// 1D scalar correlates (divergence-free is vacuous on the circle); one
/// cosine mode per spec entry, offset zero. ky must be 0.
NoiseBasis build_fourier_basis_1d(const std::vector<FourierModeSpec>& modes);

/// Min over an m^d sampling grid on [0,2*pi)^d of the smallest eigenvalue of
/// (1/2) sum_k xi^(k) (x) outer xi^(k)(x).
double estimate_ellipticity(const NoiseBasis& basis, std::size_t grid);

/// Max-norm spectral divergence of correlate k sampled on an m^2 grid
/// (2D bases only); the basis invariant requires < 1e-12.
double max_divergence_2d(const NoiseBasis& basis, std::size_t k,
                         std::size_t grid);

struct WienerBatch {
  double dt = 0.0;
  std::size_t step_index = 0;
  std::size_t member_count = 0;
  std::size_t correlate_count = 0;
  std::vector<double> increments;  // [member][correlate], N(0, dt)

  double at(std::size_t member, std::size_t k) const {
    return increments[member * correlate_count + k];
  }
};

/// increments[m][k] = sqrt(dt) * Z(seed, m, step, k) from the counter-based
/// generator; identical output under any evaluation order.
WienerBatch sample_wiener_batch(std::uint64_t seed, std::size_t step_index,
                                std::size_t member_count,
                                std::size_t correlate_count, double dt);

}  // namespace lasalt::noise
