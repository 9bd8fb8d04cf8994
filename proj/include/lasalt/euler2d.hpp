#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "lasalt/noise.hpp"
#include "lasalt/spectral2d.hpp"

// 2D vorticity dynamics on the torus in vorticity-streamfunction form:
// members obey the scalar transport d(omega) + (E[u] dt + sum_k xi o dW).grad
// omega = 0, the closed mean is advection plus the scalar Lie-Laplacian.
// Pseudo-spectral, 2/3 dealiased, zero-mean vorticity enforced each step.

namespace lasalt::euler2d {

using Spectrum = std::vector<std::complex<double>>;

struct VorticityState {
  Spectrum hat;

  std::span<double> flat() {
    return {reinterpret_cast<double*>(hat.data()), 2 * hat.size()};
  }
  std::span<const double> flat() const {
    return {reinterpret_cast<const double*>(hat.data()), 2 * hat.size()};
  }
};

/// Frozen mean for one step: spectral mean vorticity plus its physical-space
/// velocity (computed once, shared by every member update).
struct MeanField {
  VorticityState omega;
  std::vector<double> ux, uy;
  double umax = 0.0;
};

/// Streamfunction inversion u = (-d(psi)/dy, d(psi)/dx), psi = -omega/|k|^2.
void biot_savart(const Grid2D& grid, std::span<const std::complex<double>> omega,
                 std::span<std::complex<double>> ux_hat,
                 std::span<std::complex<double>> uy_hat);

/// -(v . grad omega), product dealiased; velocity given in physical space.
Spectrum advect_scalar(const Grid2D& grid,
                       std::span<const std::complex<double>> omega,
                       std::span<const double> vx, std::span<const double> vy);

class Euler2DModel {
 public:
  using State = VorticityState;
  using Mean = MeanField;

  Euler2DModel(std::shared_ptr<const Grid2D> grid, noise::NoiseBasis basis);

  const Grid2D& grid() const { return *grid_; }
  std::size_t correlate_count() const { return basis_.size(); }
  const noise::NoiseBasis& basis() const { return basis_; }

  State drift(const State& s, const Mean& mu) const;
  /// -(xi^(k) . grad omega), dealiased.
  State diffusion(const State& s, std::size_t k) const;
  /// (1/2) sum_k xi . grad(xi . grad omega), both products dealiased.
  State ito_correction(const State& s) const;
  /// Mean vorticity evolution: -(u[omega] . grad omega) + Lie-Laplacian.
  State mean_rhs(const State& omega) const;

  /// Ito member step: deterministic part (drift + correction) by two-stage
  /// Heun, noise by Euler-Maruyama, sharing the gradient evaluations.
  State step_member_em(const State& s, const Mean& mu,
                       std::span<const double> dW, double dt) const;
  /// Stratonovich-Heun member step with shared gradient evaluations.
  State step_member_heun(const State& s, const Mean& mu,
                         std::span<const double> dW, double dt) const;
  /// Advective CFL guard |E[u]|_max dt / h <= 0.5 (config error beyond).
  void pre_step(const Mean& mu, double dt) const;

  Mean reduce(std::span<const State> members) const;
  Mean mean_initial(std::span<const State> members) const {
    return reduce(members);
  }
  Mean mean_step(const Mean& mu, double dt) const;
  void project_mean(Mean& mu) const;
  void postprocess(State& s) const;

  Mean make_mean(VorticityState omega) const;
  const std::vector<double>& xi_x(std::size_t k) const { return xi_x_[k]; }
  const std::vector<double>& xi_y(std::size_t k) const { return xi_y_[k]; }

 private:
  struct RhsParts {
    Spectrum det;                  // advection (+ correction when with_lie)
    std::vector<Spectrum> noise;   // per-correlate diffusion tangents
  };
  RhsParts eval_parts(const State& s, const std::vector<double>& vx,
                      const std::vector<double>& vy, bool with_lie,
                      bool with_noise) const;

  std::shared_ptr<const Grid2D> grid_;
  noise::NoiseBasis basis_;
  std::vector<std::vector<double>> xi_x_, xi_y_;  // sampled correlates
};

/// Closed material loop of advected markers.
struct MaterialLoop {
  std::vector<double> x, y;
  std::size_t size() const { return x.size(); }
};

MaterialLoop make_circle_loop(double cx, double cy, double radius,
                              std::size_t markers);

/// Markers advected by dX = E[u] dt + sum_k xi dW (Heun; mean velocity
/// interpolated bicubically, correlates evaluated in closed form).
void advect_loop(MaterialLoop& loop, const Grid2D& grid,
                 std::span<const double> ux, std::span<const double> uy,
                 const noise::NoiseBasis& basis, std::span<const double> dW,
                 double dt);

/// Closed trapezoidal line integral sum_i u(x_i) . (x_{i+1} - x_{i-1})/2.
double circulation(const MaterialLoop& loop, const Grid2D& grid,
                   std::span<const double> ux, std::span<const double> uy);

/// max/min marker spacing; resampling trigger is ratio > 4.
double loop_spacing_ratio(const MaterialLoop& loop);
/// Arclength resampling to equidistant markers; returns false (loop left
/// untouched) if the polygon has degenerated.
bool resample_loop_arclength(MaterialLoop& loop);

/// omega0 = 2 sin x sin y (curl of the Taylor-Green velocity).
VorticityState taylor_green_vorticity(const Grid2D& grid);
/// Seeded band-limited shear profile plus a weak 2D perturbation.
VorticityState random_shear_vorticity(const Grid2D& grid, std::uint64_t seed);

}  // namespace lasalt::euler2d
