#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lasalt/noise.hpp"
#include "lasalt/spectral2d.hpp"

// Velocity-form mean solver: d/dt v + P L^T_v v = P (1/2) sum_k
// L^T_xi(L^T_xi v) + P f with the spectral Leray projection P and
// L^T_v u = v.grad u + (grad v)^T u. The Lie-Laplacian is assembled in
// divergence form d_i(a^{ij} d_j u^a) + b^{i a j} d_i u^j + c^{a b} u^b
// with a = xi^i xi^j, b = 2 xi^i d_a xi^j, c = (d_a xi^i) d_i xi^b +
// xi^i d^2_{i a} xi^b; for constant correlates sqrt(2 nu) e_k it reduces to
// nu Laplacian.

namespace lasalt::euler2d {

struct VelocityField2D {
  std::vector<std::complex<double>> x, y;  // spectral components
};

class LLNSSolver {
 public:
  LLNSSolver(std::shared_ptr<const Grid2D> grid, noise::NoiseBasis basis);

  const Grid2D& grid() const { return *grid_; }
  const noise::NoiseBasis& basis() const { return basis_; }

  /// L^T_v u with v given in physical components; output dealiased spectral.
  VelocityField2D lie_transpose(const std::vector<double>& vx,
                                const std::vector<double>& vy,
                                const VelocityField2D& u) const;

  /// (1/2) sum_k L^T_xi(L^T_xi u) via the summed divergence-form
  /// coefficients.
  VelocityField2D lie_laplacian_vector(const VelocityField2D& u) const;
  /// Same operator by direct nesting, one correlate at a time (dual route
  /// for validation).
  VelocityField2D lie_laplacian_vector_nested(const VelocityField2D& u) const;

  /// Spectral Leray projection onto divergence-free fields.
  void leray_project(VelocityField2D& u) const;

  /// P[-L^T_v v + lie_laplacian + f]; if pressure is requested it is the
  /// zero-mean scalar whose gradient is the projected-out part.
  VelocityField2D mean_rhs(const VelocityField2D& v,
                           const VelocityField2D* forcing = nullptr,
                           std::vector<std::complex<double>>* pressure =
                               nullptr) const;

  /// Deterministic Heun step of the mean equation.
  VelocityField2D step_heun(const VelocityField2D& v, double dt,
                            const VelocityField2D* forcing = nullptr) const;

  double max_divergence(const VelocityField2D& u) const;

 private:
  std::shared_ptr<const Grid2D> grid_;
  noise::NoiseBasis basis_;
  // Summed coefficient grids, physical space. b_ is indexed (i*4 + a*2 + j),
  // c_ is (a*2 + b).
  std::vector<double> a_xx_, a_xy_, a_yy_;
  std::array<std::vector<double>, 8> b_;
  std::array<std::vector<double>, 4> c_;
  std::vector<std::vector<double>> xi_x_, xi_y_;                // per correlate
  std::vector<std::array<std::vector<double>, 4>> dxi_;        // (a*2 + j)
};

/// v = (sin x cos y, -cos x sin y); an exact Navier-Stokes mode decaying as
/// exp(-2 nu t) for constant correlates.
VelocityField2D taylor_green_velocity(const Grid2D& grid);

}  // namespace lasalt::euler2d
