#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lasalt/noise.hpp"
#include "lasalt/spectral1d.hpp"

// 1D stochastic transport on the circle with the mean velocity in the drift:
// realizations obey du = -E[u] u_x dt - sum_k xi^(k) u_x o dW^(k); the closed
// mean is a viscous-Burgers-type equation. Pseudo-spectral, 2/3 dealiased.

namespace lasalt::burgers {

struct Field1D {
  std::vector<double> values;
  std::span<double> flat() { return values; }
  std::span<const double> flat() const { return values; }
};

class BurgersModel {
 public:
  using State = Field1D;
  using Mean = Field1D;

  BurgersModel(std::shared_ptr<const Grid1D> grid, noise::NoiseBasis basis,
               std::vector<double> forcing = {});

  const Grid1D& grid() const { return *grid_; }
  std::size_t correlate_count() const { return basis_.size(); }
  const noise::NoiseBasis& basis() const { return basis_; }

  /// -E[u] * du/dx, spectral derivative, product dealiased.
  State drift(const State& u, const Mean& mean_u) const;
  /// -xi^(k) * du/dx.
  State diffusion(const State& u, std::size_t k) const;
  /// (1/2) sum_k xi d/dx (xi du/dx).
  State ito_correction(const State& u) const;
  /// Closed mean dynamics: -v v_x + (1/2) sum_k xi d/dx(xi dv/dx) + f.
  /// (For constant xi = sqrt(2 nu) this is viscous Burgers at viscosity nu.)
  State mean_rhs(const Mean& v) const;

  Mean reduce(std::span<const State> members) const;
  Mean mean_initial(std::span<const State> members) const {
    return reduce(members);
  }
  Mean mean_step(const Mean& mu, double dt) const;
  void project_mean(Mean&) const {}
  /// Keeps member spectra inside the dealiased band.
  void postprocess(State& u) const;

  const std::vector<double>& xi_values(std::size_t k) const {
    return xi_[k];
  }

 private:
  std::shared_ptr<const Grid1D> grid_;
  noise::NoiseBasis basis_;
  std::vector<std::vector<double>> xi_;  // sampled correlates
  std::vector<double> forcing_;
};

/// u0 evaluated along the inverse stochastic flow: integrates the
/// characteristics backward through the recorded mean path by reversing the
/// member's Wiener increments (Heun), then interpolates u0 at the labels.
/// mean_path[i] is the frozen mean of step i; mean_path.size() == steps + 1.
Field1D characteristics_oracle(const Grid1D& grid, const Field1D& u0,
                               std::span<const Field1D> mean_path,
                               std::uint64_t seed, std::size_t member,
                               const noise::NoiseBasis& basis, double dt);

/// Initial profile sin(2*pi*x/L).
Field1D sine_initial(const Grid1D& grid);

}  // namespace lasalt::burgers
