#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lasalt/diagnostics.hpp"
#include "lasalt/noise.hpp"

// Stochastic coadjoint motion of the free rigid body on the angular-momentum
// sphere, with the angular velocity in the drift replaced by its ensemble
// expectation. |Pi|^2 is conserved pathwise; the mean dissipates it into
// fluctuations.

namespace lasalt::rigidbody {

struct RigidBodyState {
  std::array<double, 3> pi{0.0, 0.0, 0.0};
  std::span<double> flat() { return {pi.data(), 3}; }
  std::span<const double> flat() const { return {pi.data(), 3}; }
};

struct InertiaSpec {
  double i1 = 1.0, i2 = 2.0, i3 = 3.0;
};

inline std::array<double, 3> cross(const std::array<double, 3>& a,
                                   const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

/// -E[Omega] x Pi with E[Omega] = I^{-1} mean.pi; linear in both arguments.
RigidBodyState rb_drift(const RigidBodyState& state, const RigidBodyState& mean,
                        const InertiaSpec& inertia);

/// -xi x Pi.
RigidBodyState rb_diffusion(const RigidBodyState& state,
                            const std::array<double, 3>& xi);

/// (1/2) sum_k xi x (xi x Pi).
RigidBodyState rb_ito_correction(const RigidBodyState& state,
                                 const noise::NoiseBasis& basis);

/// Closed mean dynamics: -E[Omega] x E[Pi] + (1/2) sum_k xi x (xi x E[Pi]).
RigidBodyState rb_mean_rhs(const RigidBodyState& mean,
                           const InertiaSpec& inertia,
                           const noise::NoiseBasis& basis);

/// Per-step moments: casimir_mean, mean_norm2, variance, production.
DiagnosticsRecord rb_diagnostics(std::span<const RigidBodyState> members,
                                 const RigidBodyState& mean,
                                 const noise::NoiseBasis& basis, double t);

/// Mean-field model contract for the ensemble engine.
class RigidBodyModel {
 public:
  using State = RigidBodyState;
  using Mean = RigidBodyState;

  RigidBodyModel(InertiaSpec inertia, noise::NoiseBasis basis);

  std::size_t correlate_count() const { return basis_.size(); }
  const noise::NoiseBasis& basis() const { return basis_; }
  const InertiaSpec& inertia() const { return inertia_; }

  State drift(const State& s, const Mean& mu) const {
    return rb_drift(s, mu, inertia_);
  }
  State diffusion(const State& s, std::size_t k) const {
    return rb_diffusion(s, basis_.constant3(k));
  }
  State ito_correction(const State& s) const {
    return rb_ito_correction(s, basis_);
  }
  State mean_rhs(const Mean& mu) const {
    return rb_mean_rhs(mu, inertia_, basis_);
  }

  Mean reduce(std::span<const State> members) const;
  Mean mean_initial(std::span<const State> members) const {
    return reduce(members);
  }
  Mean mean_step(const Mean& mu, double dt) const;
  void project_mean(Mean&) const {}
  void postprocess(State&) const {}

 private:
  InertiaSpec inertia_;
  noise::NoiseBasis basis_;
};

}  // namespace lasalt::rigidbody
