#include "lasalt/rigidbody.hpp"

#include "lasalt/errors.hpp"
#include "lasalt/meanfield.hpp"
#include "lasalt/pairwise.hpp"

namespace lasalt::rigidbody {

RigidBodyState rb_drift(const RigidBodyState& state, const RigidBodyState& mean,
                        const InertiaSpec& inertia) {
  const std::array<double, 3> omega = {mean.pi[0] / inertia.i1,
                                       mean.pi[1] / inertia.i2,
                                       mean.pi[2] / inertia.i3};
  const auto c = cross(omega, state.pi);
  return {{-c[0], -c[1], -c[2]}};
}

RigidBodyState rb_diffusion(const RigidBodyState& state,
                            const std::array<double, 3>& xi) {
  const auto c = cross(xi, state.pi);
  return {{-c[0], -c[1], -c[2]}};
}

RigidBodyState rb_ito_correction(const RigidBodyState& state,
                                 const noise::NoiseBasis& basis) {
  RigidBodyState out;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto xi = basis.constant3(k);
    const auto inner = cross(xi, state.pi);
    const auto outer = cross(xi, inner);
    for (int i = 0; i < 3; ++i) out.pi[i] += 0.5 * outer[i];
  }
  return out;
}

RigidBodyState rb_mean_rhs(const RigidBodyState& mean,
                           const InertiaSpec& inertia,
                           const noise::NoiseBasis& basis) {
  RigidBodyState out = rb_drift(mean, mean, inertia);
  const RigidBodyState corr = rb_ito_correction(mean, basis);
  for (int i = 0; i < 3; ++i) out.pi[i] += corr.pi[i];
  return out;
}

DiagnosticsRecord rb_diagnostics(std::span<const RigidBodyState> members,
                                 const RigidBodyState& mean,
                                 const noise::NoiseBasis& basis, double t) {
  const std::size_t count = members.size();
  const double casimir_mean = pairwise_sum(count, [&](std::size_t m) {
                                const auto& p = members[m].pi;
                                return p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                              }) /
                              static_cast<double>(count);
  const double mean_norm2 = mean.pi[0] * mean.pi[0] + mean.pi[1] * mean.pi[1] +
                            mean.pi[2] * mean.pi[2];
  const double variance = pairwise_sum(count, [&](std::size_t m) {
                            double s = 0.0;
                            for (int i = 0; i < 3; ++i) {
                              const double d = members[m].pi[i] - mean.pi[i];
                              s += d * d;
                            }
                            return s;
                          }) /
                          static_cast<double>(count);
  double production = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto c = cross(basis.constant3(k), mean.pi);
    production += c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
  }

  DiagnosticsRecord rec;
  rec.t = t;
  rec.set("casimir_mean", casimir_mean);
  rec.set("mean_norm2", mean_norm2);
  rec.set("variance", variance);
  rec.set("production", production);
  rec.set("mean_pi_x", mean.pi[0]);
  rec.set("mean_pi_y", mean.pi[1]);
  rec.set("mean_pi_z", mean.pi[2]);
  return rec;
}

RigidBodyModel::RigidBodyModel(InertiaSpec inertia, noise::NoiseBasis basis)
    : inertia_(inertia), basis_(std::move(basis)) {
  if (basis_.dimension() != 3)
    throw ConfigError("rigidbody: noise basis must be 3-dimensional");
  if (!(inertia_.i1 > 0.0 && inertia_.i2 > 0.0 && inertia_.i3 > 0.0))
    throw ConfigError("rigidbody.inertia: moments must be positive");
}

RigidBodyModel::Mean RigidBodyModel::reduce(
    std::span<const State> members) const {
  return empirical_mean_state(members);
}

RigidBodyModel::Mean RigidBodyModel::mean_step(const Mean& mu,
                                               double dt) const {
  return heun_mean_rhs_step(*this, mu, dt);
}

}  // namespace lasalt::rigidbody
