#include "lasalt/burgers1d.hpp"

#include <cmath>

#include "lasalt/errors.hpp"
#include "lasalt/interp.hpp"
#include "lasalt/meanfield.hpp"
#include "lasalt/philox.hpp"

namespace lasalt::burgers {

BurgersModel::BurgersModel(std::shared_ptr<const Grid1D> grid,
                           noise::NoiseBasis basis,
                           std::vector<double> forcing)
    : grid_(std::move(grid)), basis_(std::move(basis)),
      forcing_(std::move(forcing)) {
  if (basis_.dimension() != 1)
    throw ConfigError("burgers: noise basis must be 1-dimensional");
  if (!forcing_.empty() && forcing_.size() != grid_->n())
    throw ConfigError("burgers: forcing grid mismatch");
  const std::size_t n = grid_->n();
  xi_.resize(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    xi_[k].resize(n);
    for (std::size_t j = 0; j < n; ++j)
      xi_[k][j] = basis_.eval1(k, grid_->x(j));
  }
}

Field1D BurgersModel::drift(const State& u, const Mean& mean_u) const {
  auto ux = grid_->derivative(u.values);
  auto prod = grid_->product_dealiased(mean_u.values, ux);
  for (double& v : prod) v = -v;
  return {std::move(prod)};
}

Field1D BurgersModel::diffusion(const State& u, std::size_t k) const {
  auto ux = grid_->derivative(u.values);
  auto prod = grid_->product_dealiased(xi_[k], ux);
  for (double& v : prod) v = -v;
  return {std::move(prod)};
}

Field1D BurgersModel::ito_correction(const State& u) const {
  const std::size_t n = grid_->n();
  std::vector<double> acc(n, 0.0);
  auto ux = grid_->derivative(u.values);
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    auto inner = grid_->product_dealiased(xi_[k], ux);
    auto inner_x = grid_->derivative(inner);
    auto outer = grid_->product_dealiased(xi_[k], inner_x);
    for (std::size_t j = 0; j < n; ++j) acc[j] += 0.5 * outer[j];
  }
  return {std::move(acc)};
}

Field1D BurgersModel::mean_rhs(const Mean& v) const {
  Field1D out = drift(v, v);
  Field1D corr = ito_correction(v);
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    out.values[j] += corr.values[j];
    if (!forcing_.empty()) out.values[j] += forcing_[j];
  }
  return out;
}

BurgersModel::Mean BurgersModel::reduce(std::span<const State> members) const {
  return empirical_mean_state(members);
}

BurgersModel::Mean BurgersModel::mean_step(const Mean& mu, double dt) const {
  return heun_mean_rhs_step(*this, mu, dt);
}

void BurgersModel::postprocess(State& u) const {
  auto hat = grid_->to_hat(u.values);
  grid_->dealias(hat);
  grid_->inverse(hat, u.values);
}

Field1D characteristics_oracle(const Grid1D& grid, const Field1D& u0,
                               std::span<const Field1D> mean_path,
                               std::uint64_t seed, std::size_t member,
                               const noise::NoiseBasis& basis, double dt) {
  const std::size_t n = grid.n();
  const std::size_t steps = mean_path.size() - 1;
  const double L = grid.length();
  const std::size_t K = basis.size();

  Field1D result;
  result.values.resize(n);
  std::vector<double> dW(K);
  for (std::size_t j = 0; j < n; ++j) {
    double z = grid.x(j);
    for (std::size_t i = steps; i-- > 0;) {
      const double scale = std::sqrt(dt);
      for (std::size_t k = 0; k < K; ++k) {
        dW[k] = scale * rng::normal(seed, static_cast<std::uint32_t>(member),
                                    static_cast<std::uint32_t>(i),
                                    static_cast<std::uint32_t>(k));
      }
      auto rhs = [&](double y) {
        double inc = interp_periodic(mean_path[i].values, L, y) * dt;
        for (std::size_t k = 0; k < K; ++k) inc += basis.eval1(k, y) * dW[k];
        return inc;
      };
      const double r0 = rhs(z);
      const double pred = z - r0;
      z -= 0.5 * (r0 + rhs(pred));
      if (!std::isfinite(z))
        throw NumericalFailure("characteristics: non-finite position");
    }
    result.values[j] = interp_periodic(u0.values, L, z);
  }
  return result;
}

Field1D sine_initial(const Grid1D& grid) {
  Field1D f;
  f.values.resize(grid.n());
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t j = 0; j < grid.n(); ++j)
    f.values[j] = std::sin(two_pi * grid.x(j) / grid.length());
  return f;
}

}  // namespace lasalt::burgers
