#include "lasalt/euler2d.hpp"

#include <algorithm>
#include <cmath>

#include "lasalt/errors.hpp"
#include "lasalt/interp.hpp"
#include "lasalt/meanfield.hpp"
#include "lasalt/philox.hpp"

namespace lasalt::euler2d {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void biot_savart(const Grid2D& grid,
                 std::span<const std::complex<double>> omega,
                 std::span<std::complex<double>> ux_hat,
                 std::span<std::complex<double>> uy_hat) {
  Spectrum psi(grid.ncoeff());
  grid.invert_laplacian_hat(omega, psi);
  grid.ddy_hat(psi, ux_hat);
  for (auto& c : ux_hat) c = -c;
  grid.ddx_hat(psi, uy_hat);
}

Spectrum advect_scalar(const Grid2D& grid,
                       std::span<const std::complex<double>> omega,
                       std::span<const double> vx,
                       std::span<const double> vy) {
  Spectrum tmp(grid.ncoeff());
  grid.ddx_hat(omega, tmp);
  auto wx = grid.to_phys(tmp);
  grid.ddy_hat(omega, tmp);
  auto wy = grid.to_phys(tmp);
  std::vector<double> adv(grid.npoints());
  for (std::size_t j = 0; j < adv.size(); ++j)
    adv[j] = -(vx[j] * wx[j] + vy[j] * wy[j]);
  Spectrum out = grid.to_hat(adv);
  grid.dealias(out);
  grid.zero_mean(out);
  return out;
}

Euler2DModel::Euler2DModel(std::shared_ptr<const Grid2D> grid,
                           noise::NoiseBasis basis)
    : grid_(std::move(grid)), basis_(std::move(basis)) {
  if (basis_.dimension() != 2)
    throw ConfigError("euler2d: noise basis must be 2-dimensional");
  const std::size_t n = grid_->n();
  xi_x_.resize(basis_.size());
  xi_y_.resize(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    xi_x_[k].resize(grid_->npoints());
    xi_y_[k].resize(grid_->npoints());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto v = basis_.eval2(k, grid_->dx() * static_cast<double>(i),
                                    grid_->dx() * static_cast<double>(j));
        xi_x_[k][i * n + j] = v[0];
        xi_y_[k][i * n + j] = v[1];
      }
    }
  }
}

Euler2DModel::RhsParts Euler2DModel::eval_parts(const State& s,
                                                const std::vector<double>& vx,
                                                const std::vector<double>& vy,
                                                bool with_lie,
                                                bool with_noise) const {
  const Grid2D& g = *grid_;
  Spectrum tmp(g.ncoeff());
  g.ddx_hat(s.hat, tmp);
  auto wx = g.to_phys(tmp);
  g.ddy_hat(s.hat, tmp);
  auto wy = g.to_phys(tmp);

  RhsParts parts;
  std::vector<double> adv(g.npoints());
  for (std::size_t j = 0; j < adv.size(); ++j)
    adv[j] = -(vx[j] * wx[j] + vy[j] * wy[j]);
  parts.det = g.to_hat(adv);
  g.dealias(parts.det);
  g.zero_mean(parts.det);

  if (!with_lie && !with_noise) return parts;
  if (with_noise) parts.noise.resize(basis_.size());
  std::vector<double> work(g.npoints());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    for (std::size_t j = 0; j < work.size(); ++j)
      work[j] = xi_x_[k][j] * wx[j] + xi_y_[k][j] * wy[j];
    Spectrum ghat = g.to_hat(work);
    g.dealias(ghat);
    g.zero_mean(ghat);
    if (with_lie) {
      g.ddx_hat(ghat, tmp);
      auto hx = g.to_phys(tmp);
      g.ddy_hat(ghat, tmp);
      auto hy = g.to_phys(tmp);
      for (std::size_t j = 0; j < work.size(); ++j)
        work[j] = xi_x_[k][j] * hx[j] + xi_y_[k][j] * hy[j];
      Spectrum lhat = g.to_hat(work);
      g.dealias(lhat);
      g.zero_mean(lhat);
      for (std::size_t j = 0; j < lhat.size(); ++j)
        parts.det[j] += 0.5 * lhat[j];
    }
    if (with_noise) {
      for (auto& c : ghat) c = -c;
      parts.noise[k] = std::move(ghat);
    }
  }
  return parts;
}

Euler2DModel::State Euler2DModel::drift(const State& s, const Mean& mu) const {
  return {eval_parts(s, mu.ux, mu.uy, false, false).det};
}

Euler2DModel::State Euler2DModel::diffusion(const State& s,
                                            std::size_t k) const {
  const Grid2D& g = *grid_;
  Spectrum tmp(g.ncoeff());
  g.ddx_hat(s.hat, tmp);
  auto wx = g.to_phys(tmp);
  g.ddy_hat(s.hat, tmp);
  auto wy = g.to_phys(tmp);
  std::vector<double> work(g.npoints());
  for (std::size_t j = 0; j < work.size(); ++j)
    work[j] = -(xi_x_[k][j] * wx[j] + xi_y_[k][j] * wy[j]);
  Spectrum out = g.to_hat(work);
  g.dealias(out);
  g.zero_mean(out);
  return {std::move(out)};
}

Euler2DModel::State Euler2DModel::ito_correction(const State& s) const {
  const std::vector<double> zero(grid_->npoints(), 0.0);
  auto parts = eval_parts(s, zero, zero, true, false);
  return {std::move(parts.det)};
}

Euler2DModel::State Euler2DModel::mean_rhs(const State& omega) const {
  const Grid2D& g = *grid_;
  Spectrum uxh(g.ncoeff()), uyh(g.ncoeff());
  biot_savart(g, omega.hat, uxh, uyh);
  auto ux = g.to_phys(uxh);
  auto uy = g.to_phys(uyh);
  return {eval_parts(omega, ux, uy, true, false).det};
}

Euler2DModel::State Euler2DModel::step_member_em(const State& s,
                                                 const Mean& mu,
                                                 std::span<const double> dW,
                                                 double dt) const {
  auto parts0 = eval_parts(s, mu.ux, mu.uy, true, true);
  State pred = s;
  for (std::size_t j = 0; j < pred.hat.size(); ++j)
    pred.hat[j] += dt * parts0.det[j];
  auto parts1 = eval_parts(pred, mu.ux, mu.uy, true, false);
  State out = s;
  for (std::size_t j = 0; j < out.hat.size(); ++j)
    out.hat[j] += 0.5 * dt * (parts0.det[j] + parts1.det[j]);
  for (std::size_t k = 0; k < basis_.size(); ++k)
    for (std::size_t j = 0; j < out.hat.size(); ++j)
      out.hat[j] += dW[k] * parts0.noise[k][j];
  return out;
}

Euler2DModel::State Euler2DModel::step_member_heun(const State& s,
                                                   const Mean& mu,
                                                   std::span<const double> dW,
                                                   double dt) const {
  auto parts0 = eval_parts(s, mu.ux, mu.uy, false, true);
  State pred = s;
  for (std::size_t j = 0; j < pred.hat.size(); ++j)
    pred.hat[j] += dt * parts0.det[j];
  for (std::size_t k = 0; k < basis_.size(); ++k)
    for (std::size_t j = 0; j < pred.hat.size(); ++j)
      pred.hat[j] += dW[k] * parts0.noise[k][j];
  auto parts1 = eval_parts(pred, mu.ux, mu.uy, false, true);
  State out = s;
  for (std::size_t j = 0; j < out.hat.size(); ++j)
    out.hat[j] += 0.5 * dt * (parts0.det[j] + parts1.det[j]);
  for (std::size_t k = 0; k < basis_.size(); ++k)
    for (std::size_t j = 0; j < out.hat.size(); ++j)
      out.hat[j] += 0.5 * dW[k] * (parts0.noise[k][j] + parts1.noise[k][j]);
  return out;
}

void Euler2DModel::pre_step(const Mean& mu, double dt) const {
  const double h = grid_->dx();
  if (mu.umax * dt / h > 0.5)
    throw ConfigError("euler2d: CFL violated (|u|max dt / h > 0.5); reduce dt");
}

Euler2DModel::Mean Euler2DModel::reduce(std::span<const State> members) const {
  State mean = empirical_mean_state(members);
  return make_mean(std::move(mean));
}

Euler2DModel::Mean Euler2DModel::make_mean(VorticityState omega) const {
  const Grid2D& g = *grid_;
  g.dealias(omega.hat);
  g.zero_mean(omega.hat);
  Mean mu;
  Spectrum uxh(g.ncoeff()), uyh(g.ncoeff());
  biot_savart(g, omega.hat, uxh, uyh);
  mu.ux = g.to_phys(uxh);
  mu.uy = g.to_phys(uyh);
  mu.umax = 0.0;
  for (std::size_t j = 0; j < mu.ux.size(); ++j) {
    mu.umax = std::max(mu.umax,
                       std::sqrt(mu.ux[j] * mu.ux[j] + mu.uy[j] * mu.uy[j]));
  }
  mu.omega = std::move(omega);
  return mu;
}

Euler2DModel::Mean Euler2DModel::mean_step(const Mean& mu, double dt) const {
  const Grid2D& g = *grid_;
  State k1 = mean_rhs(mu.omega);
  State pred = mu.omega;
  for (std::size_t j = 0; j < pred.hat.size(); ++j)
    pred.hat[j] += dt * k1.hat[j];
  g.dealias(pred.hat);
  g.zero_mean(pred.hat);
  State k2 = mean_rhs(pred);
  State out = mu.omega;
  for (std::size_t j = 0; j < out.hat.size(); ++j)
    out.hat[j] += 0.5 * dt * (k1.hat[j] + k2.hat[j]);
  return make_mean(std::move(out));
}

void Euler2DModel::project_mean(Mean& mu) const {
  grid_->dealias(mu.omega.hat);
  grid_->zero_mean(mu.omega.hat);
}

void Euler2DModel::postprocess(State& s) const {
  grid_->dealias(s.hat);
  grid_->zero_mean(s.hat);
}

MaterialLoop make_circle_loop(double cx, double cy, double radius,
                              std::size_t markers) {
  MaterialLoop loop;
  loop.x.resize(markers);
  loop.y.resize(markers);
  for (std::size_t i = 0; i < markers; ++i) {
    const double th = kTwoPi * static_cast<double>(i) /
                      static_cast<double>(markers);
    loop.x[i] = cx + radius * std::cos(th);
    loop.y[i] = cy + radius * std::sin(th);
  }
  return loop;
}

void advect_loop(MaterialLoop& loop, const Grid2D& grid,
                 std::span<const double> ux, std::span<const double> uy,
                 const noise::NoiseBasis& basis, std::span<const double> dW,
                 double dt) {
  const std::size_t n = grid.n();
  const double L = grid.length();
  auto displacement = [&](double x, double y, double& dx, double& dy) {
    dx = interp_periodic2(ux, n, n, L, x, y) * dt;
    dy = interp_periodic2(uy, n, n, L, x, y) * dt;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const auto v = basis.eval2(k, x, y);
      dx += v[0] * dW[k];
      dy += v[1] * dW[k];
    }
  };
  for (std::size_t i = 0; i < loop.size(); ++i) {
    double d0x, d0y, d1x, d1y;
    displacement(loop.x[i], loop.y[i], d0x, d0y);
    displacement(loop.x[i] + d0x, loop.y[i] + d0y, d1x, d1y);
    loop.x[i] += 0.5 * (d0x + d1x);
    loop.y[i] += 0.5 * (d0y + d1y);
  }
}

double circulation(const MaterialLoop& loop, const Grid2D& grid,
                   std::span<const double> ux, std::span<const double> uy) {
  const std::size_t P = loop.size();
  const std::size_t n = grid.n();
  const double L = grid.length();
  double total = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t prev = (i + P - 1) % P;
    const std::size_t next = (i + 1) % P;
    const double tx = 0.5 * (loop.x[next] - loop.x[prev]);
    const double ty = 0.5 * (loop.y[next] - loop.y[prev]);
    total += interp_periodic2(ux, n, n, L, loop.x[i], loop.y[i]) * tx +
             interp_periodic2(uy, n, n, L, loop.x[i], loop.y[i]) * ty;
  }
  return total;
}

double loop_spacing_ratio(const MaterialLoop& loop) {
  const std::size_t P = loop.size();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t next = (i + 1) % P;
    const double d = std::hypot(loop.x[next] - loop.x[i],
                                loop.y[next] - loop.y[i]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

bool resample_loop_arclength(MaterialLoop& loop) {
  const std::size_t P = loop.size();
  std::vector<double> s(P + 1, 0.0);
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t next = (i + 1) % P;
    const double d = std::hypot(loop.x[next] - loop.x[i],
                                loop.y[next] - loop.y[i]);
    if (!std::isfinite(d)) return false;
    s[i + 1] = s[i] + d;
  }
  const double total = s[P];
  if (!(total > 0.0)) return false;
  MaterialLoop out;
  out.x.resize(P);
  out.y.resize(P);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < P; ++i) {
    const double target = total * static_cast<double>(i) /
                          static_cast<double>(P);
    while (seg + 1 < P && s[seg + 1] < target) ++seg;
    const double span = s[seg + 1] - s[seg];
    const double t = span > 0.0 ? (target - s[seg]) / span : 0.0;
    const std::size_t next = (seg + 1) % P;
    out.x[i] = loop.x[seg] + t * (loop.x[next] - loop.x[seg]);
    out.y[i] = loop.y[seg] + t * (loop.y[next] - loop.y[seg]);
  }
  loop = std::move(out);
  return true;
}

VorticityState taylor_green_vorticity(const Grid2D& grid) {
  const std::size_t n = grid.n();
  std::vector<double> w(grid.npoints());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.dx() * static_cast<double>(i);
      const double y = grid.dx() * static_cast<double>(j);
      w[i * n + j] = 2.0 * std::sin(x) * std::sin(y);
    }
  }
  VorticityState s{grid.to_hat(w)};
  grid.dealias(s.hat);
  grid.zero_mean(s.hat);
  return s;
}

VorticityState random_shear_vorticity(const Grid2D& grid, std::uint64_t seed) {
  const std::size_t n = grid.n();
  double amp[3], phase[5];
  for (int j = 0; j < 3; ++j)
    amp[j] = 0.5 + 0.5 * rng::uniform(seed, 0xFFFFFFFEu, 0, static_cast<
                                      std::uint32_t>(j), 1);
  for (int j = 0; j < 5; ++j)
    phase[j] = kTwoPi * rng::uniform(seed, 0xFFFFFFFEu, 0,
                                     static_cast<std::uint32_t>(j), 2);
  std::vector<double> w(grid.npoints());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t jj = 0; jj < n; ++jj) {
      const double x = grid.dx() * static_cast<double>(i);
      const double y = grid.dx() * static_cast<double>(jj);
      double v = 0.0;
      for (int m = 0; m < 3; ++m)
        v += amp[m] * std::cos(static_cast<double>(m + 1) * y + phase[m]);
      v += 0.1 * std::cos(x + phase[3]) * std::cos(2.0 * y + phase[4]);
      w[i * n + jj] = v;
    }
  }
  VorticityState s{grid.to_hat(w)};
  grid.dealias(s.hat);
  grid.zero_mean(s.hat);
  return s;
}

}  // namespace lasalt::euler2d
