#include "lasalt/llns.hpp"

#include <cmath>

#include "lasalt/errors.hpp"

namespace lasalt::euler2d {

namespace {

using Spectrum = std::vector<std::complex<double>>;

void mask(const Grid2D& g, Spectrum& h) { g.dealias(h); }

}  // namespace

LLNSSolver::LLNSSolver(std::shared_ptr<const Grid2D> grid,
                       noise::NoiseBasis basis)
    : grid_(std::move(grid)), basis_(std::move(basis)) {
  if (basis_.dimension() != 2)
    throw ConfigError("llns: noise basis must be 2-dimensional");
  const Grid2D& g = *grid_;
  const std::size_t n = g.n();
  const std::size_t np = g.npoints();
  a_xx_.assign(np, 0.0);
  a_xy_.assign(np, 0.0);
  a_yy_.assign(np, 0.0);
  for (auto& b : b_) b.assign(np, 0.0);
  for (auto& c : c_) c.assign(np, 0.0);
  xi_x_.resize(basis_.size());
  xi_y_.resize(basis_.size());
  dxi_.resize(basis_.size());

  for (std::size_t k = 0; k < basis_.size(); ++k) {
    xi_x_[k].resize(np);
    xi_y_[k].resize(np);
    for (auto& d : dxi_[k]) d.resize(np);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double x = g.dx() * static_cast<double>(i);
        const double y = g.dx() * static_cast<double>(j);
        const std::size_t idx = i * n + j;
        const auto xi = basis_.eval2(k, x, y);
        const auto gr = basis_.grad2(k, x, y);   // gr[a][j] = d_a xi^j
        const auto he = basis_.hess2(k, x, y);   // he[a][b][j]
        xi_x_[k][idx] = xi[0];
        xi_y_[k][idx] = xi[1];
        for (int a = 0; a < 2; ++a)
          for (int jj = 0; jj < 2; ++jj)
            dxi_[k][static_cast<std::size_t>(a * 2 + jj)][idx] = gr[a][jj];

        a_xx_[idx] += 0.5 * xi[0] * xi[0];
        a_xy_[idx] += 0.5 * xi[0] * xi[1];
        a_yy_[idx] += 0.5 * xi[1] * xi[1];
        for (int i2 = 0; i2 < 2; ++i2)
          for (int a = 0; a < 2; ++a)
            for (int jj = 0; jj < 2; ++jj)
              b_[static_cast<std::size_t>(i2 * 4 + a * 2 + jj)][idx] +=
                  xi[i2] * gr[a][jj];
        for (int a = 0; a < 2; ++a) {
          for (int bb = 0; bb < 2; ++bb) {
            double v = 0.0;
            for (int i2 = 0; i2 < 2; ++i2)
              v += gr[a][i2] * gr[i2][bb] + xi[i2] * he[i2][a][bb];
            c_[static_cast<std::size_t>(a * 2 + bb)][idx] += 0.5 * v;
          }
        }
      }
    }
  }
}

VelocityField2D LLNSSolver::lie_transpose(const std::vector<double>& vx,
                                          const std::vector<double>& vy,
                                          const VelocityField2D& u) const {
  const Grid2D& g = *grid_;
  const std::size_t np = g.npoints();
  Spectrum tmp(g.ncoeff());
  // grad u (4 fields) and u itself in physical space
  std::vector<double> du[2][2];
  const Spectrum* comp[2] = {&u.x, &u.y};
  for (int jj = 0; jj < 2; ++jj) {
    g.ddx_hat(*comp[jj], tmp);
    du[0][jj] = g.to_phys(tmp);
    g.ddy_hat(*comp[jj], tmp);
    du[1][jj] = g.to_phys(tmp);
  }
  auto upx = g.to_phys(u.x);
  auto upy = g.to_phys(u.y);
  // grad v (4 fields) from the physical components
  auto vxh = g.to_hat(vx);
  auto vyh = g.to_hat(vy);
  std::vector<double> dv[2][2];
  const Spectrum* vcomp[2] = {&vxh, &vyh};
  for (int jj = 0; jj < 2; ++jj) {
    g.ddx_hat(*vcomp[jj], tmp);
    dv[0][jj] = g.to_phys(tmp);
    g.ddy_hat(*vcomp[jj], tmp);
    dv[1][jj] = g.to_phys(tmp);
  }

  VelocityField2D out;
  std::vector<double> work(np);
  const std::vector<double>* up[2] = {&upx, &upy};
  for (int i = 0; i < 2; ++i) {
    for (std::size_t idx = 0; idx < np; ++idx) {
      // v^j d_j u^i + (d_i v^j) u^j
      work[idx] = vx[idx] * du[0][i][idx] + vy[idx] * du[1][i][idx] +
                  dv[i][0][idx] * (*up[0])[idx] +
                  dv[i][1][idx] * (*up[1])[idx];
    }
    Spectrum h = g.to_hat(work);
    mask(g, h);
    (i == 0 ? out.x : out.y) = std::move(h);
  }
  return out;
}

VelocityField2D LLNSSolver::lie_laplacian_vector(
    const VelocityField2D& u) const {
  const Grid2D& g = *grid_;
  const std::size_t np = g.npoints();
  Spectrum tmp(g.ncoeff());
  std::vector<double> du[2][2];
  const Spectrum* comp[2] = {&u.x, &u.y};
  for (int jj = 0; jj < 2; ++jj) {
    g.ddx_hat(*comp[jj], tmp);
    du[0][jj] = g.to_phys(tmp);
    g.ddy_hat(*comp[jj], tmp);
    du[1][jj] = g.to_phys(tmp);
  }
  auto upx = g.to_phys(u.x);
  auto upy = g.to_phys(u.y);
  const std::vector<double>* up[2] = {&upx, &upy};
  const std::vector<double>* A[2][2] = {{&a_xx_, &a_xy_}, {&a_xy_, &a_yy_}};

  VelocityField2D out;
  std::vector<double> fx(np), fy(np), low(np);
  for (int al = 0; al < 2; ++al) {
    // divergence-form flux F_i = A^{ij} d_j u^al
    for (std::size_t idx = 0; idx < np; ++idx) {
      fx[idx] = (*A[0][0])[idx] * du[0][al][idx] +
                (*A[0][1])[idx] * du[1][al][idx];
      fy[idx] = (*A[1][0])[idx] * du[0][al][idx] +
                (*A[1][1])[idx] * du[1][al][idx];
      double v = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj)
          v += b_[static_cast<std::size_t>(i * 4 + al * 2 + jj)][idx] *
               du[i][jj][idx];
      for (int bb = 0; bb < 2; ++bb)
        v += c_[static_cast<std::size_t>(al * 2 + bb)][idx] * (*up[bb])[idx];
      low[idx] = v;
    }
    Spectrum fxh = g.to_hat(fx);
    mask(g, fxh);
    Spectrum fyh = g.to_hat(fy);
    mask(g, fyh);
    Spectrum div(g.ncoeff());
    g.ddx_hat(fxh, div);
    g.ddy_hat(fyh, tmp);
    for (std::size_t i = 0; i < div.size(); ++i) div[i] += tmp[i];
    Spectrum lh = g.to_hat(low);
    mask(g, lh);
    for (std::size_t i = 0; i < div.size(); ++i) div[i] += lh[i];
    (al == 0 ? out.x : out.y) = std::move(div);
  }
  return out;
}

VelocityField2D LLNSSolver::lie_laplacian_vector_nested(
    const VelocityField2D& u) const {
  const Grid2D& g = *grid_;
  const std::size_t np = g.npoints();
  VelocityField2D acc;
  acc.x.assign(g.ncoeff(), 0.0);
  acc.y.assign(g.ncoeff(), 0.0);
  Spectrum tmp(g.ncoeff());

  for (std::size_t k = 0; k < basis_.size(); ++k) {
    auto lie_once = [&](const VelocityField2D& w) {
      std::vector<double> dw[2][2];
      const Spectrum* comp[2] = {&w.x, &w.y};
      for (int jj = 0; jj < 2; ++jj) {
        g.ddx_hat(*comp[jj], tmp);
        dw[0][jj] = g.to_phys(tmp);
        g.ddy_hat(*comp[jj], tmp);
        dw[1][jj] = g.to_phys(tmp);
      }
      auto wx = g.to_phys(w.x);
      auto wy = g.to_phys(w.y);
      const std::vector<double>* wp[2] = {&wx, &wy};
      VelocityField2D out;
      std::vector<double> work(np);
      for (int i = 0; i < 2; ++i) {
        for (std::size_t idx = 0; idx < np; ++idx) {
          work[idx] = xi_x_[k][idx] * dw[0][i][idx] +
                      xi_y_[k][idx] * dw[1][i][idx];
          for (int jj = 0; jj < 2; ++jj)
            work[idx] += dxi_[k][static_cast<std::size_t>(i * 2 + jj)][idx] *
                         (*wp[jj])[idx];
        }
        Spectrum h = g.to_hat(work);
        mask(g, h);
        (i == 0 ? out.x : out.y) = std::move(h);
      }
      return out;
    };
    VelocityField2D inner = lie_once(u);
    VelocityField2D outer = lie_once(inner);
    for (std::size_t i = 0; i < acc.x.size(); ++i) {
      acc.x[i] += 0.5 * outer.x[i];
      acc.y[i] += 0.5 * outer.y[i];
    }
  }
  return acc;
}

void LLNSSolver::leray_project(VelocityField2D& u) const {
  const Grid2D& g = *grid_;
  const std::size_t n = g.n();
  for (std::size_t r = 0; r < n; ++r) {
    const double kxv = g.kx(r);
    for (std::size_t c = 0; c < g.nky(); ++c) {
      const double kyv = g.ky(c);
      const double k2 = kxv * kxv + kyv * kyv;
      if (k2 == 0.0) continue;
      const std::size_t idx = r * g.nky() + c;
      const std::complex<double> kdotu = kxv * u.x[idx] + kyv * u.y[idx];
      u.x[idx] -= kxv * kdotu / k2;
      u.y[idx] -= kyv * kdotu / k2;
    }
  }
}

VelocityField2D LLNSSolver::mean_rhs(
    const VelocityField2D& v, const VelocityField2D* forcing,
    std::vector<std::complex<double>>* pressure) const {
  const Grid2D& g = *grid_;
  auto vx = g.to_phys(v.x);
  auto vy = g.to_phys(v.y);
  VelocityField2D transport = lie_transpose(vx, vy, v);
  VelocityField2D lie = lie_laplacian_vector(v);
  VelocityField2D rhs;
  rhs.x.resize(g.ncoeff());
  rhs.y.resize(g.ncoeff());
  for (std::size_t i = 0; i < rhs.x.size(); ++i) {
    rhs.x[i] = -transport.x[i] + lie.x[i];
    rhs.y[i] = -transport.y[i] + lie.y[i];
    if (forcing) {
      rhs.x[i] += forcing->x[i];
      rhs.y[i] += forcing->y[i];
    }
  }
  if (pressure) {
    // grad(pi) is the projected-out part: pi_hat = -i (k . R_hat)/|k|^2.
    pressure->assign(g.ncoeff(), 0.0);
    const std::size_t n = g.n();
    for (std::size_t r = 0; r < n; ++r) {
      const double kxv = g.kx(r);
      for (std::size_t c = 0; c < g.nky(); ++c) {
        const double kyv = g.ky(c);
        const double k2 = kxv * kxv + kyv * kyv;
        if (k2 == 0.0) continue;
        const std::size_t idx = r * g.nky() + c;
        const std::complex<double> kdotr =
            kxv * rhs.x[idx] + kyv * rhs.y[idx];
        (*pressure)[idx] = std::complex<double>(0.0, -1.0) * kdotr / k2;
      }
    }
  }
  leray_project(rhs);
  return rhs;
}

VelocityField2D LLNSSolver::step_heun(const VelocityField2D& v, double dt,
                                      const VelocityField2D* forcing) const {
  VelocityField2D k1 = mean_rhs(v, forcing);
  VelocityField2D pred;
  pred.x.resize(v.x.size());
  pred.y.resize(v.y.size());
  for (std::size_t i = 0; i < v.x.size(); ++i) {
    pred.x[i] = v.x[i] + dt * k1.x[i];
    pred.y[i] = v.y[i] + dt * k1.y[i];
  }
  VelocityField2D k2 = mean_rhs(pred, forcing);
  VelocityField2D out;
  out.x.resize(v.x.size());
  out.y.resize(v.y.size());
  for (std::size_t i = 0; i < v.x.size(); ++i) {
    out.x[i] = v.x[i] + 0.5 * dt * (k1.x[i] + k2.x[i]);
    out.y[i] = v.y[i] + 0.5 * dt * (k1.y[i] + k2.y[i]);
  }
  return out;
}

double LLNSSolver::max_divergence(const VelocityField2D& u) const {
  const Grid2D& g = *grid_;
  Spectrum div(g.ncoeff()), tmp(g.ncoeff());
  g.ddx_hat(u.x, div);
  g.ddy_hat(u.y, tmp);
  for (std::size_t i = 0; i < div.size(); ++i) div[i] += tmp[i];
  auto phys = g.to_phys(div);
  double m = 0.0;
  for (double v : phys) m = std::max(m, std::abs(v));
  return m;
}

VelocityField2D taylor_green_velocity(const Grid2D& grid) {
  const std::size_t n = grid.n();
  std::vector<double> vx(grid.npoints()), vy(grid.npoints());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.dx() * static_cast<double>(i);
      const double y = grid.dx() * static_cast<double>(j);
      vx[i * n + j] = std::sin(x) * std::cos(y);
      vy[i * n + j] = -std::cos(x) * std::sin(y);
    }
  }
  VelocityField2D u;
  u.x = grid.to_hat(vx);
  u.y = grid.to_hat(vy);
  grid.dealias(u.x);
  grid.dealias(u.y);
  return u;
}

}  // namespace lasalt::euler2d
