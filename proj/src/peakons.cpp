#include "lasalt/peakons.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "lasalt/errors.hpp"
#include "lasalt/interp.hpp"

namespace lasalt::peakons {

namespace {

double fold(double x, double L) { return x - L * std::floor(x / L); }

struct Source {
  double q;
  double w;
};

}  // namespace

double kernel(double x, double alpha) {
  return 0.5 * std::exp(-std::abs(x) / alpha);
}

double kernel_deriv(double x, double alpha) {
  if (x == 0.0) return 0.0;
  const double s = x > 0.0 ? 1.0 : -1.0;
  return -s / (2.0 * alpha) * std::exp(-std::abs(x) / alpha);
}

double kernel_periodic(double x, double alpha, double L) {
  const double d = fold(x, L);
  return std::cosh((d - 0.5 * L) / alpha) /
         (2.0 * alpha * std::sinh(0.5 * L / alpha));
}

double kernel_periodic_deriv(double x, double alpha, double L) {
  const double d = fold(x, L);
  if (d == 0.0) return 0.0;
  return std::sinh((d - 0.5 * L) / alpha) /
         (2.0 * alpha * alpha * std::sinh(0.5 * L / alpha));
}

double velocity(double x, const PeakonState& s, double alpha, KernelKind kind,
                double length) {
  double u = 0.0;
  for (std::size_t a = 0; a < s.count(); ++a) {
    u += s.p(a) * (kind == KernelKind::Line
                       ? kernel(x - s.q(a), alpha)
                       : kernel_periodic(x - s.q(a), alpha, length));
  }
  return u;
}

double velocity_deriv(double x, const PeakonState& s, double alpha,
                      KernelKind kind, double length) {
  double u = 0.0;
  for (std::size_t a = 0; a < s.count(); ++a) {
    u += s.p(a) * (kind == KernelKind::Line
                       ? kernel_deriv(x - s.q(a), alpha)
                       : kernel_periodic_deriv(x - s.q(a), alpha, length));
  }
  return u;
}

MeanVelocityField MeanVelocityField::from_ensemble(
    std::span<const PeakonState> members, double alpha, KernelKind kind,
    double length) {
  Snapshot snap;
  snap.kind = kind;
  snap.alpha = alpha;
  snap.length = length;

  std::vector<Source> sources;
  sources.reserve(members.size() * members[0].count());
  const double inv_m = 1.0 / static_cast<double>(members.size());
  for (const PeakonState& s : members) {
    for (std::size_t a = 0; a < s.count(); ++a) {
      double q = s.q(a);
      if (kind == KernelKind::Periodic) q = fold(q, length);
      sources.push_back({q, s.p(a) * inv_m});
    }
  }
  std::sort(sources.begin(), sources.end(),
            [](const Source& a, const Source& b) {
              return a.q < b.q || (a.q == b.q && a.w < b.w);
            });
  const std::size_t P = sources.size();
  snap.q.resize(P);
  snap.w.resize(P);
  for (std::size_t i = 0; i < P; ++i) {
    snap.q[i] = sources[i].q;
    snap.w[i] = sources[i].w;
  }

  if (kind == KernelKind::Line) {
    snap.fwd.resize(P);
    snap.bwd.resize(P);
    for (std::size_t i = 0; i < P; ++i) {
      snap.fwd[i] = snap.w[i];
      if (i > 0)
        snap.fwd[i] += snap.fwd[i - 1] *
                       std::exp((snap.q[i - 1] - snap.q[i]) / alpha);
    }
    for (std::size_t i = P; i-- > 0;) {
      snap.bwd[i] = snap.w[i];
      if (i + 1 < P)
        snap.bwd[i] += snap.bwd[i + 1] *
                       std::exp((snap.q[i] - snap.q[i + 1]) / alpha);
    }
  } else {
    if (length / alpha > 600.0)
      throw ConfigError("peakons: L/alpha too large for the periodic kernel");
    snap.pre_neg.resize(P);
    snap.pre_pos.resize(P);
    snap.suf_neg.resize(P);
    snap.suf_pos.resize(P);
    for (std::size_t i = 0; i < P; ++i) {
      snap.pre_neg[i] = snap.w[i] * std::exp(-snap.q[i] / alpha) +
                        (i > 0 ? snap.pre_neg[i - 1] : 0.0);
      snap.pre_pos[i] = snap.w[i] * std::exp(snap.q[i] / alpha) +
                        (i > 0 ? snap.pre_pos[i - 1] : 0.0);
    }
    for (std::size_t i = P; i-- > 0;) {
      snap.suf_neg[i] = snap.w[i] * std::exp(-snap.q[i] / alpha) +
                        (i + 1 < P ? snap.suf_neg[i + 1] : 0.0);
      snap.suf_pos[i] = snap.w[i] * std::exp(snap.q[i] / alpha) +
                        (i + 1 < P ? snap.suf_pos[i + 1] : 0.0);
    }
  }

  MeanVelocityField field;
  field.impl_ = std::move(snap);
  return field;
}

MeanVelocityField MeanVelocityField::from_grid(
    std::shared_ptr<const Grid1D> grid, std::vector<double> momentum,
    double alpha) {
  GridField g;
  g.alpha = alpha;
  auto hat = grid->to_hat(momentum);
  grid->dealias(hat);
  std::vector<std::complex<double>> vhat(hat.size());
  for (std::size_t k = 0; k < hat.size(); ++k) {
    const double kk = grid->wavenumber(k);
    vhat[k] = hat[k] / (1.0 + alpha * alpha * kk * kk);
  }
  g.vel = grid->to_phys(vhat);
  std::vector<std::complex<double>> dvhat(hat.size());
  grid->derivative_hat(vhat, dvhat);
  g.vel_x = grid->to_phys(dvhat);
  g.momentum = std::move(momentum);
  g.grid = std::move(grid);
  MeanVelocityField field;
  field.impl_ = std::move(g);
  return field;
}

bool MeanVelocityField::is_grid() const {
  return std::holds_alternative<GridField>(impl_);
}

const std::vector<double>& MeanVelocityField::grid_momentum() const {
  return std::get<GridField>(impl_).momentum;
}

const Grid1D& MeanVelocityField::grid() const {
  return *std::get<GridField>(impl_).grid;
}

double MeanVelocityField::alpha() const {
  if (is_grid()) return std::get<GridField>(impl_).alpha;
  return std::get<Snapshot>(impl_).alpha;
}

double MeanVelocityField::u(double x) const {
  if (const auto* g = std::get_if<GridField>(&impl_))
    return interp_periodic(g->vel, g->grid->length(), x);
  const Snapshot& s = std::get<Snapshot>(impl_);
  const std::size_t P = s.q.size();
  if (s.kind == KernelKind::Line) {
    const auto hi =
        std::upper_bound(s.q.begin(), s.q.end(), x) - s.q.begin();
    double left = 0.0, right = 0.0;
    if (hi > 0)
      left = s.fwd[hi - 1] * std::exp((s.q[hi - 1] - x) / s.alpha);
    if (static_cast<std::size_t>(hi) < P)
      right = s.bwd[hi] * std::exp((x - s.q[hi]) / s.alpha);
    return 0.5 * (left + right);
  }
  const double xf = fold(x, s.length);
  const double c =
      1.0 / (2.0 * s.alpha * std::sinh(0.5 * s.length / s.alpha));
  const double eh = std::exp(0.5 * s.length / s.alpha);
  const auto hi = std::upper_bound(s.q.begin(), s.q.end(), xf) - s.q.begin();
  const double ex = std::exp(xf / s.alpha);
  double total = 0.0;
  if (hi > 0)
    total += ex * s.pre_neg[hi - 1] / eh + s.pre_pos[hi - 1] / ex * eh;
  if (static_cast<std::size_t>(hi) < P)
    total += ex * s.suf_neg[hi] * eh + s.suf_pos[hi] / ex / eh;
  return 0.5 * c * total;
}

double MeanVelocityField::ux(double x) const {
  if (const auto* g = std::get_if<GridField>(&impl_))
    return interp_periodic(g->vel_x, g->grid->length(), x);
  const Snapshot& s = std::get<Snapshot>(impl_);
  const std::size_t P = s.q.size();
  if (s.kind == KernelKind::Line) {
    const auto lo =
        std::lower_bound(s.q.begin(), s.q.end(), x) - s.q.begin();
    const auto hi =
        std::upper_bound(s.q.begin(), s.q.end(), x) - s.q.begin();
    double left = 0.0, right = 0.0;
    if (lo > 0)
      left = s.fwd[lo - 1] * std::exp((s.q[lo - 1] - x) / s.alpha);
    if (static_cast<std::size_t>(hi) < P)
      right = s.bwd[hi] * std::exp((x - s.q[hi]) / s.alpha);
    return (right - left) / (2.0 * s.alpha);
  }
  const double xf = fold(x, s.length);
  const double c =
      1.0 / (2.0 * s.alpha * std::sinh(0.5 * s.length / s.alpha));
  const double eh = std::exp(0.5 * s.length / s.alpha);
  const auto lo = std::lower_bound(s.q.begin(), s.q.end(), xf) - s.q.begin();
  const auto hi = std::upper_bound(s.q.begin(), s.q.end(), xf) - s.q.begin();
  const double ex = std::exp(xf / s.alpha);
  double total = 0.0;
  if (lo > 0)
    total += ex * s.pre_neg[lo - 1] / eh - s.pre_pos[lo - 1] / ex * eh;
  if (static_cast<std::size_t>(hi) < P)
    total += ex * s.suf_neg[hi] * eh - s.suf_pos[hi] / ex / eh;
  return 0.5 * c * total / s.alpha;
}

PeakonModel::PeakonModel(std::size_t peakon_count, double alpha,
                         KernelKind kind, noise::NoiseBasis basis,
                         double length, std::size_t mean_grid)
    : count_(peakon_count), alpha_(alpha), kind_(kind), length_(length),
      basis_(std::move(basis)) {
  if (count_ < 1) throw ConfigError("peakons.n: need at least one peakon");
  if (!(alpha_ > 0.0)) throw ConfigError("peakons.alpha: must be positive");
  if (basis_.dimension() != 1)
    throw ConfigError("peakons: noise basis must be 1-dimensional");
  mean_grid_ = std::make_shared<Grid1D>(mean_grid, length_);
  const std::size_t n = mean_grid_->n();
  xi_grid_.resize(basis_.size());
  xi_x_grid_.resize(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    xi_grid_[k].resize(n);
    xi_x_grid_[k].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      xi_grid_[k][j] = basis_.eval1(k, mean_grid_->x(j));
      xi_x_grid_[k][j] = basis_.eval1_d1(k, mean_grid_->x(j));
    }
  }
}

PeakonState PeakonModel::drift(const State& s, const Mean& mu) const {
  State out;
  out.qp.assign(2 * count_, 0.0);
  for (std::size_t a = 0; a < count_; ++a) {
    out.q(a) = mu.u(s.q(a));
    out.p(a) = -s.p(a) * mu.ux(s.q(a));
  }
  return out;
}

PeakonState PeakonModel::diffusion(const State& s, std::size_t k) const {
  State out;
  out.qp.assign(2 * count_, 0.0);
  for (std::size_t a = 0; a < count_; ++a) {
    out.q(a) = basis_.eval1(k, s.q(a));
    out.p(a) = -s.p(a) * basis_.eval1_d1(k, s.q(a));
  }
  return out;
}

PeakonState PeakonModel::ito_correction(const State& s) const {
  State out;
  out.qp.assign(2 * count_, 0.0);
  for (std::size_t a = 0; a < count_; ++a) {
    double cq = 0.0, cp = 0.0;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const double xi = basis_.eval1(k, s.q(a));
      const double xi1 = basis_.eval1_d1(k, s.q(a));
      const double xi2 = basis_.eval1_d2(k, s.q(a));
      cq += 0.5 * xi * xi1;
      cp += 0.5 * s.p(a) * (xi1 * xi1 - xi * xi2);
    }
    out.q(a) = cq;
    out.p(a) = cp;
  }
  return out;
}

PeakonModel::Mean PeakonModel::reduce(std::span<const State> members) const {
  return MeanVelocityField::from_ensemble(members, alpha_, kind_, length_);
}

PeakonModel::Mean PeakonModel::mean_initial(
    std::span<const State> members) const {
  if (kind_ != KernelKind::Periodic)
    throw ConfigError("peakons: decoupled mode requires kernel=\"periodic\"");
  // Band-limited projection of the empirical mean momentum (a sum of point
  // masses) onto the grid.
  const std::size_t nk = mean_grid_->nk();
  std::vector<std::complex<double>> mhat(nk, 0.0);
  const double inv_m = 1.0 / static_cast<double>(members.size());
  for (const PeakonState& s : members) {
    for (std::size_t a = 0; a < s.count(); ++a) {
      const double q = fold(s.q(a), length_);
      const double w = s.p(a) * inv_m / length_;
      for (std::size_t k = 0; k < nk; ++k) {
        const double th = mean_grid_->wavenumber(k) * q;
        mhat[k] += w * std::complex<double>(std::cos(th), -std::sin(th));
      }
    }
  }
  mean_grid_->dealias(mhat);
  return make_grid_mean(mean_grid_->to_phys(mhat));
}

std::vector<double> PeakonModel::grid_rhs(const std::vector<double>& m) const {
  const Grid1D& g = *mean_grid_;
  const std::size_t n = g.n();
  auto mhat = g.to_hat(m);
  std::vector<std::complex<double>> vhat(mhat.size());
  for (std::size_t k = 0; k < mhat.size(); ++k) {
    const double kk = g.wavenumber(k);
    vhat[k] = mhat[k] / (1.0 + alpha_ * alpha_ * kk * kk);
  }
  auto v = g.to_phys(vhat);
  std::vector<std::complex<double>> tmp(mhat.size());
  g.derivative_hat(vhat, tmp);
  auto vx = g.to_phys(tmp);
  g.derivative_hat(mhat, tmp);
  auto mx = g.to_phys(tmp);

  // one-form density transport: L_v m = v m_x + 2 m v_x
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < n; ++j)
    rhs[j] = -(v[j] * mx[j] + 2.0 * m[j] * vx[j]);
  auto rhat = g.to_hat(rhs);
  g.dealias(rhat);
  rhs = g.to_phys(rhat);

  for (std::size_t k = 0; k < basis_.size(); ++k) {
    std::vector<double> inner(n);
    for (std::size_t j = 0; j < n; ++j)
      inner[j] = xi_grid_[k][j] * mx[j] + 2.0 * m[j] * xi_x_grid_[k][j];
    auto ihat = g.to_hat(inner);
    g.dealias(ihat);
    auto innerp = g.to_phys(ihat);
    g.derivative_hat(ihat, tmp);
    auto innerx = g.to_phys(tmp);
    std::vector<double> outer(n);
    for (std::size_t j = 0; j < n; ++j)
      outer[j] = xi_grid_[k][j] * innerx[j] +
                 2.0 * innerp[j] * xi_x_grid_[k][j];
    auto ohat = g.to_hat(outer);
    g.dealias(ohat);
    auto outerp = g.to_phys(ohat);
    for (std::size_t j = 0; j < n; ++j) rhs[j] += 0.5 * outerp[j];
  }
  return rhs;
}

PeakonModel::Mean PeakonModel::make_grid_mean(
    std::vector<double> momentum) const {
  return MeanVelocityField::from_grid(mean_grid_, std::move(momentum), alpha_);
}

PeakonModel::Mean PeakonModel::mean_step(const Mean& mu, double dt) const {
  const std::vector<double>& m0 = mu.grid_momentum();
  auto k1 = grid_rhs(m0);
  std::vector<double> pred(m0.size());
  for (std::size_t j = 0; j < m0.size(); ++j) pred[j] = m0[j] + dt * k1[j];
  auto k2 = grid_rhs(pred);
  std::vector<double> out(m0.size());
  for (std::size_t j = 0; j < m0.size(); ++j)
    out[j] = m0[j] + 0.5 * dt * (k1[j] + k2[j]);
  return make_grid_mean(std::move(out));
}

void PeakonModel::postprocess(State& s) const {
  if (kind_ != KernelKind::Line) return;
  for (std::size_t a = 1; a < s.count(); ++a) {
    if (!(s.q(a) > s.q(a - 1)))
      throw NumericalFailure("peakon ordering violated");
  }
}

}  // namespace lasalt::peakons
