#include "lasalt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lasalt/errors.hpp"
#include "lasalt/philox.hpp"
#include "lasalt/spectral2d.hpp"

namespace lasalt::noise {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double smallest_eig_2x2(double a, double b, double c) {
  // [[a, b], [b, c]]
  const double tr = a + c;
  const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
  return 0.5 * (tr - disc);
}

double smallest_eig_3x3(std::array<std::array<double, 3>, 3> m) {
  // Cyclic Jacobi; plenty for 3x3 SPD-ish matrices.
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-30) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (m[p][q] == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        std::array<std::array<double, 3>, 3> r{};
        for (int i = 0; i < 3; ++i) r[i][i] = 1.0;
        r[p][p] = c;
        r[q][q] = c;
        r[p][q] = s;
        r[q][p] = -s;
        std::array<std::array<double, 3>, 3> t{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) t[i][j] += r[k][i] * m[k][j];
        std::array<std::array<double, 3>, 3> out{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) out[i][j] += t[i][k] * r[k][j];
        m = out;
      }
    }
  }
  return std::min({m[0][0], m[1][1], m[2][2]});
}

}  // namespace

NoiseBasis::NoiseBasis(int dimension, std::vector<Correlate> correlates,
                       bool divergence_free)
    : dimension_(dimension),
      correlates_(std::move(correlates)),
      divergence_free_(divergence_free) {
  if (dimension < 1 || dimension > 3)
    throw ConfigError("noise: dimension must be 1, 2 or 3");
  if (correlates_.empty())
    throw ConfigError("noise: correlate list must not be empty");
}

std::array<double, 3> NoiseBasis::constant3(std::size_t k) const {
  return correlates_[k].constant;
}

std::array<double, 2> NoiseBasis::eval2(std::size_t k, double x,
                                        double y) const {
  const Correlate& c = correlates_[k];
  if (c.kind == CorrelateKind::Constant)
    return {c.constant[0], c.constant[1]};
  const double kxv = static_cast<double>(c.wavevector[0]);
  const double kyv = static_cast<double>(c.wavevector[1]);
  const double norm = std::sqrt(kxv * kxv + kyv * kyv);
  const double trig = std::cos(kxv * x + kyv * y + c.phase);
  return {c.amplitude * (-kyv / norm) * trig, c.amplitude * (kxv / norm) * trig};
}

std::array<std::array<double, 2>, 2> NoiseBasis::grad2(std::size_t k, double x,
                                                       double y) const {
  const Correlate& c = correlates_[k];
  std::array<std::array<double, 2>, 2> g{};
  if (c.kind == CorrelateKind::Constant) return g;
  const double kxv = static_cast<double>(c.wavevector[0]);
  const double kyv = static_cast<double>(c.wavevector[1]);
  const double norm = std::sqrt(kxv * kxv + kyv * kyv);
  const double s = std::sin(kxv * x + kyv * y + c.phase);
  const std::array<double, 2> dir = {-kyv / norm, kxv / norm};
  const std::array<double, 2> wav = {kxv, kyv};
  for (int a = 0; a < 2; ++a)
    for (int j = 0; j < 2; ++j) g[a][j] = -c.amplitude * dir[j] * wav[a] * s;
  return g;
}

std::array<std::array<std::array<double, 2>, 2>, 2> NoiseBasis::hess2(
    std::size_t k, double x, double y) const {
  const Correlate& c = correlates_[k];
  std::array<std::array<std::array<double, 2>, 2>, 2> h{};
  if (c.kind == CorrelateKind::Constant) return h;
  const double kxv = static_cast<double>(c.wavevector[0]);
  const double kyv = static_cast<double>(c.wavevector[1]);
  const double norm = std::sqrt(kxv * kxv + kyv * kyv);
  const double cs = std::cos(kxv * x + kyv * y + c.phase);
  const std::array<double, 2> dir = {-kyv / norm, kxv / norm};
  const std::array<double, 2> wav = {kxv, kyv};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int j = 0; j < 2; ++j)
        h[a][b][j] = -c.amplitude * dir[j] * wav[a] * wav[b] * cs;
  return h;
}

double NoiseBasis::eval1(std::size_t k, double x) const {
  const Correlate& c = correlates_[k];
  if (c.kind == CorrelateKind::Constant) return c.constant[0];
  double v = c.offset;
  for (const Mode1D& m : c.modes)
    v += m.amplitude * std::cos(static_cast<double>(m.k) * x + m.phase);
  return v;
}

double NoiseBasis::eval1_d1(std::size_t k, double x) const {
  const Correlate& c = correlates_[k];
  if (c.kind == CorrelateKind::Constant) return 0.0;
  double v = 0.0;
  for (const Mode1D& m : c.modes) {
    const double kk = static_cast<double>(m.k);
    v -= m.amplitude * kk * std::sin(kk * x + m.phase);
  }
  return v;
}

double NoiseBasis::eval1_d2(std::size_t k, double x) const {
  const Correlate& c = correlates_[k];
  if (c.kind == CorrelateKind::Constant) return 0.0;
  double v = 0.0;
  for (const Mode1D& m : c.modes) {
    const double kk = static_cast<double>(m.k);
    v -= m.amplitude * kk * kk * std::cos(kk * x + m.phase);
  }
  return v;
}

NoiseBasis build_constant_basis(int dimension, double nu) {
  if (dimension < 1 || dimension > 3)
    throw ConfigError("noise: dimension must be 1, 2 or 3");
  if (nu < 0.0) throw ConfigError("noise: nu must be nonnegative");
  const double amp = std::sqrt(2.0 * nu);
  std::vector<Correlate> cors;
  for (int k = 0; k < dimension; ++k) {
    Correlate c;
    c.kind = CorrelateKind::Constant;
    c.constant[static_cast<std::size_t>(k)] = amp;
    cors.push_back(c);
  }
  NoiseBasis basis(dimension, std::move(cors), true);
  basis.set_kappa(nu);
  return basis;
}

NoiseBasis build_fourier_divfree_basis(
    const std::vector<FourierModeSpec>& modes) {
  if (modes.empty()) throw ConfigError("noise.modes: empty mode list");
  std::vector<Correlate> cors;
  for (const auto& m : modes) {
    if (m.kx == 0 && m.ky == 0)
      throw ConfigError("noise.modes: zero wavevector");
    Correlate c;
    c.kind = CorrelateKind::Fourier2D;
    c.wavevector = {m.kx, m.ky};
    c.amplitude = m.amplitude;
    c.phase = m.phase;
    cors.push_back(c);
  }
  NoiseBasis basis(2, std::move(cors), true);
  basis.set_kappa(estimate_ellipticity(basis, 64));
  return basis;
}

NoiseBasis build_fourier_basis_1d(const std::vector<FourierModeSpec>& modes) {
  if (modes.empty()) throw ConfigError("noise.modes: empty mode list");
  std::vector<Correlate> cors;
  for (const auto& m : modes) {
    if (m.ky != 0)
      throw ConfigError("noise.modes: ky must be 0 for a 1D model");
    if (m.kx == 0) throw ConfigError("noise.modes: zero wavevector");
    Correlate c;
    c.kind = CorrelateKind::Fourier1D;
    c.modes.push_back({m.kx, m.amplitude, m.phase});
    cors.push_back(c);
  }
  NoiseBasis basis(1, std::move(cors), false);
  basis.set_kappa(estimate_ellipticity(basis, 64));
  return basis;
}

double estimate_ellipticity(const NoiseBasis& basis, std::size_t grid) {
  const int d = basis.dimension();
  const double h = kTwoPi / static_cast<double>(grid);
  double kappa = std::numeric_limits<double>::infinity();

  if (d == 1) {
    for (std::size_t i = 0; i < grid; ++i) {
      const double x = h * static_cast<double>(i);
      double a = 0.0;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double v = basis.eval1(k, x);
        a += 0.5 * v * v;
      }
      kappa = std::min(kappa, a);
    }
  } else if (d == 2) {
    for (std::size_t i = 0; i < grid; ++i) {
      for (std::size_t j = 0; j < grid; ++j) {
        const double x = h * static_cast<double>(i);
        const double y = h * static_cast<double>(j);
        double a = 0.0, b = 0.0, c = 0.0;
        for (std::size_t k = 0; k < basis.size(); ++k) {
          const auto v = basis.eval2(k, x, y);
          a += 0.5 * v[0] * v[0];
          b += 0.5 * v[0] * v[1];
          c += 0.5 * v[1] * v[1];
        }
        kappa = std::min(kappa, smallest_eig_2x2(a, b, c));
      }
    }
  } else {
    // 3D bases are constant-correlate only; the matrix is position
    // independent but we keep the sweep for uniformity.
    std::array<std::array<double, 3>, 3> m{};
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const auto v = basis.constant3(k);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += 0.5 * v[i] * v[j];
    }
    kappa = smallest_eig_3x3(m);
  }
  return std::max(kappa, 0.0);
}

double max_divergence_2d(const NoiseBasis& basis, std::size_t k,
                         std::size_t grid) {
  Grid2D g(grid, kTwoPi);
  std::vector<double> fx(g.npoints()), fy(g.npoints());
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const auto v = basis.eval2(k, g.dx() * static_cast<double>(i),
                                 g.dx() * static_cast<double>(j));
      fx[i * grid + j] = v[0];
      fy[i * grid + j] = v[1];
    }
  }
  auto fxh = g.to_hat(fx);
  auto fyh = g.to_hat(fy);
  std::vector<std::complex<double>> div(g.ncoeff());
  g.ddx_hat(fxh, div);
  std::vector<std::complex<double>> dy(g.ncoeff());
  g.ddy_hat(fyh, dy);
  for (std::size_t i = 0; i < div.size(); ++i) div[i] += dy[i];
  auto phys = g.to_phys(div);
  double m = 0.0;
  for (double v : phys) m = std::max(m, std::abs(v));
  return m;
}

WienerBatch sample_wiener_batch(std::uint64_t seed, std::size_t step_index,
                                std::size_t member_count,
                                std::size_t correlate_count, double dt) {
  if (dt < 0.0) throw ConfigError("wiener: dt must be nonnegative");
  if (member_count < 1 || correlate_count < 1)
    throw ConfigError("wiener: counts must be >= 1");
  WienerBatch batch;
  batch.dt = dt;
  batch.step_index = step_index;
  batch.member_count = member_count;
  batch.correlate_count = correlate_count;
  batch.increments.resize(member_count * correlate_count);
  const double scale = std::sqrt(dt);
  for (std::size_t m = 0; m < member_count; ++m) {
    for (std::size_t k = 0; k < correlate_count; ++k) {
      batch.increments[m * correlate_count + k] =
          scale * rng::normal(seed, static_cast<std::uint32_t>(m),
                              static_cast<std::uint32_t>(step_index),
                              static_cast<std::uint32_t>(k));
    }
  }
  return batch;
}

}  // namespace lasalt::noise
