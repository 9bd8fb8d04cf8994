#include "lasalt/spectral2d.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace lasalt {

namespace {
std::mutex g_plan_mutex;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

Grid2D::Grid2D(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Grid2D: n must be a power of two >= 8");
  if (!(length > 0.0))
    throw std::invalid_argument("Grid2D: length must be positive");
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  std::vector<double> rbuf(npoints());
  std::vector<std::complex<double>> cbuf(ncoeff());
  plan_r2c_ = fftw_plan_dft_r2c_2d(
      static_cast<int>(n_), static_cast<int>(n_), rbuf.data(),
      reinterpret_cast<fftw_complex*>(cbuf.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_c2r_ = fftw_plan_dft_c2r_2d(
      static_cast<int>(n_), static_cast<int>(n_),
      reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_r2c_ || !plan_c2r_) throw std::runtime_error("fftw plan failed");
}

Grid2D::~Grid2D() {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

double Grid2D::kx(std::size_t r) const {
  return kTwoPi * static_cast<double>(kx_index(r)) / length_;
}

double Grid2D::ky(std::size_t c) const {
  return kTwoPi * static_cast<double>(c) / length_;
}

void Grid2D::forward(std::span<const double> phys,
                     std::span<std::complex<double>> hat) const {
  assert(phys.size() == npoints() && hat.size() == ncoeff());
  std::vector<double> in(phys.begin(), phys.end());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), in.data(),
                       reinterpret_cast<fftw_complex*>(hat.data()));
  const double inv = 1.0 / static_cast<double>(npoints());
  for (auto& c : hat) c *= inv;
}

void Grid2D::inverse(std::span<const std::complex<double>> hat,
                     std::span<double> phys) const {
  assert(hat.size() == ncoeff() && phys.size() == npoints());
  std::vector<std::complex<double>> in(hat.begin(), hat.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                       reinterpret_cast<fftw_complex*>(in.data()),
                       phys.data());
}

std::vector<std::complex<double>> Grid2D::to_hat(
    std::span<const double> phys) const {
  std::vector<std::complex<double>> hat(ncoeff());
  forward(phys, hat);
  return hat;
}

std::vector<double> Grid2D::to_phys(
    std::span<const std::complex<double>> hat) const {
  std::vector<double> phys(npoints());
  inverse(hat, phys);
  return phys;
}

void Grid2D::dealias(std::span<std::complex<double>> hat) const {
  const long kc = static_cast<long>(kmax_dealiased());
  for (std::size_t r = 0; r < n_; ++r) {
    const bool cut_row = std::labs(kx_index(r)) > kc;
    for (std::size_t c = 0; c < nky(); ++c) {
      if (cut_row || static_cast<long>(c) > kc) hat[r * nky() + c] = 0.0;
    }
  }
}

void Grid2D::ddx_hat(std::span<const std::complex<double>> hat,
                     std::span<std::complex<double>> out) const {
  for (std::size_t r = 0; r < n_; ++r) {
    const std::complex<double> ik(0.0, r == n_ / 2 ? 0.0 : kx(r));
    for (std::size_t c = 0; c < nky(); ++c)
      out[r * nky() + c] = ik * hat[r * nky() + c];
  }
}

void Grid2D::ddy_hat(std::span<const std::complex<double>> hat,
                     std::span<std::complex<double>> out) const {
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < nky(); ++c) {
      const std::complex<double> ik(0.0, c == n_ / 2 ? 0.0 : ky(c));
      out[r * nky() + c] = ik * hat[r * nky() + c];
    }
  }
}

void Grid2D::invert_laplacian_hat(std::span<const std::complex<double>> hat,
                                  std::span<std::complex<double>> out) const {
  for (std::size_t r = 0; r < n_; ++r) {
    const double kxv = kx(r);
    for (std::size_t c = 0; c < nky(); ++c) {
      const double k2 = kxv * kxv + ky(c) * ky(c);
      out[r * nky() + c] = (k2 == 0.0) ? 0.0 : -hat[r * nky() + c] / k2;
    }
  }
}

double Grid2D::integral(std::span<const double> phys) const {
  std::vector<std::complex<double>> hat(ncoeff());
  forward(phys, hat);
  return length_ * length_ * hat[0].real();
}

double Grid2D::inner_hat(std::span<const std::complex<double>> f,
                         std::span<const std::complex<double>> g) const {
  double s = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < nky(); ++c) {
      const double w = (c == 0 || c == n_ / 2) ? 1.0 : 2.0;
      const auto& a = f[r * nky() + c];
      const auto& b = g[r * nky() + c];
      s += w * (a.real() * b.real() + a.imag() * b.imag());
    }
  }
  return length_ * length_ * s;
}

}  // namespace lasalt
