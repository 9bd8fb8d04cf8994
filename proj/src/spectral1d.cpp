#include "lasalt/spectral1d.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace lasalt {

namespace {
// Plan creation is not thread-safe; execution with new arrays is.
std::mutex g_plan_mutex;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

Grid1D::Grid1D(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Grid1D: n must be a power of two >= 4");
  if (!(length > 0.0))
    throw std::invalid_argument("Grid1D: length must be positive");
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  std::vector<double> rbuf(n_);
  std::vector<std::complex<double>> cbuf(nk());
  plan_r2c_ = fftw_plan_dft_r2c_1d(
      static_cast<int>(n_), rbuf.data(),
      reinterpret_cast<fftw_complex*>(cbuf.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_c2r_ = fftw_plan_dft_c2r_1d(
      static_cast<int>(n_), reinterpret_cast<fftw_complex*>(cbuf.data()),
      rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_r2c_ || !plan_c2r_) throw std::runtime_error("fftw plan failed");
}

Grid1D::~Grid1D() {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

double Grid1D::wavenumber(std::size_t k) const {
  return kTwoPi * static_cast<double>(k) / length_;
}

void Grid1D::forward(std::span<const double> phys,
                     std::span<std::complex<double>> hat) const {
  assert(phys.size() == n_ && hat.size() == nk());
  std::vector<double> in(phys.begin(), phys.end());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), in.data(),
                       reinterpret_cast<fftw_complex*>(hat.data()));
  const double inv = 1.0 / static_cast<double>(n_);
  for (auto& c : hat) c *= inv;
}

void Grid1D::inverse(std::span<const std::complex<double>> hat,
                     std::span<double> phys) const {
  assert(hat.size() == nk() && phys.size() == n_);
  std::vector<std::complex<double>> in(hat.begin(), hat.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                       reinterpret_cast<fftw_complex*>(in.data()),
                       phys.data());
}

void Grid1D::dealias(std::span<std::complex<double>> hat) const {
  const std::size_t kc = kmax_dealiased();
  for (std::size_t k = kc + 1; k < hat.size(); ++k) hat[k] = 0.0;
}

void Grid1D::derivative_hat(std::span<const std::complex<double>> hat,
                            std::span<std::complex<double>> out) const {
  for (std::size_t k = 0; k < hat.size(); ++k)
    out[k] = std::complex<double>(0.0, wavenumber(k)) * hat[k];
  out[n_ / 2] = 0.0;  // odd-order derivative has no Nyquist counterpart
}

std::vector<double> Grid1D::derivative(std::span<const double> phys) const {
  std::vector<std::complex<double>> hat(nk());
  forward(phys, hat);
  std::vector<std::complex<double>> dh(nk());
  derivative_hat(hat, dh);
  return to_phys(dh);
}

std::vector<double> Grid1D::product_dealiased(std::span<const double> a,
                                              std::span<const double> b) const {
  std::vector<double> prod(n_);
  for (std::size_t j = 0; j < n_; ++j) prod[j] = a[j] * b[j];
  std::vector<std::complex<double>> hat(nk());
  forward(prod, hat);
  dealias(hat);
  return to_phys(hat);
}

std::vector<std::complex<double>> Grid1D::to_hat(
    std::span<const double> phys) const {
  std::vector<std::complex<double>> hat(nk());
  forward(phys, hat);
  return hat;
}

std::vector<double> Grid1D::to_phys(
    std::span<const std::complex<double>> hat) const {
  std::vector<double> phys(n_);
  inverse(hat, phys);
  return phys;
}

double Grid1D::integral(std::span<const double> phys) const {
  std::vector<std::complex<double>> hat(nk());
  forward(phys, hat);
  return length_ * hat[0].real();
}

double Grid1D::inner(std::span<const double> f,
                     std::span<const double> g) const {
  std::vector<std::complex<double>> fh(nk()), gh(nk());
  forward(f, fh);
  forward(g, gh);
  double s = fh[0].real() * gh[0].real();
  for (std::size_t k = 1; k < nk(); ++k) {
    const double w = (k == n_ / 2) ? 1.0 : 2.0;
    s += w * (fh[k].real() * gh[k].real() + fh[k].imag() * gh[k].imag());
  }
  return length_ * s;
}

}  // namespace lasalt
