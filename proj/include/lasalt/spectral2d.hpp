#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Real scalar fields on the periodic square [0,L)^2, n x n collocation
// points, physical storage row-major [ix*n + iy]. Coefficients are
// Fourier-series coefficients in FFTW r2c layout: rows carry the signed kx
// index, columns ky = 0..n/2. The 2/3-rule mask zeroes |kx| > n/3 or
// ky > n/3.

namespace lasalt {

class Grid2D {
 public:
  Grid2D(std::size_t n, double length);
  ~Grid2D();
  Grid2D(const Grid2D&) = delete;
  Grid2D& operator=(const Grid2D&) = delete;

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  std::size_t npoints() const { return n_ * n_; }
  std::size_t nky() const { return n_ / 2 + 1; }
  std::size_t ncoeff() const { return n_ * nky(); }
  std::size_t kmax_dealiased() const { return n_ / 3; }

  /// Signed kx index for coefficient row r.
  long kx_index(std::size_t r) const {
    return r <= n_ / 2 ? static_cast<long>(r)
                       : static_cast<long>(r) - static_cast<long>(n_);
  }
  double kx(std::size_t r) const;
  double ky(std::size_t c) const;

  void forward(std::span<const double> phys,
               std::span<std::complex<double>> hat) const;
  void inverse(std::span<const std::complex<double>> hat,
               std::span<double> phys) const;
  std::vector<std::complex<double>> to_hat(std::span<const double> phys) const;
  std::vector<double> to_phys(std::span<const std::complex<double>> hat) const;

  void dealias(std::span<std::complex<double>> hat) const;
  void zero_mean(std::span<std::complex<double>> hat) const { hat[0] = 0.0; }

  void ddx_hat(std::span<const std::complex<double>> hat,
               std::span<std::complex<double>> out) const;
  void ddy_hat(std::span<const std::complex<double>> hat,
               std::span<std::complex<double>> out) const;
  /// psi with Laplacian(psi) = f and zero mean: psi_hat = -f_hat/|k|^2.
  void invert_laplacian_hat(std::span<const std::complex<double>> hat,
                            std::span<std::complex<double>> out) const;

  double integral(std::span<const double> phys) const;
  /// Integral of f*g over the square, Parseval on coefficients.
  double inner_hat(std::span<const std::complex<double>> f,
                   std::span<const std::complex<double>> g) const;
  double norm2_hat(std::span<const std::complex<double>> f) const {
    return inner_hat(f, f);
  }

 private:
  std::size_t n_;
  double length_;
  void* plan_r2c_;
  void* plan_c2r_;
};

}  // namespace lasalt
