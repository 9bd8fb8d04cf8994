#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

// Pseudo-spectral machinery for real periodic fields on [0,L). Coefficients
// are Fourier-series coefficients in half-complex layout (k = 0..n/2):
//   f(x_j) = sum_k c_k exp(i k~ x_j),  k~ = 2*pi*k/L,
// with Hermitian symmetry implied. Nonlinear products are dealiased by the
// 2/3 rule (modes |k| > n/3 zeroed).

namespace lasalt {

class Grid1D {
 public:
  Grid1D(std::size_t n, double length);
  ~Grid1D();
  Grid1D(const Grid1D&) = delete;
  Grid1D& operator=(const Grid1D&) = delete;

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const { return dx() * static_cast<double>(j); }
  std::size_t nk() const { return n_ / 2 + 1; }
  /// Physical wavenumber 2*pi*k/L for coefficient index k.
  double wavenumber(std::size_t k) const;
  /// Largest coefficient index kept by the 2/3 mask.
  std::size_t kmax_dealiased() const { return n_ / 3; }

  /// Forward transform, normalized to Fourier-series coefficients.
  void forward(std::span<const double> phys,
               std::span<std::complex<double>> hat) const;
  /// Inverse transform.
  void inverse(std::span<const std::complex<double>> hat,
               std::span<double> phys) const;

  void dealias(std::span<std::complex<double>> hat) const;
  /// d/dx in coefficient space (Nyquist derivative zeroed).
  void derivative_hat(std::span<const std::complex<double>> hat,
                      std::span<std::complex<double>> out) const;

  /// Spectral d/dx of a physical field.
  std::vector<double> derivative(std::span<const double> phys) const;
  /// Pointwise product of two physical fields, dealiased.
  std::vector<double> product_dealiased(std::span<const double> a,
                                        std::span<const double> b) const;

  std::vector<std::complex<double>> to_hat(std::span<const double> phys) const;
  std::vector<double> to_phys(std::span<const std::complex<double>> hat) const;

  /// L * c_0, exact for band-limited integrands.
  double integral(std::span<const double> phys) const;
  /// Integral of f*g via Parseval on the transformed fields.
  double inner(std::span<const double> f, std::span<const double> g) const;

 private:
  std::size_t n_;
  double length_;
  void* plan_r2c_;
  void* plan_c2r_;
};

}  // namespace lasalt
