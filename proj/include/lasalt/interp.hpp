#pragma once

#include <cmath>
#include <cstddef>
#include <span>

// Periodic Catmull-Rom interpolation (cubic convolution, a = -1/2) in one and
// two dimensions. Third-order accurate for smooth periodic data.

namespace lasalt {

inline double catmull_rom(double fm1, double f0, double f1, double f2,
                          double t) {
  const double c1 = 0.5 * (f1 - fm1);
  const double c2 = fm1 - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
  const double c3 = 0.5 * (3.0 * (f0 - f1) + f2 - fm1);
  return f0 + t * (c1 + t * (c2 + t * c3));
}

/// values[j] sampled at x_j = j*L/n on [0,L); x may be any real.
inline double interp_periodic(std::span<const double> values, double L,
                              double x) {
  const std::size_t n = values.size();
  const double h = L / static_cast<double>(n);
  double s = x / h;
  double ip = std::floor(s);
  const double t = s - ip;
  const long i = static_cast<long>(ip);
  auto at = [&](long j) {
    long m = (j % static_cast<long>(n) + static_cast<long>(n)) %
             static_cast<long>(n);
    return values[static_cast<std::size_t>(m)];
  };
  return catmull_rom(at(i - 1), at(i), at(i + 1), at(i + 2), t);
}

/// values row-major [ix*ny + iy] sampled at (ix*L/nx, iy*L/ny) on [0,L)^2.
inline double interp_periodic2(std::span<const double> values, std::size_t nx,
                               std::size_t ny, double L, double x, double y) {
  const double hx = L / static_cast<double>(nx);
  const double hy = L / static_cast<double>(ny);
  const double sx = x / hx, sy = y / hy;
  const double ipx = std::floor(sx), ipy = std::floor(sy);
  const double tx = sx - ipx, ty = sy - ipy;
  const long ix = static_cast<long>(ipx), iy = static_cast<long>(ipy);
  auto wrap = [](long j, std::size_t n) {
    return static_cast<std::size_t>((j % static_cast<long>(n) +
                                     static_cast<long>(n)) %
                                    static_cast<long>(n));
  };
  double rows[4];
  for (int r = -1; r <= 2; ++r) {
    const std::size_t jx = wrap(ix + r, nx);
    auto at = [&](long j) { return values[jx * ny + wrap(j, ny)]; };
    rows[r + 1] = catmull_rom(at(iy - 1), at(iy), at(iy + 1), at(iy + 2), ty);
  }
  return catmull_rom(rows[0], rows[1], rows[2], rows[3], tx);
}

}  // namespace lasalt
