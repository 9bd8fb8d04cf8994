#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Fixed-order pairwise tree reductions. The summation order depends only on
// the element count, never on thread scheduling, so reductions are
// bit-reproducible for a given input.

namespace lasalt {

/// Pairwise sum of f(i) for i in [lo, hi).
template <class F>
double pairwise_sum(std::size_t lo, std::size_t hi, F&& f) {
  const std::size_t n = hi - lo;
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f);
}

template <class F>
double pairwise_sum(std::size_t n, F&& f) {
  return pairwise_sum(std::size_t{0}, n, std::forward<F>(f));
}

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

namespace detail {

template <class Get>
void pairwise_vec_sum(std::size_t lo, std::size_t hi, Get& get,
                      std::span<double> out,
                      std::vector<std::vector<double>>& scratch,
                      std::size_t depth) {
  const std::size_t n = hi - lo;
  if (n == 1) {
    auto row = get(lo);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = row[j];
    return;
  }
  const std::size_t mid = lo + n / 2;
  if (scratch.size() <= depth) scratch.resize(depth + 1);
  scratch[depth].resize(out.size());
  std::span<double> tmp(scratch[depth]);
  pairwise_vec_sum(lo, mid, get, out, scratch, depth + 1);
  pairwise_vec_sum(mid, hi, get, tmp, scratch, depth + 1);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += tmp[j];
}

}  // namespace detail

/// Componentwise pairwise sum of rows get(i) (each a span of equal length)
/// for i in [0, n), written into out.
template <class Get>
void pairwise_vector_sum(std::size_t n, Get get, std::span<double> out) {
  std::vector<std::vector<double>> scratch;
  detail::pairwise_vec_sum(0, n, get, out, scratch, 0);
}

/// Componentwise pairwise mean.
template <class Get>
void pairwise_vector_mean(std::size_t n, Get get, std::span<double> out) {
  pairwise_vector_sum(n, get, out);
  const double inv = 1.0 / static_cast<double>(n);
  for (double& x : out) x *= inv;
}

}  // namespace lasalt
