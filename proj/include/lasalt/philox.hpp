#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Counter-based random number generation (Philox4x32-10, Salmon et al. 2011).
// Every draw is a pure function of (key, counter), so streams keyed by
// (seed, member, step, correlate) are reproducible under any execution order.

namespace lasalt::rng {

namespace detail {

inline constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace detail

using Counter4 = std::array<std::uint32_t, 4>;
using Key2 = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
inline Counter4 philox4x32(Counter4 ctr, Key2 key) {
  using namespace detail;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW32A;
      key[1] += kPhiloxW32B;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Uniform in (0,1], built from 53 random bits. Never returns 0, so it is
/// safe inside log().
inline double u01_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1p-53;
}

/// Standard normal draw keyed by (seed, member, step, correlate).
inline double normal(std::uint64_t seed, std::uint32_t member,
                     std::uint32_t step, std::uint32_t correlate) {
  const Key2 key = {static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  const Counter4 out = philox4x32({member, step, correlate, 0u}, key);
  const double u1 = u01_open(out[0], out[1]);
  const double u2 = u01_open(out[2], out[3]);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Uniform in [0,1) keyed the same way; lane selects independent values
/// under one (member, step, correlate) triple.
inline double uniform(std::uint64_t seed, std::uint32_t member,
                      std::uint32_t step, std::uint32_t correlate,
                      std::uint32_t lane = 1u) {
  const Key2 key = {static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  const Counter4 out = philox4x32({member, step, correlate, lane}, key);
  return u01_open(out[0], out[1]) - 0x1p-53;
}

}  // namespace lasalt::rng
