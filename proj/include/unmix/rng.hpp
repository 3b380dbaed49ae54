#pragma once

// pcg32: seedable, portable 64-bit-state permuted congruential generator.
// The generator identity is recorded in run manifests; scenes are reproducible
// across platforms and across any conforming pcg32 implementation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace unmix {

class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0x14057b7ef767814fULL) {
    state_ = 0;
    inc_ = (stream << 1) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18) ^ old) >> 27);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Integer in [lo, hi] inclusive.
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(next_double() * static_cast<double>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per draw.
  double gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform point on the (M-1)-simplex via sorted-uniform spacings.
  std::vector<double> simplex(int M) {
    std::vector<double> cuts(M - 1);
    for (double& c : cuts) c = next_double();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out(M);
    double prev = 0.0;
    for (int m = 0; m < M - 1; ++m) {
      out[m] = cuts[m] - prev;
      prev = cuts[m];
    }
    out[M - 1] = 1.0 - prev;
    return out;
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace unmix
