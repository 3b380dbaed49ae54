#pragma once

#include <algorithm>
#include <cmath>

#include "unmix/mathutil.hpp"

namespace unmix {

/// Spectral angle in radians between two band vectors; the cosine argument is
/// clamped to [-1, 1]. Returns -1.0 when either vector has zero norm (callers
/// mask such pixels).
inline double spectral_angle(const double* a, const double* b, int n) {
  double na = norm2(a, n), nb = norm2(b, n);
  if (na == 0.0 || nb == 0.0) return -1.0;
  double cosv = std::clamp(dot(a, b, n) / (na * nb), -1.0, 1.0);
  return std::acos(cosv);
}

}  // namespace unmix
