#pragma once

// Scene- and pixel-level evaluation: spectral angle distance, RMSE, relative
// RMSE, and the physical coherence rho = corr(xi, delta_res).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "unmix/mathutil.hpp"
#include "unmix/metricsfwd.hpp"
#include "unmix/types.hpp"

namespace unmix {

struct SceneMetrics {
  double sad = 0.0;        // radians, scene mean
  double rmse = 0.0;       // reflectance units
  double rrmse = 0.0;      // unitless
  double rho = std::numeric_limits<double>::quiet_NaN();  // set for the gated model only
  std::size_t masked_pixels = 0;  // zero-norm pixels excluded from sad/rrmse
};

/// SAD between two single spectra.
inline double sad(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("sad: length mismatch");
  double v = spectral_angle(y.data(), yhat.data(), static_cast<int>(y.size()));
  if (v < 0.0) throw std::invalid_argument("sad: zero-norm spectrum");
  return v;
}

namespace detail {

template <typename PixelFn>
inline void for_each_pixel_spectrum(const Cube& a, const Cube& b, PixelFn&& fn) {
  if (a.bands != b.bands || a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("metric: cube dimension mismatch");
  std::vector<double> ya, yb;
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) {
      a.spectrum(r, c, ya);
      b.spectrum(r, c, yb);
      fn(ya, yb);
    }
}

}  // namespace detail

/// Scene-mean SAD; zero-norm pixels are masked out and counted.
inline std::pair<double, std::size_t> sad_scene(const Cube& cube, const Cube& reconstruction) {
  double acc = 0.0;
  std::size_t used = 0, masked = 0;
  detail::for_each_pixel_spectrum(cube, reconstruction, [&](const auto& y, const auto& yh) {
    double v = spectral_angle(y.data(), yh.data(), static_cast<int>(y.size()));
    if (v < 0.0) {
      ++masked;
    } else {
      acc += v;
      ++used;
    }
  });
  if (used == 0) throw std::invalid_argument("sad_scene: all pixels masked");
  return {acc / static_cast<double>(used), masked};
}

/// Root mean square error over all pixels and bands.
inline double rmse(const Cube& cube, const Cube& reconstruction) {
  if (cube.bands != reconstruction.bands || cube.rows != reconstruction.rows ||
      cube.cols != reconstruction.cols)
    throw std::invalid_argument("rmse: cube dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < cube.data.size(); ++i) {
    double d = static_cast<double>(cube.data[i]) - static_cast<double>(reconstruction.data[i]);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(cube.data.size()));
}

/// Relative RMSE: scene mean of per-pixel ||y - yhat|| / ||y||; zero-norm
/// pixels are masked out and counted.
inline std::pair<double, std::size_t> rrmse(const Cube& cube, const Cube& reconstruction) {
  double acc = 0.0;
  std::size_t used = 0, masked = 0;
  detail::for_each_pixel_spectrum(cube, reconstruction, [&](const auto& y, const auto& yh) {
    double ny = norm2(y.data(), static_cast<int>(y.size()));
    if (ny == 0.0) {
      ++masked;
      return;
    }
    acc += norm2_diff(y.data(), yh.data(), static_cast<int>(y.size())) / ny;
    ++used;
  });
  if (used == 0) throw std::invalid_argument("rrmse: all pixels have zero norm");
  return {acc / static_cast<double>(used), masked};
}

/// Pearson correlation between the regime map and the reconstruction-gain map.
inline double coherence_rho(const MapF64& xi_map, const MapF64& dres_map) {
  if (xi_map.rows != dres_map.rows || xi_map.cols != dres_map.cols)
    throw std::invalid_argument("coherence_rho: map dimension mismatch");
  const std::size_t n = xi_map.size();
  auto constant = [n](const MapF64& m) {
    for (std::size_t i = 1; i < n; ++i)
      if (m.values[i] != m.values[0]) return false;
    return true;
  };
  if (constant(xi_map) || constant(dres_map))
    throw std::invalid_argument("coherence_rho: correlation undefined for a constant map");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xi_map.values[i];
    my += dres_map.values[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xi_map.values[i] - mx;
    double dy = dres_map.values[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace unmix
