#pragma once

// The six per-pixel physical features (spectral curvature, NDVI, NDVI gradient,
// EMP, DMP, LBP), z-score standardization, and the feature-based prior map.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "unmix/mathutil.hpp"
#include "unmix/types.hpp"

namespace unmix {

struct FeatureOptions {
  std::optional<int> red_band;            // unset: resolved from wavelengths or band fractions
  std::optional<int> nir_band;
  std::vector<int> emp_scales = {1, 2, 3};
};

/// Per-pixel mean reflectance over bands; grayscale base for EMP/DMP/LBP.
inline MapF64 base_image(const Cube& cube) {
  MapF64 out = MapF64::filled(cube.rows, cube.cols, 0.0);
  const double inv = 1.0 / cube.bands;
  for (int b = 0; b < cube.bands; ++b)
    for (int r = 0; r < cube.rows; ++r)
      for (int c = 0; c < cube.cols; ++c) out.at(r, c) += cube.at(b, r, c) * inv;
  return out;
}

/// Mean over interior bands of |y[b-1] - 2 y[b] + y[b+1]|.
inline MapF64 spectral_curvature(const Cube& cube) {
  if (cube.bands < 3) throw std::invalid_argument("spectral_curvature requires bands >= 3");
  MapF64 out = MapF64::filled(cube.rows, cube.cols, 0.0);
  const double inv = 1.0 / (cube.bands - 2);
  for (int r = 0; r < cube.rows; ++r)
    for (int c = 0; c < cube.cols; ++c) {
      double acc = 0.0;
      for (int b = 1; b + 1 < cube.bands; ++b)
        acc += std::abs(cube.at(b - 1, r, c) - 2.0 * cube.at(b, r, c) + cube.at(b + 1, r, c));
      out.at(r, c) = acc * inv;
    }
  return out;
}

/// Resolve the (red, nir) band pair: explicit indices win; otherwise nearest to
/// 660/800 nm when wavelengths exist, else fixed band fractions 1/3 and 2/3.
inline std::pair<int, int> resolve_ndvi_bands(const Cube& cube, const FeatureOptions& opt = {}) {
  auto nearest = [&](double nm) {
    int best = 0;
    for (int b = 1; b < cube.bands; ++b)
      if (std::abs(cube.wavelengths[b] - nm) < std::abs(cube.wavelengths[best] - nm)) best = b;
    return best;
  };
  int red, nir;
  if (opt.red_band && opt.nir_band) {
    red = *opt.red_band;
    nir = *opt.nir_band;
  } else if (!cube.wavelengths.empty()) {
    red = opt.red_band.value_or(nearest(660.0));
    nir = opt.nir_band.value_or(nearest(800.0));
  } else {
    red = opt.red_band.value_or(cube.bands / 3);
    nir = opt.nir_band.value_or(2 * cube.bands / 3);
  }
  if (red < 0 || red >= cube.bands || nir < 0 || nir >= cube.bands)
    throw std::invalid_argument("NDVI band index out of range");
  if (red == nir) throw std::invalid_argument("NDVI red and nir bands must differ");
  return {red, nir};
}

/// (NIR - RED) / (NIR + RED); a denominator below 1e-12 yields 0.
inline MapF64 ndvi(const Cube& cube, int red_band, int nir_band) {
  if (red_band < 0 || red_band >= cube.bands || nir_band < 0 || nir_band >= cube.bands)
    throw std::invalid_argument("NDVI band index out of range");
  if (red_band == nir_band) throw std::invalid_argument("NDVI red and nir bands must differ");
  MapF64 out = MapF64::filled(cube.rows, cube.cols, 0.0);
  for (int r = 0; r < cube.rows; ++r)
    for (int c = 0; c < cube.cols; ++c) {
      double nirv = cube.at(nir_band, r, c), redv = cube.at(red_band, r, c);
      double den = nirv + redv;
      out.at(r, c) = (den < 1e-12) ? 0.0 : (nirv - redv) / den;
    }
  return out;
}

/// Gradient magnitude of a map: central differences inside, one-sided at borders.
/// A dimension of extent 1 contributes zero gradient.
inline MapF64 ndvi_gradient(const MapF64& map) {
  if (map.rows * map.cols <= 1) throw std::invalid_argument("gradient undefined on a 1x1 map");
  MapF64 out = MapF64::filled(map.rows, map.cols, 0.0);
  for (int r = 0; r < map.rows; ++r)
    for (int c = 0; c < map.cols; ++c) {
      double gx = 0.0, gy = 0.0;
      if (map.cols > 1) {
        if (c == 0)
          gx = map.at(r, 1) - map.at(r, 0);
        else if (c == map.cols - 1)
          gx = map.at(r, c) - map.at(r, c - 1);
        else
          gx = (map.at(r, c + 1) - map.at(r, c - 1)) / 2.0;
      }
      if (map.rows > 1) {
        if (r == 0)
          gy = map.at(1, c) - map.at(0, c);
        else if (r == map.rows - 1)
          gy = map.at(r, c) - map.at(r - 1, c);
        else
          gy = (map.at(r + 1, c) - map.at(r - 1, c)) / 2.0;
      }
      out.at(r, c) = std::sqrt(gx * gx + gy * gy);
    }
  return out;
}

namespace morph {

// Flat grayscale erosion/dilation with a (2r+1)^2 square window, replicate border.
inline MapF64 erode(const MapF64& m, int radius) {
  MapF64 out = MapF64::filled(m.rows, m.cols, 0.0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      double v = m.at(r, c);
      for (int dr = -radius; dr <= radius; ++dr)
        for (int dc = -radius; dc <= radius; ++dc) {
          int rr = std::clamp(r + dr, 0, m.rows - 1);
          int cc = std::clamp(c + dc, 0, m.cols - 1);
          v = std::min(v, m.at(rr, cc));
        }
      out.at(r, c) = v;
    }
  return out;
}

inline MapF64 dilate(const MapF64& m, int radius) {
  MapF64 out = MapF64::filled(m.rows, m.cols, 0.0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      double v = m.at(r, c);
      for (int dr = -radius; dr <= radius; ++dr)
        for (int dc = -radius; dc <= radius; ++dc) {
          int rr = std::clamp(r + dr, 0, m.rows - 1);
          int cc = std::clamp(c + dc, 0, m.cols - 1);
          v = std::max(v, m.at(rr, cc));
        }
      out.at(r, c) = v;
    }
  return out;
}

inline MapF64 opening(const MapF64& m, int radius) { return dilate(erode(m, radius), radius); }
inline MapF64 closing(const MapF64& m, int radius) { return erode(dilate(m, radius), radius); }

}  // namespace morph

namespace detail {

// Morphological profile levels: openings at each scale, the base, closings at each scale.
inline std::vector<MapF64> morphological_profile(const MapF64& base, const std::vector<int>& scales) {
  if (scales.empty()) throw std::invalid_argument("morphological profile needs at least one scale");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1) throw std::invalid_argument("morphology radii must be positive");
    if (i > 0 && scales[i] <= scales[i - 1])
      throw std::invalid_argument("morphology radii must be increasing");
  }
  std::vector<MapF64> profile;
  for (int s : scales) profile.push_back(morph::opening(base, s));
  profile.push_back(base);
  for (int s : scales) profile.push_back(morph::closing(base, s));
  return profile;
}

}  // namespace detail

/// Extended morphological profile scalarized as the per-pixel population standard
/// deviation across the profile vector.
inline MapF64 emp_feature(const MapF64& base, const std::vector<int>& scales = {1, 2, 3}) {
  auto profile = detail::morphological_profile(base, scales);
  const double L = static_cast<double>(profile.size());
  MapF64 out = MapF64::filled(base.rows, base.cols, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double mean = 0.0;
    for (auto& p : profile) mean += p.values[i];
    mean /= L;
    double var = 0.0;
    for (auto& p : profile) {
      double d = p.values[i] - mean;
      var += d * d;
    }
    out.values[i] = std::sqrt(var / L);
  }
  return out;
}

/// Differential morphological profile: max over |successive profile differences|.
inline MapF64 dmp_feature(const MapF64& base, const std::vector<int>& scales = {1, 2, 3}) {
  auto profile = detail::morphological_profile(base, scales);
  if (profile.size() < 2) throw std::invalid_argument("DMP needs at least two profile levels");
  MapF64 out = MapF64::filled(base.rows, base.cols, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double best = 0.0;
    for (std::size_t l = 1; l < profile.size(); ++l)
      best = std::max(best, std::abs(profile[l].values[i] - profile[l - 1].values[i]));
    out.values[i] = best;
  }
  return out;
}

/// 8-neighbor local binary pattern (neighbor >= center -> 1, clockwise from the
/// top-left), scalarized as circular 0<->1 transition count / 8. Border pixels
/// replicate the nearest interior value.
inline MapF64 lbp_feature(const MapF64& base) {
  if (base.rows < 3 || base.cols < 3) throw std::invalid_argument("LBP requires at least a 3x3 map");
  static constexpr int offs[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, 1},
                                     {1, 1},   {1, 0},  {1, -1}, {0, -1}};
  MapF64 out = MapF64::filled(base.rows, base.cols, 0.0);
  for (int r = 1; r + 1 < base.rows; ++r)
    for (int c = 1; c + 1 < base.cols; ++c) {
      int bits[8];
      for (int k = 0; k < 8; ++k)
        bits[k] = base.at(r + offs[k][0], c + offs[k][1]) >= base.at(r, c) ? 1 : 0;
      int transitions = 0;
      for (int k = 0; k < 8; ++k) transitions += bits[k] != bits[(k + 1) % 8];
      out.at(r, c) = transitions / 8.0;
    }
  for (int r = 0; r < base.rows; ++r)
    for (int c = 0; c < base.cols; ++c) {
      int rr = std::clamp(r, 1, base.rows - 2);
      int cc = std::clamp(c, 1, base.cols - 2);
      out.at(r, c) = out.at(rr, cc);
    }
  return out;
}

/// All six raw (unstandardized) feature planes in the fixed order
/// [curvature, ndvi, ndvi_gradient, emp, dmp, lbp].
inline FeatureMatrix compute_features(const Cube& cube, const FeatureOptions& opt = {}) {
  auto [red, nir] = resolve_ndvi_bands(cube, opt);
  MapF64 nd = ndvi(cube, red, nir);
  MapF64 base = base_image(cube);

  FeatureMatrix f;
  f.rows = cube.rows;
  f.cols = cube.cols;
  f.values.resize(static_cast<std::size_t>(FeatureMatrix::K) * f.pixel_count());
  MapF64 planes[FeatureMatrix::K] = {spectral_curvature(cube), nd,
                                     ndvi_gradient(nd),        emp_feature(base, opt.emp_scales),
                                     dmp_feature(base, opt.emp_scales), lbp_feature(base)};
  for (int k = 0; k < FeatureMatrix::K; ++k)
    std::copy(planes[k].values.begin(), planes[k].values.end(), f.plane(k));
  return f;
}

/// Per-plane z-score over all pixels (population std). A constant plane becomes
/// all zeros with std recorded as 0. Idempotent within fp tolerance.
inline FeatureMatrix standardize(const FeatureMatrix& raw) {
  FeatureMatrix out = raw;
  const std::size_t n = raw.pixel_count();
  for (int k = 0; k < FeatureMatrix::K; ++k) {
    const double* p = raw.plane(k);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += p[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = p[i] - mean;
      var += d * d;
    }
    double sd = std::sqrt(var / static_cast<double>(n));
    out.plane_mean[k] = mean;
    // relative threshold: identical values can leave ~1e-17 of rounding variance
    if (sd <= 1e-12 * (1.0 + std::abs(mean))) {
      out.plane_std[k] = 0.0;
      std::fill(out.plane(k), out.plane(k) + n, 0.0);
    } else {
      out.plane_std[k] = sd;
      double* q = out.plane(k);
      for (std::size_t i = 0; i < n; ++i) q[i] = (p[i] - mean) / sd;
    }
  }
  out.standardized = true;
  return out;
}

/// Feature-based regime prior: each raw plane is normalized by its median-anchored
/// positive part, norm = clamp((v - median)/(max - median), 0, 1) (constant plane
/// -> 0.5 everywhere), and the prior is the equal-weight mean of the six
/// normalized planes. High prior marks pixels whose features exceed the
/// scene-typical level.
inline MapF64 compute_prior(const FeatureMatrix& raw) {
  const std::size_t n = raw.pixel_count();
  MapF64 prior = MapF64::filled(raw.rows, raw.cols, 0.0);
  std::vector<double> sorted(n);
  for (int k = 0; k < FeatureMatrix::K; ++k) {
    const double* p = raw.plane(k);
    sorted.assign(p, p + n);
    std::sort(sorted.begin(), sorted.end());
    double median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double hi = sorted.back();
    for (std::size_t i = 0; i < n; ++i) {
      double norm = (hi > median) ? std::clamp((p[i] - median) / (hi - median), 0.0, 1.0) : 0.5;
      prior.values[i] += norm / FeatureMatrix::K;
    }
  }
  return prior;
}

}  // namespace unmix
