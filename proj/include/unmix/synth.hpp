#pragma once

// Deterministic synthetic scenes with a known per-pixel mixing regime:
// smooth random endmembers, iid uniform-simplex abundances, and a choice of
// nonlinear mechanism (bilinear / ppnm / hapke) applied on a regime layout.

#include <cmath>
#include <string>
#include <vector>

#include "unmix/metricsfwd.hpp"
#include "unmix/models.hpp"
#include "unmix/rng.hpp"
#include "unmix/types.hpp"

namespace unmix {

enum class RegimeLayout { half_split, blocks, all_linear, all_nonlinear };
enum class Mechanism { bilinear, ppnm, hapke };

inline const char* to_string(RegimeLayout l) {
  switch (l) {
    case RegimeLayout::half_split: return "half-split";
    case RegimeLayout::blocks: return "blocks";
    case RegimeLayout::all_linear: return "all-linear";
    default: return "all-nonlinear";
  }
}
inline const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::bilinear: return "bilinear";
    case Mechanism::ppnm: return "ppnm";
    default: return "hapke";
  }
}

struct SynthSpec {
  int rows = 64;
  int cols = 64;
  int bands = 50;
  int endmembers = 3;
  RegimeLayout layout = RegimeLayout::half_split;
  Mechanism mechanism = Mechanism::bilinear;
  double gamma = 0.9;   // bilinear pair coefficient
  double ppnm_b = 0.3;  // quadratic distortion for the ppnm mechanism
  double sigma = 0.0;   // additive Gaussian noise std, reflectance units
  std::uint64_t seed = 0;

  void validate() const {
    if (rows < 2 || cols < 2 || bands < 2 || endmembers < 2)
      throw config_error("synthetic scene dimensions must be >= 2");
    if (gamma < 0.0 || gamma > 1.0) throw config_error("gamma must lie in [0, 1]");
    if (sigma < 0.0) throw config_error("noise sigma must be >= 0");
  }
};

struct SyntheticScene {
  Cube cube;
  EndmemberSet endmembers;
  AbundanceMap abundances;        // generating abundances
  std::vector<int> regime;        // 0 linear, 1 nonlinear (noiseless mechanism)
  std::vector<int> mechanism;     // 0 linear, 1 bilinear, 2 ppnm, 3 hapke
};

/// Smooth random spectra: base level + gentle slope + 3-5 Gaussian bumps, then
/// mean-matched to a common level of 0.45 and clamped to [0.05, 0.95] so
/// material brightness is abundance-invariant. Spectra are resampled (up to 100
/// tries each) until all pairwise spectral angles are >= 0.15 rad.
inline EndmemberSet generate_endmembers(int bands, int M, std::uint64_t seed) {
  if (bands < 3) throw std::invalid_argument("generate_endmembers: bands >= 3 required");
  if (M < 2) throw std::invalid_argument("generate_endmembers: M >= 2 required");
  Pcg32 rng(seed);
  EndmemberSet out;
  out.bands = bands;
  out.spectra.resize(static_cast<std::size_t>(bands) * M);

  std::vector<std::vector<double>> accepted;
  while (static_cast<int>(accepted.size()) < M) {
    bool found = false;
    for (int attempt = 0; attempt < 100 && !found; ++attempt) {
      std::vector<double> s(bands);
      double base = rng.uniform(0.3, 0.6);
      double slope = rng.uniform(-0.15, 0.15);
      for (int b = 0; b < bands; ++b)
        s[b] = base + slope * (2.0 * b / (bands - 1) - 1.0);
      int bumps = static_cast<int>(rng.uniform_int(3, 5));
      for (int j = 0; j < bumps; ++j) {
        double center = rng.uniform(0.0, bands - 1.0);
        double width = rng.uniform(0.04 * bands, 0.12 * bands);
        double amp = rng.uniform(-0.3, 0.4);
        for (int b = 0; b < bands; ++b) {
          double t = (b - center) / width;
          s[b] += amp * std::exp(-0.5 * t * t);
        }
      }
      double mean = 0.0;
      for (double v : s) mean += v;
      mean /= bands;
      for (double& v : s) v = std::clamp(v - mean + 0.45, 0.05, 0.95);

      bool separated = true;
      for (const auto& e : accepted)
        if (spectral_angle(e.data(), s.data(), bands) < 0.15) {
          separated = false;
          break;
        }
      if (separated) {
        accepted.push_back(std::move(s));
        found = true;
      }
    }
    if (!found)
      throw numeric_error("generate_endmembers: could not reach pairwise SAD >= 0.15 in 100 tries");
  }
  for (int m = 0; m < M; ++m) {
    out.names.push_back("em" + std::to_string(m));
    for (int b = 0; b < bands; ++b) out.at(b, m) = accepted[m][b];
  }
  out.validate();
  return out;
}

namespace detail {

inline bool nonlinear_pixel(const SynthSpec& spec, int r, int c) {
  switch (spec.layout) {
    case RegimeLayout::all_linear: return false;
    case RegimeLayout::all_nonlinear: return true;
    case RegimeLayout::half_split: return c >= spec.cols / 2;
    case RegimeLayout::blocks: {
      int side = std::max(1, std::min(spec.rows, spec.cols) / 4);
      return ((r / side) + (c / side)) % 2 == 1;
    }
  }
  return false;
}

}  // namespace detail

/// Deterministic scene synthesis. Draw order (part of the reproducibility
/// contract): abundances pixel-major first, then noise pixel-major with the
/// band index innermost.
inline SyntheticScene generate_scene(const SynthSpec& spec) {
  spec.validate();
  SyntheticScene scene;
  scene.endmembers = generate_endmembers(spec.bands, spec.endmembers, spec.seed);
  const EndmemberSet& E = scene.endmembers;
  const int M = spec.endmembers;
  const std::size_t n = static_cast<std::size_t>(spec.rows) * spec.cols;

  Pcg32 rng(spec.seed + 1);  // separate stream from the endmember draw
  scene.abundances.rows = spec.rows;
  scene.abundances.cols = spec.cols;
  scene.abundances.endmembers = M;
  scene.abundances.values.resize(n * M);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = rng.simplex(M);
    for (int m = 0; m < M; ++m) scene.abundances.at(m, i) = a[m];
  }

  HapkeGeometry geom;
  std::vector<double> albedo;
  if (spec.mechanism == Mechanism::hapke) albedo = endmember_albedo(E, geom);

  scene.cube.bands = spec.bands;
  scene.cube.rows = spec.rows;
  scene.cube.cols = spec.cols;
  scene.cube.data.resize(scene.cube.size());
  scene.regime.resize(n);
  scene.mechanism.resize(n);

  std::vector<double> a(M), y(spec.bands);
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      std::size_t pixel = static_cast<std::size_t>(r) * spec.cols + c;
      for (int m = 0; m < M; ++m) a[m] = scene.abundances.at(m, pixel);
      y = lmm_reconstruct(a, E);
      bool nl = detail::nonlinear_pixel(spec, r, c);
      scene.regime[pixel] = nl ? 1 : 0;
      scene.mechanism[pixel] = 0;
      if (nl) {
        switch (spec.mechanism) {
          case Mechanism::bilinear: {
            std::vector<double> gammas(GbmParams::pair_count(M), spec.gamma);
            auto d = gbm_residual(a, E, gammas);
            for (int b = 0; b < spec.bands; ++b) y[b] += d[b];
            scene.mechanism[pixel] = 1;
            break;
          }
          case Mechanism::ppnm: {
            for (int b = 0; b < spec.bands; ++b) y[b] += spec.ppnm_b * y[b] * y[b];
            scene.mechanism[pixel] = 2;
            break;
          }
          case Mechanism::hapke: {
            auto d = hapke_residual_from_albedo(a, albedo, y, spec.bands, geom);
            for (int b = 0; b < spec.bands; ++b) y[b] += d[b];
            scene.mechanism[pixel] = 3;
            break;
          }
        }
      }
      for (int b = 0; b < spec.bands; ++b) {
        double v = y[b];
        if (spec.sigma > 0.0) v += spec.sigma * rng.gaussian();
        scene.cube.data[scene.cube.index(b, r, c)] =
            static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  scene.cube.validate();
  return scene;
}

}  // namespace unmix
