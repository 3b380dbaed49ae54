#pragma once

// The linear reconstruction and the three nonlinear residual models (GBM,
// PPNM, Hapke), plus the feature-driven attention that combines them.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "unmix/mathutil.hpp"
#include "unmix/types.hpp"

namespace unmix {

/// Viewing geometry for the Hapke model: cosines of incidence and emergence.
struct HapkeGeometry {
  double mu0 = 1.0;
  double mu = 1.0;

  void validate() const {
    if (!(mu0 > 0.0 && mu0 <= 1.0) || !(mu > 0.0 && mu <= 1.0))
      throw std::invalid_argument("Hapke geometry cosines must lie in (0, 1]");
  }
};

/// Global pairwise interaction coefficients gamma_mn, one per endmember pair
/// m < n, stored unconstrained (gamma = sigmoid(raw)).
struct GbmParams {
  int endmembers = 0;
  std::vector<double> raw;  // pair_count entries, pairs ordered (0,1),(0,2),...,(1,2),...

  static int pair_count(int M) { return M * (M - 1) / 2; }

  static GbmParams zeros(int M) {
    GbmParams g;
    g.endmembers = M;
    g.raw.assign(pair_count(M), 0.0);
    return g;
  }

  double gamma(int pair) const { return sigmoid(raw[pair]); }
  std::vector<double> gammas() const {
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = sigmoid(raw[i]);
    return out;
  }
};

/// Attention over the three residual models: logits linear in the standardized
/// features, softmax at temperature tau. Model order is [GBM, PPNM, Hapke].
struct AttentionParams {
  static constexpr int models = 3;
  double u[3][FeatureMatrix::K] = {};
  double c[3] = {};
  double tau = 1.0;

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("attention temperature must be > 0");
  }
};

/// Per-pixel residual bundle.
struct ResidualStack {
  std::vector<double> gbm, ppnm, hapke;
  std::array<double, 3> alpha = {0, 0, 0};
  std::vector<double> combined;
};

/// S_lin = E a.
inline std::vector<double> lmm_reconstruct(const std::vector<double>& a, const EndmemberSet& E) {
  if (static_cast<int>(a.size()) != E.count())
    throw std::invalid_argument("lmm_reconstruct: abundance length != endmember count");
  std::vector<double> s(E.bands, 0.0);
  for (int m = 0; m < E.count(); ++m) {
    const double* col = E.column(m);
    for (int b = 0; b < E.bands; ++b) s[b] += a[m] * col[b];
  }
  return s;
}

/// GBM residual: sum over pairs m<n of gamma_mn a_m a_n (e_m o e_n).
inline std::vector<double> gbm_residual(const std::vector<double>& a, const EndmemberSet& E,
                                        const std::vector<double>& gammas) {
  const int M = E.count();
  if (static_cast<int>(gammas.size()) != GbmParams::pair_count(M))
    throw std::invalid_argument("gbm_residual: gamma count mismatch");
  std::vector<double> out(E.bands, 0.0);
  int p = 0;
  for (int m = 0; m < M; ++m)
    for (int n = m + 1; n < M; ++n, ++p) {
      double w = gammas[p] * a[m] * a[n];
      if (w == 0.0) continue;
      const double* em = E.column(m);
      const double* en = E.column(n);
      for (int b = 0; b < E.bands; ++b) out[b] += w * em[b] * en[b];
    }
  return out;
}

inline std::vector<double> gbm_residual(const std::vector<double>& a, const EndmemberSet& E,
                                        const GbmParams& params) {
  return gbm_residual(a, E, params.gammas());
}

/// Closed-form least-squares fit of the PPNM distortion coefficient:
/// b = <y - s, s o s> / <s o s, s o s>, clamped to [-b_max, b_max].
inline double ppnm_fit_b(const std::vector<double>& y, const std::vector<double>& s_lin,
                         double b_max = 5.0) {
  if (y.size() != s_lin.size()) throw std::invalid_argument("ppnm_fit_b: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double s2 = s_lin[i] * s_lin[i];
    num += (y[i] - s_lin[i]) * s2;
    den += s2 * s2;
  }
  if (den < 1e-12) return 0.0;
  return std::clamp(num / den, -b_max, b_max);
}

inline std::vector<double> ppnm_residual(const std::vector<double>& s_lin, double b) {
  std::vector<double> out(s_lin.size());
  for (std::size_t i = 0; i < s_lin.size(); ++i) out[i] = b * s_lin[i] * s_lin[i];
  return out;
}

/// Chandrasekhar H-function, two-stream approximation.
inline double h_function(double mu, double w) {
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("h_function: mu must lie in (0, 1]");
  if (w < 0.0 || w >= 1.0) throw std::invalid_argument("h_function: albedo must lie in [0, 1)");
  return (1.0 + 2.0 * mu) / (1.0 + 2.0 * mu * std::sqrt(1.0 - w));
}

/// Bidirectional reflectance of a surface with single-scattering albedo w
/// (isotropic phase, no opposition surge).
inline double ssa_to_refl(double w, const HapkeGeometry& g = {}) {
  g.validate();
  if (w < 0.0 || w >= 1.0) throw std::invalid_argument("ssa_to_refl: albedo must lie in [0, 1)");
  return (w / 4.0) * (1.0 / (g.mu0 + g.mu)) * h_function(g.mu0, w) * h_function(g.mu, w);
}

/// Inverse of ssa_to_refl by bisection; r is clamped into the attainable range.
inline double refl_to_ssa(double r, const HapkeGeometry& g = {}) {
  g.validate();
  constexpr double w_hi = 1.0 - 1e-9;
  if (r <= 0.0) return 0.0;
  double r_max = ssa_to_refl(w_hi, g);
  if (r >= r_max) return w_hi;
  double lo = 0.0, hi = w_hi;
  while (hi - lo > 1e-15) {
    double mid = 0.5 * (lo + hi);
    if (ssa_to_refl(mid, g) < r)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Per-band single-scattering albedos of all endmembers (column-major, like
/// EndmemberSet). Computed once per scene; the forward model needs no bisection.
inline std::vector<double> endmember_albedo(const EndmemberSet& E, const HapkeGeometry& g = {}) {
  std::vector<double> w(E.spectra.size());
  for (std::size_t i = 0; i < E.spectra.size(); ++i) w[i] = refl_to_ssa(E.spectra[i], g);
  return w;
}

/// Hapke residual via intimate mixing: albedos mix linearly in abundance,
/// delta = refl(mixed albedo) - s_lin per band.
inline std::vector<double> hapke_residual_from_albedo(const std::vector<double>& a,
                                                      const std::vector<double>& albedo,
                                                      const std::vector<double>& s_lin,
                                                      int bands, const HapkeGeometry& g = {}) {
  const int M = static_cast<int>(a.size());
  std::vector<double> out(bands);
  for (int b = 0; b < bands; ++b) {
    double w_mix = 0.0;
    for (int m = 0; m < M; ++m) w_mix += a[m] * albedo[static_cast<std::size_t>(m) * bands + b];
    w_mix = std::clamp(w_mix, 0.0, 1.0 - 1e-9);
    out[b] = ssa_to_refl(w_mix, g) - s_lin[b];
  }
  return out;
}

inline std::vector<double> hapke_residual(const std::vector<double>& a, const EndmemberSet& E,
                                          const HapkeGeometry& g = {}) {
  return hapke_residual_from_albedo(a, endmember_albedo(E, g), lmm_reconstruct(a, E), E.bands, g);
}

/// Attention weights for one pixel from its standardized feature vector.
inline std::array<double, 3> attention_weights(const double F[FeatureMatrix::K],
                                               const AttentionParams& p) {
  p.validate();
  double logits[3];
  for (int k = 0; k < 3; ++k) logits[k] = dot(p.u[k], F, FeatureMatrix::K) + p.c[k];
  std::array<double, 3> alpha;
  softmax(logits, 3, p.tau, alpha.data());
  return alpha;
}

inline double attention_entropy(const std::array<double, 3>& alpha) {
  return entropy(alpha.data(), 3);
}

/// Attention-combined residual: sum_k alpha_k delta_k.
inline std::vector<double> combined_residual(const ResidualStack& stack) {
  std::vector<double> out(stack.gbm.size());
  for (std::size_t b = 0; b < out.size(); ++b)
    out[b] = stack.alpha[0] * stack.gbm[b] + stack.alpha[1] * stack.ppnm[b] +
             stack.alpha[2] * stack.hapke[b];
  return out;
}

}  // namespace unmix
