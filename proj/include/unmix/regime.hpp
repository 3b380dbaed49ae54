#pragma once

// Regime gate xi = sigmoid(w . F + b), the full training objective
//
//   sum_i [ -tanh(dres_i) + lf (xi_i - prior_i)^2 ] + lsp * dirichlet(xi)
//   + lw ||w||^2 + lent * sum_i H(alpha_i),      yhat_i = s_lin_i + xi_i dnl_i
//
// with analytic gradients for (w, b), attention (u, c) and GBM gamma, and a
// full-batch adaptive-moment optimizer. Abundances are estimated once by FCLS
// and held fixed; the PPNM coefficient is re-fit in closed form per pixel and
// treated as a constant in backpropagation.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "unmix/fcls.hpp"
#include "unmix/features.hpp"
#include "unmix/mathutil.hpp"
#include "unmix/models.hpp"
#include "unmix/types.hpp"

namespace unmix {

struct RegimeParams {
  std::array<double, FeatureMatrix::K> w = {};
  double b = 0.0;
};

struct TrainConfig {
  double lambda_feat0 = 1.0;
  double lambda_feat_final = 0.1;
  double lambda_sp = 0.01;
  double lambda_w = 1e-4;
  double lambda_ent = 0.01;
  double tau = 1.0;
  double learning_rate = 0.01;
  int epochs = 500;
  std::uint64_t seed = 0;
  double b_max = 5.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const {
    if (lambda_feat0 < 0 || lambda_feat_final < 0 || lambda_sp < 0 || lambda_w < 0 || lambda_ent < 0)
      throw config_error("regularization weights must be >= 0");
    if (epochs < 1) throw config_error("epochs must be >= 1");
    if (!(learning_rate > 0)) throw config_error("learning rate must be > 0");
    if (!(tau > 0)) throw config_error("tau must be > 0");
    if (!(b_max > 0)) throw config_error("b_max must be > 0");
    if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1))
      throw config_error("moment decays must lie in [0, 1)");
    if (!(epsilon > 0)) throw config_error("epsilon must be > 0");
  }
};

/// Gate value for one pixel.
inline double xi(const double F[FeatureMatrix::K], const RegimeParams& p) {
  return sigmoid(dot(p.w.data(), F, FeatureMatrix::K) + p.b);
}

/// Per-feature contributions w_k F_k and the dominant feature argmax_k |w_k F_k|
/// (ties resolved to the lowest index).
struct FeatureContributions {
  std::array<double, FeatureMatrix::K> contribution;
  int dominant;
};

inline FeatureContributions feature_contributions(const double F[FeatureMatrix::K],
                                                  const RegimeParams& p) {
  FeatureContributions out{};
  out.dominant = 0;
  for (int k = 0; k < FeatureMatrix::K; ++k) {
    out.contribution[k] = p.w[k] * F[k];
    if (std::abs(out.contribution[k]) > std::abs(out.contribution[out.dominant])) out.dominant = k;
  }
  return out;
}

/// Reconstruction gain dres = ||y - s_lin|| - ||y - yhat||.
inline double reconstruction_gain(const std::vector<double>& y, const std::vector<double>& s_lin,
                                  const std::vector<double>& yhat) {
  const int n = static_cast<int>(y.size());
  return norm2_diff(y.data(), s_lin.data(), n) - norm2_diff(y.data(), yhat.data(), n);
}

/// Dirichlet energy of a map: sum over 4-neighbor edges of (xi_i - xi_j)^2.
inline double laplacian_penalty(const MapF64& m) {
  double acc = 0.0;
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      if (c + 1 < m.cols) {
        double d = m.at(r, c) - m.at(r, c + 1);
        acc += d * d;
      }
      if (r + 1 < m.rows) {
        double d = m.at(r, c) - m.at(r + 1, c);
        acc += d * d;
      }
    }
  return acc;
}

/// lambda_feat linearly annealed from lambda_feat0 (epoch 0) to
/// lambda_feat_final (last epoch). A single-epoch run uses the final value.
inline double anneal_lambda_feat(int epoch, const TrainConfig& cfg) {
  if (epoch < 0 || epoch >= cfg.epochs) throw std::invalid_argument("epoch out of range");
  if (cfg.epochs == 1) return cfg.lambda_feat_final;
  double t = static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1);
  return cfg.lambda_feat0 + (cfg.lambda_feat_final - cfg.lambda_feat0) * t;
}

/// Everything fixed during training, precomputed once per scene.
struct SceneState {
  int rows = 0, cols = 0, bands = 0, endmember_count = 0;
  std::size_t n = 0;
  std::vector<double> y;            // n*bands, pixel-major
  AbundanceMap abundances;          // FCLS estimates, held fixed
  std::vector<double> s_lin;        // n*bands
  std::vector<double> r_lin_norm;   // n
  std::vector<double> ppnm_coeff;   // n, closed-form b per pixel
  std::vector<double> hapke_delta;  // n*bands
  std::vector<double> pair_weight;  // n*P, a_m a_n per pair
  std::vector<double> pair_spec;    // P*bands, e_m o e_n
  FeatureMatrix features;           // standardized
  MapF64 prior;
  HapkeGeometry geometry;
  int red_band = 0, nir_band = 0;

  int pair_count() const { return GbmParams::pair_count(endmember_count); }
};

inline SceneState prepare_scene(const Cube& cube, const EndmemberSet& E,
                                const FeatureOptions& fopt = {}, const HapkeGeometry& geom = {},
                                double b_max = 5.0) {
  cube.validate();
  E.validate();
  if (cube.bands != E.bands)
    throw std::invalid_argument("prepare_scene: cube and endmember band counts differ");
  geom.validate();

  SceneState st;
  st.rows = cube.rows;
  st.cols = cube.cols;
  st.bands = cube.bands;
  st.endmember_count = E.count();
  st.n = cube.pixel_count();
  st.geometry = geom;
  auto [red, nir] = resolve_ndvi_bands(cube, fopt);
  st.red_band = red;
  st.nir_band = nir;

  const int M = E.count();
  const int P = st.pair_count();
  st.y.resize(st.n * st.bands);
  std::vector<double> spec;
  for (int r = 0; r < st.rows; ++r)
    for (int c = 0; c < st.cols; ++c) {
      cube.spectrum(r, c, spec);
      std::copy(spec.begin(), spec.end(),
                st.y.begin() + (static_cast<std::size_t>(r) * st.cols + c) * st.bands);
    }

  st.abundances = unmix_scene(cube, E);

  st.pair_spec.resize(static_cast<std::size_t>(P) * st.bands);
  {
    int p = 0;
    for (int m = 0; m < M; ++m)
      for (int nn = m + 1; nn < M; ++nn, ++p)
        for (int b = 0; b < st.bands; ++b)
          st.pair_spec[static_cast<std::size_t>(p) * st.bands + b] = E.at(b, m) * E.at(b, nn);
  }

  std::vector<double> albedo = endmember_albedo(E, geom);
  st.s_lin.resize(st.n * st.bands);
  st.r_lin_norm.resize(st.n);
  st.ppnm_coeff.resize(st.n);
  st.hapke_delta.resize(st.n * st.bands);
  st.pair_weight.resize(st.n * P);

  std::vector<double> a(M), s, yv(st.bands), hd;
  for (std::size_t i = 0; i < st.n; ++i) {
    for (int m = 0; m < M; ++m) a[m] = st.abundances.values[m * st.n + i];
    s = lmm_reconstruct(a, E);
    std::copy(s.begin(), s.end(), st.s_lin.begin() + i * st.bands);
    std::copy(st.y.begin() + i * st.bands, st.y.begin() + (i + 1) * st.bands, yv.begin());
    st.r_lin_norm[i] = norm2_diff(yv.data(), s.data(), st.bands);
    st.ppnm_coeff[i] = ppnm_fit_b(yv, s, b_max);
    hd = hapke_residual_from_albedo(a, albedo, s, st.bands, geom);
    std::copy(hd.begin(), hd.end(), st.hapke_delta.begin() + i * st.bands);
    int p = 0;
    for (int m = 0; m < M; ++m)
      for (int nn = m + 1; nn < M; ++nn, ++p) st.pair_weight[i * P + p] = a[m] * a[nn];
  }

  FeatureMatrix raw = compute_features(cube, fopt);
  st.prior = compute_prior(raw);
  st.features = standardize(raw);
  return st;
}

/// Learnable parameter bundle; flattening order (w, b, u row-major, c, gbm raw)
/// is part of the determinism contract for the optimizer and gradient checks.
struct ModelParams {
  RegimeParams regime;
  AttentionParams attention;
  GbmParams gbm;

  static ModelParams initial(int M, double tau) {
    ModelParams p;
    p.attention.tau = tau;
    p.gbm = GbmParams::zeros(M);
    return p;
  }

  static int count(int M) { return FeatureMatrix::K + 1 + 3 * FeatureMatrix::K + 3 + GbmParams::pair_count(M); }

  void flatten(std::vector<double>& out) const {
    out.clear();
    out.insert(out.end(), regime.w.begin(), regime.w.end());
    out.push_back(regime.b);
    for (int k = 0; k < 3; ++k)
      out.insert(out.end(), attention.u[k], attention.u[k] + FeatureMatrix::K);
    out.insert(out.end(), attention.c, attention.c + 3);
    out.insert(out.end(), gbm.raw.begin(), gbm.raw.end());
  }

  void unflatten(const std::vector<double>& v) {
    std::size_t i = 0;
    for (int k = 0; k < FeatureMatrix::K; ++k) regime.w[k] = v[i++];
    regime.b = v[i++];
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < FeatureMatrix::K; ++j) attention.u[k][j] = v[i++];
    for (int k = 0; k < 3; ++k) attention.c[k] = v[i++];
    for (double& g : gbm.raw) g = v[i++];
  }
};

/// Forced settings for the uniform-baseline rows of `eval`.
struct TrainOverrides {
  std::optional<double> fixed_xi;   // gate forced to a constant; (w, b) frozen
  std::optional<int> fixed_alpha;   // attention forced one-hot at model k; (u, c) frozen
};

/// Raw (unweighted) loss terms; the total composes them exactly as
/// evidence + lf*feature_prior + lsp*spatial + lw*weight_decay + lent*entropy.
struct LossBreakdown {
  double evidence = 0.0;
  double feature_prior = 0.0;
  double spatial = 0.0;
  double weight_decay = 0.0;
  double entropy = 0.0;

  double total(double lambda_feat, const TrainConfig& cfg) const {
    return evidence + lambda_feat * feature_prior + cfg.lambda_sp * spatial +
           cfg.lambda_w * weight_decay + cfg.lambda_ent * entropy;
  }
};

namespace detail {

inline void check_finite(double v, const char* term, std::size_t pixel) {
  if (!std::isfinite(v))
    throw numeric_error(std::string("non-finite ") + term + " at pixel " + std::to_string(pixel));
}

// Single forward/backward pass. `grad` may be null (loss only). Accumulation is
// pixel-major and sequential, so results are independent of any partitioning
// callers might layer on top.
inline LossBreakdown loss_and_grad(const SceneState& st, const ModelParams& params,
                                   double lambda_feat, const TrainConfig& cfg,
                                   const TrainOverrides& ovr, std::vector<double>* grad) {
  const int K = FeatureMatrix::K;
  const int bands = st.bands;
  const int P = st.pair_count();
  const std::size_t n = st.n;
  LossBreakdown loss;

  std::vector<double> gammas = params.gbm.gammas();
  std::vector<double> xi_map(n), gxi(n, 0.0);
  double F[FeatureMatrix::K];

  // gate values first; the spatial term couples neighbors
  for (std::size_t i = 0; i < n; ++i) {
    if (ovr.fixed_xi) {
      xi_map[i] = *ovr.fixed_xi;
    } else {
      st.features.feature_vector(i, F);
      xi_map[i] = sigmoid(dot(params.regime.w.data(), F, K) + params.regime.b);
    }
  }

  std::vector<double> dnl(bands), e(bands), dgbm(bands);
  std::array<double, 3> alpha{};
  for (std::size_t i = 0; i < n; ++i) {
    st.features.feature_vector(i, F);
    const double* y = st.y.data() + i * bands;
    const double* s = st.s_lin.data() + i * bands;
    const double* dh = st.hapke_delta.data() + i * bands;
    const double bpp = st.ppnm_coeff[i];
    const double xiv = xi_map[i];

    if (ovr.fixed_alpha) {
      alpha = {0.0, 0.0, 0.0};
      alpha[*ovr.fixed_alpha] = 1.0;
    } else {
      alpha = attention_weights(F, params.attention);
    }

    std::fill(dgbm.begin(), dgbm.end(), 0.0);
    const double* aw = st.pair_weight.data() + i * P;
    for (int p = 0; p < P; ++p) {
      double wgt = gammas[p] * aw[p];
      if (wgt == 0.0) continue;
      const double* ps = st.pair_spec.data() + static_cast<std::size_t>(p) * bands;
      for (int b = 0; b < bands; ++b) dgbm[b] += wgt * ps[b];
    }

    double r_hat_sq = 0.0;
    for (int b = 0; b < bands; ++b) {
      double sb = s[b];
      dnl[b] = alpha[0] * dgbm[b] + alpha[1] * bpp * sb * sb + alpha[2] * dh[b];
      e[b] = y[b] - (sb + xiv * dnl[b]);
      r_hat_sq += e[b] * e[b];
    }
    double r_hat = std::sqrt(r_hat_sq);
    double dres = st.r_lin_norm[i] - r_hat;
    double th = std::tanh(dres);
    loss.evidence += -th;
    check_finite(loss.evidence, "evidence term", i);

    double dprior = xi_map[i] - st.prior.values[i];
    loss.feature_prior += dprior * dprior;
    double h = entropy(alpha.data(), 3);
    loss.entropy += h;
    check_finite(loss.feature_prior + loss.entropy, "regularizer", i);

    if (!grad) continue;

    // d(-tanh(dres))/dyhat_b = -(1 - th^2) * e_b / r_hat
    double galpha[3] = {0.0, 0.0, 0.0};
    if (r_hat > 1e-15) {
      double coef = -(1.0 - th * th) / r_hat;
      double e_dot_dnl = 0.0, e_dot_gbm = 0.0, e_dot_ppnm = 0.0, e_dot_hapke = 0.0;
      for (int b = 0; b < bands; ++b) {
        e_dot_dnl += e[b] * dnl[b];
        e_dot_gbm += e[b] * dgbm[b];
        e_dot_ppnm += e[b] * bpp * s[b] * s[b];
        e_dot_hapke += e[b] * dh[b];
      }
      gxi[i] += coef * e_dot_dnl;
      galpha[0] = coef * xiv * e_dot_gbm;
      galpha[1] = coef * xiv * e_dot_ppnm;
      galpha[2] = coef * xiv * e_dot_hapke;

      double* graw = grad->data() + K + 1 + 3 * K + 3;
      double gfac = coef * xiv * alpha[0];
      for (int p = 0; p < P; ++p) {
        if (aw[p] == 0.0) continue;
        const double* ps = st.pair_spec.data() + static_cast<std::size_t>(p) * bands;
        double e_dot_ps = 0.0;
        for (int b = 0; b < bands; ++b) e_dot_ps += e[b] * ps[b];
        graw[p] += gfac * aw[p] * e_dot_ps * gammas[p] * (1.0 - gammas[p]);
      }
    }

    gxi[i] += lambda_feat * 2.0 * dprior;

    if (!ovr.fixed_alpha) {
      for (int k = 0; k < 3; ++k)
        if (alpha[k] > 0.0) galpha[k] += cfg.lambda_ent * (-(std::log(alpha[k]) + 1.0));
      double inner = 0.0;
      for (int k = 0; k < 3; ++k) inner += galpha[k] * alpha[k];
      for (int k = 0; k < 3; ++k) {
        double gl = alpha[k] / params.attention.tau * (galpha[k] - inner);
        double* gu = grad->data() + K + 1 + k * K;
        for (int j = 0; j < K; ++j) gu[j] += gl * F[j];
        (*grad)[K + 1 + 3 * K + k] += gl;
      }
    }
  }

  // spatial coherence: Dirichlet energy over the gate map
  for (int r = 0; r < st.rows; ++r)
    for (int c = 0; c < st.cols; ++c) {
      std::size_t i = static_cast<std::size_t>(r) * st.cols + c;
      if (c + 1 < st.cols) {
        double d = xi_map[i] - xi_map[i + 1];
        loss.spatial += d * d;
        if (grad) {
          gxi[i] += cfg.lambda_sp * 2.0 * d;
          gxi[i + 1] -= cfg.lambda_sp * 2.0 * d;
        }
      }
      if (r + 1 < st.rows) {
        std::size_t j = i + st.cols;
        double d = xi_map[i] - xi_map[j];
        loss.spatial += d * d;
        if (grad) {
          gxi[i] += cfg.lambda_sp * 2.0 * d;
          gxi[j] -= cfg.lambda_sp * 2.0 * d;
        }
      }
    }

  for (int k = 0; k < K; ++k) loss.weight_decay += params.regime.w[k] * params.regime.w[k];

  if (grad && !ovr.fixed_xi) {
    for (std::size_t i = 0; i < n; ++i) {
      st.features.feature_vector(i, F);
      double gz = gxi[i] * xi_map[i] * (1.0 - xi_map[i]);
      for (int k = 0; k < K; ++k) (*grad)[k] += gz * F[k];
      (*grad)[K] += gz;
    }
    for (int k = 0; k < K; ++k) (*grad)[k] += cfg.lambda_w * 2.0 * params.regime.w[k];
  }
  return loss;
}

}  // namespace detail

inline LossBreakdown total_loss(const SceneState& st, const ModelParams& params, double lambda_feat,
                                const TrainConfig& cfg, const TrainOverrides& ovr = {}) {
  return detail::loss_and_grad(st, params, lambda_feat, cfg, ovr, nullptr);
}

/// Loss plus analytic gradient in the flattened parameter order.
inline LossBreakdown grad_total_loss(const SceneState& st, const ModelParams& params,
                                     double lambda_feat, const TrainConfig& cfg,
                                     std::vector<double>& grad, const TrainOverrides& ovr = {}) {
  grad.assign(ModelParams::count(st.endmember_count), 0.0);
  return detail::loss_and_grad(st, params, lambda_feat, cfg, ovr, &grad);
}

struct TrainedModel {
  RegimeParams regime;
  AttentionParams attention;
  GbmParams gbm;
  std::vector<double> loss_trace;  // total loss at the start of each epoch
  MapF64 xi_map;
  std::array<MapF64, 3> alpha_maps;
  MapF64 dres_map;
};

struct SceneResult {
  MapF64 xi_map;
  std::array<MapF64, 3> alpha_maps;
  MapF64 dres_map;
  MapF64 dominant_feature;  // integer codes 0..5
  AbundanceMap abundances;
  Cube reconstruction;
};

/// Reconstruction maps for given parameters (no training).
inline SceneResult predict(const SceneState& st, const ModelParams& params,
                           const TrainOverrides& ovr = {}) {
  SceneResult out;
  out.xi_map = MapF64::filled(st.rows, st.cols, 0.0);
  for (auto& m : out.alpha_maps) m = MapF64::filled(st.rows, st.cols, 0.0);
  out.dres_map = MapF64::filled(st.rows, st.cols, 0.0);
  out.dominant_feature = MapF64::filled(st.rows, st.cols, 0.0);
  out.abundances = st.abundances;
  out.reconstruction.bands = st.bands;
  out.reconstruction.rows = st.rows;
  out.reconstruction.cols = st.cols;
  out.reconstruction.data.resize(st.y.size());

  std::vector<double> gammas = params.gbm.gammas();
  const int P = st.pair_count();
  double F[FeatureMatrix::K];
  std::vector<double> dnl(st.bands);
  for (std::size_t i = 0; i < st.n; ++i) {
    const int row = static_cast<int>(i) / st.cols;
    const int col = static_cast<int>(i) % st.cols;
    st.features.feature_vector(i, F);
    double xiv = ovr.fixed_xi ? *ovr.fixed_xi
                              : sigmoid(dot(params.regime.w.data(), F, FeatureMatrix::K) + params.regime.b);
    std::array<double, 3> alpha{};
    if (ovr.fixed_alpha) {
      alpha[*ovr.fixed_alpha] = 1.0;
    } else {
      alpha = attention_weights(F, params.attention);
    }
    const double* y = st.y.data() + i * st.bands;
    const double* s = st.s_lin.data() + i * st.bands;
    const double* dh = st.hapke_delta.data() + i * st.bands;
    const double* aw = st.pair_weight.data() + i * P;
    const double bpp = st.ppnm_coeff[i];

    double r_hat_sq = 0.0;
    for (int b = 0; b < st.bands; ++b) {
      double g = 0.0;
      for (int p = 0; p < P; ++p)
        g += gammas[p] * aw[p] * st.pair_spec[static_cast<std::size_t>(p) * st.bands + b];
      dnl[b] = alpha[0] * g + alpha[1] * bpp * s[b] * s[b] + alpha[2] * dh[b];
      double yhat = s[b] + xiv * dnl[b];
      out.reconstruction.data[out.reconstruction.index(b, row, col)] = static_cast<float>(yhat);
      double d = y[b] - yhat;
      r_hat_sq += d * d;
    }
    out.xi_map.values[i] = xiv;
    for (int k = 0; k < 3; ++k) out.alpha_maps[k].values[i] = alpha[k];
    out.dres_map.values[i] = st.r_lin_norm[i] - std::sqrt(r_hat_sq);
    out.dominant_feature.values[i] =
        static_cast<double>(feature_contributions(F, params.regime).dominant);
  }
  return out;
}

/// Full-batch adaptive-moment training. Deterministic given config: fixed
/// initialization (maximum-entropy point), fixed pixel-major accumulation, and
/// a single optimizer thread.
inline TrainedModel train(const SceneState& st, const TrainConfig& cfg,
                          const TrainOverrides& ovr = {}) {
  cfg.validate();
  ModelParams params = ModelParams::initial(st.endmember_count, cfg.tau);
  const int dim = ModelParams::count(st.endmember_count);
  std::vector<double> theta, grad, m(dim, 0.0), v(dim, 0.0);
  params.flatten(theta);

  TrainedModel out;
  out.loss_trace.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double lf = anneal_lambda_feat(epoch, cfg);
    LossBreakdown lb;
    try {
      lb = grad_total_loss(st, params, lf, cfg, grad, ovr);
    } catch (const numeric_error& err) {
      throw numeric_error(std::string(err.what()) + " (epoch " + std::to_string(epoch) + ")");
    }
    double total = lb.total(lf, cfg);
    if (!std::isfinite(total))
      throw numeric_error("non-finite loss at epoch " + std::to_string(epoch));
    out.loss_trace.push_back(total);

    double t = static_cast<double>(epoch + 1);
    double bc1 = 1.0 - std::pow(cfg.beta1, t);
    double bc2 = 1.0 - std::pow(cfg.beta2, t);
    for (int j = 0; j < dim; ++j) {
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * grad[j];
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * grad[j] * grad[j];
      theta[j] -= cfg.learning_rate * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + cfg.epsilon);
    }
    params.unflatten(theta);
  }

  out.regime = params.regime;
  out.attention = params.attention;
  out.gbm = params.gbm;
  SceneResult res = predict(st, params, ovr);
  out.xi_map = std::move(res.xi_map);
  out.alpha_maps = std::move(res.alpha_maps);
  out.dres_map = std::move(res.dres_map);
  return out;
}

/// Convenience entry point matching the pipeline contract: abundances via FCLS,
/// features and prior computed internally, then gradient training.
inline TrainedModel train(const Cube& cube, const EndmemberSet& E, const TrainConfig& cfg,
                          const FeatureOptions& fopt = {}) {
  SceneState st = prepare_scene(cube, E, fopt, HapkeGeometry{}, cfg.b_max);
  return train(st, cfg);
}

inline SceneResult predict(const Cube& cube, const EndmemberSet& E, const TrainedModel& model,
                           const FeatureOptions& fopt = {}, double b_max = 5.0) {
  SceneState st = prepare_scene(cube, E, fopt, HapkeGeometry{}, b_max);
  ModelParams params{model.regime, model.attention, model.gbm};
  return predict(st, params);
}

}  // namespace unmix
