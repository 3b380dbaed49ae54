#pragma once

// Pipeline entry points shared by the CLI and the acceptance suite. Every run
// writes fixed-name artifacts plus a manifest that echoes the resolved config,
// input digests, and the RNG / rRMSE conventions, and is sufficient to
// reproduce the run. With SOURCE_DATE_EPOCH set, reruns are byte-identical.

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "unmix/config.hpp"
#include "unmix/csv_io.hpp"
#include "unmix/envi.hpp"
#include "unmix/metrics.hpp"
#include "unmix/regime.hpp"
#include "unmix/synth.hpp"

#ifndef UNMIX_VERSION
#define UNMIX_VERSION "0.0.0"
#endif

namespace unmix {

inline constexpr const char* kRrmseDefinition =
    "scene mean of per-pixel ||y - yhat||_2 / ||y||_2, zero-norm pixels masked";

namespace detail {

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for digest: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return buf;
}

inline long long manifest_timestamp() {
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) return std::atoll(e);
  return static_cast<long long>(std::time(nullptr));
}

class ManifestWriter {
 public:
  ManifestWriter(const std::string& command, const RunConfig& cfg) {
    add("artifact", std::string("hsunmix ") + UNMIX_VERSION);
    add("command", command);
    add("timestamp_unix", std::to_string(manifest_timestamp()));
    add("rng", "pcg32");
    add("rrmse_definition", kRrmseDefinition);
    add("lambda_feat0", format_full(cfg.train.lambda_feat0));
    add("lambda_feat_final", format_full(cfg.train.lambda_feat_final));
    add("lambda_sp", format_full(cfg.train.lambda_sp));
    add("lambda_w", format_full(cfg.train.lambda_w));
    add("lambda_ent", format_full(cfg.train.lambda_ent));
    add("tau", format_full(cfg.train.tau));
    add("learning_rate", format_full(cfg.train.learning_rate));
    add("epochs", std::to_string(cfg.train.epochs));
    add("seed", std::to_string(cfg.train.seed));
    add("b_max", format_full(cfg.train.b_max));
    add("beta1", format_full(cfg.train.beta1));
    add("beta2", format_full(cfg.train.beta2));
    add("epsilon", format_full(cfg.train.epsilon));
    add("mu0", format_full(cfg.geometry.mu0));
    add("mu", format_full(cfg.geometry.mu));
    add("rows", std::to_string(cfg.synth.rows));
    add("cols", std::to_string(cfg.synth.cols));
    add("bands", std::to_string(cfg.synth.bands));
    add("endmembers", std::to_string(cfg.synth.endmembers));
    add("layout", to_string(cfg.synth.layout));
    add("mechanism", to_string(cfg.synth.mechanism));
    add("gamma", format_full(cfg.synth.gamma));
    add("ppnm_b", format_full(cfg.synth.ppnm_b));
    add("sigma", format_full(cfg.synth.sigma));
  }

  void add(const std::string& key, const std::string& value) {
    lines_.push_back(key + " = " + value);
  }

  void add_input(const std::string& path) {
    add("input " + std::filesystem::path(path).filename().string(), file_digest(path));
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    for (const auto& l : lines_) out << l << "\n";
    if (!out) throw io_error("failed writing manifest: " + path);
  }

 private:
  std::vector<std::string> lines_;
};

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory '" + dir + "': " + ec.message());
}

inline void write_map_pair(const MapF64& m, const std::string& dir, const std::string& name) {
  write_map(m, dir + "/" + name + ".csv", MapFormat::csv);
  write_map(m, dir + "/" + name + ".pgm", MapFormat::pgm);
}

inline Cube cube_from_flat(const std::vector<double>& flat, int bands, int rows, int cols) {
  Cube out;
  out.bands = bands;
  out.rows = rows;
  out.cols = cols;
  out.data.resize(flat.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      std::size_t pixel = static_cast<std::size_t>(r) * cols + c;
      for (int b = 0; b < bands; ++b)
        out.data[out.index(b, r, c)] = static_cast<float>(flat[pixel * bands + b]);
    }
  return out;
}

}  // namespace detail

/// `synth`: cube (ENVI) + endmember CSV + regime-label PGM + generating
/// abundances CSV + manifest, all under `outdir` with fixed names.
inline void run_synth(const RunConfig& cfg, const std::string& outdir) {
  detail::ensure_dir(outdir);
  SyntheticScene scene = generate_scene(cfg.synth);
  write_envi_cube(scene.cube, outdir + "/cube.img.hdr");
  write_endmembers_csv(scene.endmembers, outdir + "/endmembers.csv");

  MapF64 labels = MapF64::filled(cfg.synth.rows, cfg.synth.cols, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) labels.values[i] = scene.regime[i];
  write_map(labels, outdir + "/labels.pgm", MapFormat::pgm);

  std::ofstream ab(outdir + "/abundances.csv");
  if (!ab) throw io_error("cannot open for writing: " + outdir + "/abundances.csv");
  for (int m = 0; m < scene.endmembers.count(); ++m)
    ab << (m ? "," : "") << "a_" << scene.endmembers.names[m];
  ab << "\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (int m = 0; m < scene.endmembers.count(); ++m)
      ab << (m ? "," : "") << format_full(scene.abundances.at(m, i));
    ab << "\n";
  }

  detail::ManifestWriter mf("synth", cfg);
  mf.write(outdir + "/manifest.txt");
}

/// `features`: the six raw feature planes plus the prior, each as CSV and PGM.
inline void run_features(const std::string& header_path, const RunConfig& cfg,
                         const std::string& outdir) {
  detail::ensure_dir(outdir);
  Cube cube = read_envi_cube(header_path);
  FeatureMatrix raw = compute_features(cube, cfg.features);
  MapF64 prior = compute_prior(raw);
  for (int k = 0; k < FeatureMatrix::K; ++k)
    detail::write_map_pair(raw.plane_map(k), outdir, FeatureMatrix::names[k]);
  detail::write_map_pair(prior, outdir, "prior");

  detail::ManifestWriter mf("features", cfg);
  auto [red, nir] = resolve_ndvi_bands(cube, cfg.features);
  mf.add("ndvi_red_band", std::to_string(red));
  mf.add("ndvi_nir_band", std::to_string(nir));
  mf.add_input(header_path);
  mf.write(outdir + "/manifest.txt");
}

/// `unmix`: trains the gated model and writes xi / attention / abundance /
/// reconstruction-gain / dominant-feature maps, the loss trace, and a manifest.
inline TrainedModel run_unmix(const std::string& header_path, const std::string& endmember_csv,
                              const RunConfig& cfg, const std::string& outdir) {
  detail::ensure_dir(outdir);
  Cube cube = read_envi_cube(header_path);
  EndmemberSet E = read_endmembers_csv(endmember_csv);
  SceneState st = prepare_scene(cube, E, cfg.features, cfg.geometry, cfg.train.b_max);
  TrainedModel model = train(st, cfg.train);
  ModelParams params{model.regime, model.attention, model.gbm};
  SceneResult res = predict(st, params);

  detail::write_map_pair(res.xi_map, outdir, "xi");
  const char* alpha_names[3] = {"alpha_gbm", "alpha_ppnm", "alpha_hapke"};
  for (int k = 0; k < 3; ++k) detail::write_map_pair(res.alpha_maps[k], outdir, alpha_names[k]);
  for (int m = 0; m < E.count(); ++m)
    detail::write_map_pair(res.abundances.plane(m), outdir,
                           "abundance_" + std::to_string(m) + "_" + E.names[m]);
  detail::write_map_pair(res.dres_map, outdir, "delta_res");
  detail::write_map_pair(res.dominant_feature, outdir, "dominant_feature");

  std::ofstream trace(outdir + "/loss_trace.csv");
  if (!trace) throw io_error("cannot open for writing: " + outdir + "/loss_trace.csv");
  trace << "epoch,loss\n";
  for (std::size_t e = 0; e < model.loss_trace.size(); ++e)
    trace << e << "," << format_full(model.loss_trace[e]) << "\n";

  detail::ManifestWriter mf("unmix", cfg);
  mf.add("ndvi_red_band", std::to_string(st.red_band));
  mf.add("ndvi_nir_band", std::to_string(st.nir_band));
  mf.add_input(header_path);
  mf.add_input(endmember_csv);
  mf.write(outdir + "/manifest.txt");
  return model;
}

struct MethodMetrics {
  std::string method;
  SceneMetrics metrics;
};

/// One metrics row per method. Baselines share the FCLS abundances: `lmm` is
/// the plain linear reconstruction; `gbm`/`ppnm`/`hapke` force xi = 1 with
/// one-hot attention on the respective model (gamma fitted by the same
/// optimizer for gbm; ppnm's coefficient is closed-form; hapke has no
/// parameters); `pgru` is the full gated model and also reports rho.
inline std::vector<MethodMetrics> run_eval(const std::string& scene_dir,
                                           const std::vector<std::string>& methods,
                                           const RunConfig& cfg, const std::string& out_csv) {
  const std::string header = scene_dir + "/cube.img.hdr";
  const std::string endm = scene_dir + "/endmembers.csv";
  if (!std::filesystem::exists(header)) throw io_error("missing scene artifact: " + header);
  if (!std::filesystem::exists(endm)) throw io_error("missing scene artifact: " + endm);
  Cube cube = read_envi_cube(header);
  EndmemberSet E = read_endmembers_csv(endm);
  SceneState st = prepare_scene(cube, E, cfg.features, cfg.geometry, cfg.train.b_max);

  auto evaluate = [&](const Cube& reconstruction) {
    SceneMetrics m;
    auto [sadv, sad_masked] = sad_scene(cube, reconstruction);
    auto [rrv, rr_masked] = rrmse(cube, reconstruction);
    m.sad = sadv;
    m.rmse = rmse(cube, reconstruction);
    m.rrmse = rrv;
    m.masked_pixels = std::max(sad_masked, rr_masked);
    return m;
  };

  std::vector<MethodMetrics> rows;
  for (const std::string& method : methods) {
    MethodMetrics row;
    row.method = method;
    if (method == "lmm") {
      row.metrics = evaluate(detail::cube_from_flat(st.s_lin, st.bands, st.rows, st.cols));
    } else if (method == "gbm" || method == "ppnm" || method == "hapke") {
      TrainOverrides ovr;
      ovr.fixed_xi = 1.0;
      ovr.fixed_alpha = (method == "gbm") ? 0 : (method == "ppnm" ? 1 : 2);
      ModelParams params = ModelParams::initial(st.endmember_count, cfg.train.tau);
      if (method == "gbm") {
        TrainedModel m = train(st, cfg.train, ovr);
        params = ModelParams{m.regime, m.attention, m.gbm};
      }
      row.metrics = evaluate(predict(st, params, ovr).reconstruction);
    } else if (method == "pgru") {
      TrainedModel m = train(st, cfg.train);
      ModelParams params{m.regime, m.attention, m.gbm};
      SceneResult res = predict(st, params);
      row.metrics = evaluate(res.reconstruction);
      row.metrics.rho = coherence_rho(res.xi_map, res.dres_map);
    } else {
      throw config_error("unknown method '" + method + "' (lmm|gbm|ppnm|hapke|pgru)");
    }
    rows.push_back(row);
  }

  std::ofstream out(out_csv, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + out_csv);
  out << "method,sad,rmse,rrmse,rho\n";
  for (const auto& r : rows) {
    out << r.method << "," << format_full(r.metrics.sad) << "," << format_full(r.metrics.rmse)
        << "," << format_full(r.metrics.rrmse) << ",";
    if (std::isfinite(r.metrics.rho)) out << format_full(r.metrics.rho);
    out << "\n";
  }
  out.close();

  detail::ManifestWriter mf("eval", cfg);
  std::string joined;
  for (const auto& m : methods) joined += (joined.empty() ? "" : ",") + m;
  mf.add("methods", joined);
  mf.add("ndvi_red_band", std::to_string(st.red_band));
  mf.add("ndvi_nir_band", std::to_string(st.nir_band));
  mf.add_input(header);
  mf.add_input(endm);
  mf.write(out_csv + ".manifest.txt");
  return rows;
}

}  // namespace unmix
