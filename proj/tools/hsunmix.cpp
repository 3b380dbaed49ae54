// hsunmix: selective nonlinear hyperspectral unmixing.
//
// Subcommands: synth | features | unmix | eval. Configuration comes from
// documented defaults, then an optional `key = value` config file, then flags.
// Exit codes: 0 success, 2 config error, 3 I/O error, 4 numerical failure.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unmix/runner.hpp"

namespace {

struct FlagOverrides {
  std::vector<std::pair<std::string, std::string>> entries;

  // Registers --key flags that land in the override list only when given,
  // preserving defaults <- file <- flags precedence.
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    app->add_option_function<std::string>(
           flag, [this, key](const std::string& v) { entries.emplace_back(key, v); }, help)
        ->expected(1);
  }
};

const std::vector<const char*> kTrainKeys = {
    "lambda_feat0", "lambda_feat_final", "lambda_sp", "lambda_w", "lambda_ent", "tau",
    "learning_rate", "epochs", "seed", "b_max", "beta1", "beta2", "epsilon",
    "red_band", "nir_band", "mu0", "mu"};
const std::vector<const char*> kSynthKeys = {"rows",  "cols",   "bands", "endmembers", "layout",
                                             "mechanism", "gamma", "ppnm_b", "sigma", "seed"};

void add_flag_set(CLI::App* app, FlagOverrides& ovr, std::optional<std::string>& config_path,
                  const std::vector<const char*>& keys) {
  app->add_option("--config", config_path, "key = value config file");
  for (const char* key : keys) ovr.add(app, key, std::string("config key ") + key);
}

std::vector<std::string> split_methods(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hsunmix: per-pixel regime-gated nonlinear hyperspectral unmixing"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  FlagOverrides ovr;

  auto* synth = app.add_subcommand("synth", "generate a synthetic scene with known regimes");
  std::string synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  add_flag_set(synth, ovr, config_path, kSynthKeys);

  auto* features = app.add_subcommand("features", "export the six feature planes and the prior");
  std::string feat_in, feat_out;
  features->add_option("--in", feat_in, "ENVI header of the input cube")->required();
  features->add_option("--out", feat_out, "output directory")->required();
  add_flag_set(features, ovr, config_path, {"red_band", "nir_band"});

  auto* unmix_cmd = app.add_subcommand("unmix", "train the gated model and export maps");
  std::string um_in, um_endm, um_out;
  unmix_cmd->add_option("--in", um_in, "ENVI header of the input cube")->required();
  unmix_cmd->add_option("--endmembers", um_endm, "endmember CSV")->required();
  unmix_cmd->add_option("--out", um_out, "output directory")->required();
  add_flag_set(unmix_cmd, ovr, config_path, kTrainKeys);

  auto* eval = app.add_subcommand("eval", "per-method reconstruction metrics on a scene");
  std::string ev_scene, ev_out, ev_methods = "lmm,gbm,ppnm,hapke,pgru";
  eval->add_option("--scene", ev_scene, "scene directory (cube.img.hdr + endmembers.csv)")
      ->required();
  eval->add_option("--out", ev_out, "metrics CSV path")->required();
  eval->add_option("--methods", ev_methods, "comma-separated: lmm,gbm,ppnm,hapke,pgru");
  add_flag_set(eval, ovr, config_path, kTrainKeys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    unmix::RunConfig cfg = unmix::resolve_config(config_path, ovr.entries);
    if (synth->parsed()) {
      unmix::run_synth(cfg, synth_out);
    } else if (features->parsed()) {
      unmix::run_features(feat_in, cfg, feat_out);
    } else if (unmix_cmd->parsed()) {
      unmix::run_unmix(um_in, um_endm, cfg, um_out);
    } else if (eval->parsed()) {
      auto rows = unmix::run_eval(ev_scene, split_methods(ev_methods), cfg, ev_out);
      for (const auto& r : rows) {
        std::cout << r.method << ": sad=" << r.metrics.sad << " rmse=" << r.metrics.rmse
                  << " rrmse=" << r.metrics.rrmse;
        if (std::isfinite(r.metrics.rho)) std::cout << " rho=" << r.metrics.rho;
        std::cout << "\n";
      }
    }
  } catch (const unmix::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const unmix::io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
