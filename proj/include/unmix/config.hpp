#pragma once

// Run configuration: documented defaults, overridden by a `key = value` text
// file, overridden in turn by command-line flags. Unknown keys are rejected.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unmix/envi.hpp"  // detail::trim, parse_double_strict
#include "unmix/features.hpp"
#include "unmix/regime.hpp"
#include "unmix/synth.hpp"
#include "unmix/types.hpp"

namespace unmix {

struct RunConfig {
  TrainConfig train;
  SynthSpec synth;
  FeatureOptions features;
  HapkeGeometry geometry;
};

namespace detail {

inline double cfg_double(const std::string& v, const std::string& key) {
  try {
    return parse_double_strict(v, "config key '" + key + "'");
  } catch (const io_error& e) {
    throw config_error(e.what());
  }
}

inline long cfg_long(const std::string& v, const std::string& key) {
  double d = cfg_double(v, key);
  long l = static_cast<long>(d);
  if (static_cast<double>(l) != d)
    throw config_error("config key '" + key + "' expects an integer, got '" + v + "'");
  return l;
}

inline RegimeLayout cfg_layout(const std::string& v) {
  if (v == "half-split") return RegimeLayout::half_split;
  if (v == "blocks") return RegimeLayout::blocks;
  if (v == "all-linear") return RegimeLayout::all_linear;
  if (v == "all-nonlinear") return RegimeLayout::all_nonlinear;
  throw config_error("unknown layout '" + v + "' (half-split|blocks|all-linear|all-nonlinear)");
}

inline Mechanism cfg_mechanism(const std::string& v) {
  if (v == "bilinear") return Mechanism::bilinear;
  if (v == "ppnm") return Mechanism::ppnm;
  if (v == "hapke") return Mechanism::hapke;
  throw config_error("unknown mechanism '" + v + "' (bilinear|ppnm|hapke)");
}

}  // namespace detail

/// Apply one key/value pair; throws config_error for unknown keys or bad values.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  using detail::cfg_double;
  using detail::cfg_long;
  if (key == "lambda_feat0") cfg.train.lambda_feat0 = cfg_double(value, key);
  else if (key == "lambda_feat_final") cfg.train.lambda_feat_final = cfg_double(value, key);
  else if (key == "lambda_sp") cfg.train.lambda_sp = cfg_double(value, key);
  else if (key == "lambda_w") cfg.train.lambda_w = cfg_double(value, key);
  else if (key == "lambda_ent") cfg.train.lambda_ent = cfg_double(value, key);
  else if (key == "tau") cfg.train.tau = cfg_double(value, key);
  else if (key == "learning_rate") cfg.train.learning_rate = cfg_double(value, key);
  else if (key == "epochs") cfg.train.epochs = static_cast<int>(cfg_long(value, key));
  else if (key == "seed") {
    cfg.train.seed = static_cast<std::uint64_t>(cfg_long(value, key));
    cfg.synth.seed = cfg.train.seed;
  } else if (key == "b_max") cfg.train.b_max = cfg_double(value, key);
  else if (key == "beta1") cfg.train.beta1 = cfg_double(value, key);
  else if (key == "beta2") cfg.train.beta2 = cfg_double(value, key);
  else if (key == "epsilon") cfg.train.epsilon = cfg_double(value, key);
  else if (key == "red_band") cfg.features.red_band = static_cast<int>(cfg_long(value, key));
  else if (key == "nir_band") cfg.features.nir_band = static_cast<int>(cfg_long(value, key));
  else if (key == "mu0") cfg.geometry.mu0 = cfg_double(value, key);
  else if (key == "mu") cfg.geometry.mu = cfg_double(value, key);
  else if (key == "rows") cfg.synth.rows = static_cast<int>(cfg_long(value, key));
  else if (key == "cols") cfg.synth.cols = static_cast<int>(cfg_long(value, key));
  else if (key == "bands") cfg.synth.bands = static_cast<int>(cfg_long(value, key));
  else if (key == "endmembers") cfg.synth.endmembers = static_cast<int>(cfg_long(value, key));
  else if (key == "layout") cfg.synth.layout = detail::cfg_layout(value);
  else if (key == "mechanism") cfg.synth.mechanism = detail::cfg_mechanism(value);
  else if (key == "gamma") cfg.synth.gamma = cfg_double(value, key);
  else if (key == "ppnm_b") cfg.synth.ppnm_b = cfg_double(value, key);
  else if (key == "sigma") cfg.synth.sigma = cfg_double(value, key);
  else throw config_error("unknown config key '" + key + "'");
}

inline void validate_config(const RunConfig& cfg) {
  try {
    cfg.train.validate();
    cfg.synth.validate();
    cfg.geometry.validate();
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
}

/// Parse a config file over `base`. Lines are `key = value`; blank lines and
/// lines starting with '#' are ignored.
inline RunConfig parse_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + " is not 'key = value': '" + t + "'");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    apply_config_entry(base, key, value);
  }
  validate_config(base);
  return base;
}

/// Resolve defaults <- file <- flag overrides (a list of key/value pairs).
inline RunConfig resolve_config(const std::optional<std::string>& file,
                                const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  if (file) cfg = parse_config_file(*file);
  for (const auto& [k, v] : overrides) apply_config_entry(cfg, k, v);
  validate_config(cfg);
  return cfg;
}

}  // namespace unmix
