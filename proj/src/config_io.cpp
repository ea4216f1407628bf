#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mmwce/config.hpp"
#include "mmwce/errors.hpp"

namespace mmwce {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace

void SystemConfig::validate() const {
  require(n_bs >= 1 && n_ms >= 1, "antenna counts must be positive");
  require(n_s >= 1, "n_s must be positive");
  // One DFT column per side is reserved as the filler for inactive rows.
  require(n_s <= n_rf_ms - 1 && n_rf_ms <= n_ms, "need n_s <= n_rf_ms - 1 and n_rf_ms <= n_ms");
  require(n_s <= n_rf_bs - 1 && n_rf_bs <= n_bs, "need n_s <= n_rf_bs - 1 and n_rf_bs <= n_bs");
  require(n_b_t >= 1 && n_b_r >= 1, "block counts must be positive");
  require(n_t() <= n_ms, "n_b_t * n_s exceeds n_ms");
  require(n_r() <= n_bs, "n_b_r * n_s exceeds n_bs");
  require(m1 >= 2 && m1 <= n_t(), "stacking parameter m1 must satisfy 2 <= m1 <= n_b_t*n_s");
  require(m2 >= 1 && m2 <= n_r() - 1, "stacking parameter m2 must satisfy 1 <= m2 <= n_b_r*n_s - 1");
  require(delta > 0.0, "delta must be positive");
  require(n_paths >= 1, "n_paths must be positive");
  require(sigma_alpha_sq > 0.0, "sigma_alpha_sq must be positive");
  require(angle_range >= 0.0, "angle_range must be non-negative");
  // tan(pi*delta*sin(angle)) must stay away from its pole.
  const double limit = 2.0 * delta <= 1.0 ? std::acos(-1.0) / 2.0 : std::asin(1.0 / (2.0 * delta));
  require(angle_range < limit, "angle_range must be below asin(1/(2*delta))");
  require(n_trials >= 1, "n_trials must be positive");
  require(min_separation >= 0.0, "min_separation must be non-negative");
  require(n_paths == 1 || min_separation * (n_paths - 1) <= 2.0 * angle_range,
          "min_separation too large for n_paths within angle_range");
}

void to_json(nlohmann::json& j, const SystemConfig& c) {
  j = nlohmann::json{{"n_bs", c.n_bs},
                     {"n_ms", c.n_ms},
                     {"n_rf_bs", c.n_rf_bs},
                     {"n_rf_ms", c.n_rf_ms},
                     {"n_s", c.n_s},
                     {"n_b_t", c.n_b_t},
                     {"n_b_r", c.n_b_r},
                     {"delta", c.delta},
                     {"n_paths", c.n_paths},
                     {"m1", c.m1},
                     {"m2", c.m2},
                     {"sigma_alpha_sq", c.sigma_alpha_sq},
                     {"angle_range", c.angle_range},
                     {"snr_db_grid", c.snr_db_grid},
                     {"n_trials", c.n_trials},
                     {"seed", c.seed},
                     {"min_separation", c.min_separation}};
}

void from_json(const nlohmann::json& j, SystemConfig& c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::set<std::string> known = {
      "n_bs",  "n_ms",    "n_rf_bs",        "n_rf_ms",     "n_s",         "n_b_t",
      "n_b_r", "delta",   "n_paths",        "m1",          "m2",          "sigma_alpha_sq",
      "angle_range", "snr_db_grid", "n_trials", "seed", "min_separation"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  };
  get("n_bs", c.n_bs);
  get("n_ms", c.n_ms);
  get("n_rf_bs", c.n_rf_bs);
  get("n_rf_ms", c.n_rf_ms);
  get("n_s", c.n_s);
  get("n_b_t", c.n_b_t);
  get("n_b_r", c.n_b_r);
  get("delta", c.delta);
  get("n_paths", c.n_paths);
  get("m1", c.m1);
  get("m2", c.m2);
  get("sigma_alpha_sq", c.sigma_alpha_sq);
  get("angle_range", c.angle_range);
  get("snr_db_grid", c.snr_db_grid);
  get("n_trials", c.n_trials);
  get("seed", c.seed);
  get("min_separation", c.min_separation);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed configuration '" + path + "': " + e.what());
  }
  SystemConfig cfg;
  from_json(j, cfg);
  return cfg;
}

}  // namespace mmwce
