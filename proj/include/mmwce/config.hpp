#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace mmwce {

// Dimensional and physical parameters of one link. Field names double as the
// keys of the configuration file.
struct SystemConfig {
  int n_bs = 64;
  int n_ms = 64;
  int n_rf_bs = 4;
  int n_rf_ms = 4;
  int n_s = 3;
  int n_b_t = 10;
  int n_b_r = 10;
  double delta = 0.5;
  int n_paths = 5;
  int m1 = 13;
  int m2 = 13;
  double sigma_alpha_sq = 1.0;
  double angle_range = 3.14159265358979323846 / 3.0;
  std::vector<double> snr_db_grid = {0, 5, 10, 15, 20, 25, 30};
  int n_trials = 100;
  std::uint64_t seed = 1;
  // Optional minimum pairwise separation (radians) enforced per angle axis
  // when drawing paths. Zero disables it.
  double min_separation = 0.0;

  int n_r() const { return n_b_r * n_s; }
  int n_t() const { return n_b_t * n_s; }
  int t_ms() const { return n_s; }

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  bool operator==(const SystemConfig&) const = default;
};

void to_json(nlohmann::json& j, const SystemConfig& cfg);
// Strict: unknown keys and type mismatches raise ConfigError. Missing keys
// keep their default values.
void from_json(const nlohmann::json& j, SystemConfig& cfg);

SystemConfig load_config(const std::string& path);

}  // namespace mmwce
