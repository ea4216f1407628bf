#include "mmwce/channel_model.hpp"

#include <cmath>

#include "mmwce/errors.hpp"

namespace mmwce::channel {

CVector steering_vector(double angle, int n, double delta) {
  if (n < 1) throw ConfigError("steering vector needs at least one antenna");
  if (!(delta > 0.0)) throw ConfigError("antenna spacing must be positive");
  const double phase = 2.0 * kPi * delta * std::sin(angle);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CVector a(n);
  for (int k = 0; k < n; ++k) a(k) = std::polar(scale, phase * k);
  return a;
}

CMatrix steering_matrix(std::span<const double> angles, int n, double delta) {
  CMatrix a(n, static_cast<Eigen::Index>(angles.size()));
  for (std::size_t l = 0; l < angles.size(); ++l) a.col(static_cast<Eigen::Index>(l)) = steering_vector(angles[l], n, delta);
  return a;
}

namespace {

std::vector<double> draw_axis(const SystemConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> uniform(-cfg.angle_range, cfg.angle_range);
  std::vector<double> out;
  out.reserve(cfg.n_paths);
  while (static_cast<int>(out.size()) < cfg.n_paths) {
    const double x = uniform(rng);
    bool ok = true;
    if (cfg.min_separation > 0.0) {
      for (double y : out) {
        if (std::abs(x - y) < cfg.min_separation) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back(x);
  }
  return out;
}

}  // namespace

PathSet draw_paths(const SystemConfig& cfg, Rng& rng) {
  if (cfg.n_paths < 1) throw ConfigError("need at least one path");
  PathSet p;
  p.aoa = draw_axis(cfg, rng);
  p.aod = draw_axis(cfg, rng);
  p.gains.reserve(cfg.n_paths);
  for (int l = 0; l < cfg.n_paths; ++l) p.gains.push_back(complex_gaussian(rng, cfg.sigma_alpha_sq));
  return p;
}

CMatrix assemble_channel(const PathSet& paths, const SystemConfig& cfg) {
  const int n_paths = paths.size();
  if (n_paths < 1 || static_cast<int>(paths.aoa.size()) != n_paths ||
      static_cast<int>(paths.aod.size()) != n_paths)
    throw ConfigError("path set lengths disagree");
  const double scale = std::sqrt(static_cast<double>(cfg.n_bs) * cfg.n_ms / n_paths);
  CMatrix h = CMatrix::Zero(cfg.n_bs, cfg.n_ms);
  for (int l = 0; l < n_paths; ++l) {
    const CVector a_bs = steering_vector(paths.aoa[l], cfg.n_bs, cfg.delta);
    const CVector a_ms = steering_vector(paths.aod[l], cfg.n_ms, cfg.delta);
    h.noalias() += (scale * paths.gains[l]) * a_bs * a_ms.adjoint();
  }
  return h;
}

}  // namespace mmwce::channel
