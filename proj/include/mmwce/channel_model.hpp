#pragma once

#include <span>
#include <vector>

#include "mmwce/config.hpp"
#include "mmwce/rng.hpp"
#include "mmwce/types.hpp"

namespace mmwce::channel {

// Ground-truth multipath geometry: azimuth AoA at the BS, azimuth AoD at the
// MS and the complex gain of every path.
struct PathSet {
  std::vector<double> aoa;
  std::vector<double> aod;
  std::vector<cdouble> gains;

  int size() const { return static_cast<int>(gains.size()); }
};

// ULA response (1/sqrt(n)) * exp(j*2*pi*k*delta*sin(angle)), k = 0..n-1.
CVector steering_vector(double angle, int n, double delta);

// Columns are steering vectors for each angle.
CMatrix steering_matrix(std::span<const double> angles, int n, double delta);

// AoA/AoD uniform on [-angle_range, angle_range], gains CN(0, sigma_alpha_sq).
// When cfg.min_separation > 0 each axis is redrawn until every pair of
// angles on that axis is at least that far apart.
PathSet draw_paths(const SystemConfig& cfg, Rng& rng);

// H = sqrt(n_bs*n_ms/L) * sum_l alpha_l a_bs(theta_l) a_ms(phi_l)^H, summed in
// ascending path order.
CMatrix assemble_channel(const PathSet& paths, const SystemConfig& cfg);

}  // namespace mmwce::channel
