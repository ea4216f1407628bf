#include "mmwce/training.hpp"

#include <cmath>
#include <string>

#include "mmwce/errors.hpp"

namespace mmwce::training {

CMatrix dft_matrix(int n) {
  CMatrix u(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) u(m, k) = std::polar(1.0, -2.0 * kPi * m * k / n);
  return u;
}

CMatrix build_pilot(int n_s) {
  if (n_s < 1) throw ConfigError("pilot needs at least one stream");
  return dft_matrix(n_s);
}

double precoder_scale(const SystemConfig& cfg) {
  return std::sqrt(static_cast<double>(cfg.n_rf_ms) / cfg.n_s);
}

double combiner_scale(const SystemConfig& cfg) {
  return cfg.n_rf_bs / std::sqrt(static_cast<double>(cfg.n_bs));
}

namespace {

// Shared construction for precoder and combiner blocks. Rows of the analog
// matrix are u_{n_rf}^H except for the n_s rows of the active window, which
// hold u_1^H .. u_{n_s}^H. Since u_{n_rf} is orthogonal to u_1..u_{n_s}, the
// product with [u_1 .. u_{n_s}] selects the window.
HybridBlock build_block(int index, int n_blocks, int n_ant, int n_rf, int n_s, double bb_gain) {
  if (index < 1 || index > n_blocks)
    throw std::out_of_range("training block index " + std::to_string(index) + " outside 1.." +
                            std::to_string(n_blocks));
  if (n_s > n_rf - 1)
    throw ConfigError("training design needs n_s <= n_rf - 1 to leave an orthogonal filler column");
  if (index * n_s > n_ant) throw ConfigError("training block exceeds the antenna count");

  const CMatrix u = dft_matrix(n_rf);
  const CVector filler = u.col(n_rf - 1);
  const double rf_mod = 1.0 / std::sqrt(static_cast<double>(n_ant));
  const int first = (index - 1) * n_s;

  HybridBlock b;
  b.rf.resize(n_ant, n_rf);
  for (int r = 0; r < n_ant; ++r) {
    const bool active = r >= first && r < first + n_s;
    const CVector col = active ? CVector(u.col(r - first)) : filler;
    b.rf.row(r) = rf_mod * col.adjoint();
  }
  b.bb = bb_gain * u.leftCols(n_s);
  b.product = b.rf * b.bb;
  return b;
}

}  // namespace

HybridBlock build_precoder_block(int j, const SystemConfig& cfg) {
  // |F_RF F_BB|_F^2 = n_rf_ms fixes the digital gain.
  const double gain = precoder_scale(cfg) * std::sqrt(static_cast<double>(cfg.n_ms)) / cfg.n_rf_ms;
  return build_block(j, cfg.n_b_t, cfg.n_ms, cfg.n_rf_ms, cfg.n_s, gain);
}

HybridBlock build_combiner_block(int i, const SystemConfig& cfg) {
  return build_block(i, cfg.n_b_r, cfg.n_bs, cfg.n_rf_bs, cfg.n_s, 1.0);
}

TrainingPlan aggregate_training(const SystemConfig& cfg) {
  if (cfg.n_t() > cfg.n_ms || cfg.n_r() > cfg.n_bs)
    throw ConfigError("n_b * n_s exceeds the antenna count");
  TrainingPlan plan;
  plan.alpha_f = precoder_scale(cfg);
  plan.alpha_w = combiner_scale(cfg);
  plan.pilot = build_pilot(cfg.n_s);
  plan.f_agg.resize(cfg.n_ms, cfg.n_t());
  plan.w_agg.resize(cfg.n_bs, cfg.n_r());
  for (int j = 1; j <= cfg.n_b_t; ++j) {
    plan.precoders.push_back(build_precoder_block(j, cfg));
    plan.f_agg.middleCols((j - 1) * cfg.n_s, cfg.n_s) = plan.precoders.back().product;
  }
  for (int i = 1; i <= cfg.n_b_r; ++i) {
    plan.combiners.push_back(build_combiner_block(i, cfg));
    plan.w_agg.middleCols((i - 1) * cfg.n_s, cfg.n_s) = plan.combiners.back().product;
  }
  return plan;
}

CMatrix aggregated_pilot(const TrainingPlan& plan) {
  const int n_s = plan.n_s();
  const int t_ms = plan.t_ms();
  CMatrix s_bar = CMatrix::Zero(plan.n_b_t() * n_s, plan.n_b_t() * t_ms);
  for (int j = 0; j < plan.n_b_t(); ++j) s_bar.block(j * n_s, j * t_ms, n_s, t_ms) = plan.pilot;
  return s_bar;
}

CMatrix simulate_uplink(const CMatrix& h, const TrainingPlan& plan, double sigma_n_sq, Rng& rng) {
  if (h.rows() != plan.w_agg.rows() || h.cols() != plan.f_agg.rows())
    throw ConfigError("channel dimensions do not match the training plan");
  const CMatrix s_bar = aggregated_pilot(plan);
  CMatrix y = plan.w_agg.adjoint() * h * plan.f_agg * s_bar;
  if (sigma_n_sq > 0.0) {
    const Eigen::Index n_bs = h.rows();
    const int n_s = plan.n_s();
    // Wbar = diag(W_1, .., W_{n_b_r}); noise block (i, j) is W_i^H N_ij.
    CMatrix noise(plan.n_b_r() * n_bs, s_bar.cols());
    for (Eigen::Index c = 0; c < noise.cols(); ++c)
      for (Eigen::Index r = 0; r < noise.rows(); ++r) noise(r, c) = complex_gaussian(rng, sigma_n_sq);
    for (int i = 0; i < plan.n_b_r(); ++i)
      y.middleRows(i * n_s, n_s).noalias() +=
          plan.combiners[i].product.adjoint() * noise.middleRows(i * n_bs, n_bs);
  }
  return y;
}

EffectiveChannel estimate_effective_channel(const CMatrix& y, const TrainingPlan& plan) {
  const CMatrix s_bar = aggregated_pilot(plan);
  if (y.cols() != s_bar.cols() || y.rows() != plan.n_r())
    throw ConfigError("observation dimensions do not match the training plan");
  EffectiveChannel eff;
  eff.h_bar = y * s_bar.adjoint() / static_cast<double>(plan.n_s());
  eff.scale = plan.alpha_w * plan.alpha_f;
  return eff;
}

}  // namespace mmwce::training
