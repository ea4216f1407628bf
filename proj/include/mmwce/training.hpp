#pragma once

#include <vector>

#include "mmwce/config.hpp"
#include "mmwce/rng.hpp"
#include "mmwce/types.hpp"

namespace mmwce::training {

// Hybrid factors of one training block: analog (constant modulus) part,
// digital part and their product.
struct HybridBlock {
  CMatrix rf;
  CMatrix bb;
  CMatrix product;
};

// Training design shared by every trial of a configuration. Immutable once
// built.
struct TrainingPlan {
  CMatrix f_agg;  // n_ms x n_b_t*n_s, alpha_f * [I; O]
  CMatrix w_agg;  // n_bs x n_b_r*n_s, alpha_w * [I; O]
  CMatrix pilot;  // n_s x n_s, pilot * pilot^H = n_s * I
  double alpha_f = 0.0;
  double alpha_w = 0.0;
  std::vector<HybridBlock> precoders;  // j = 1..n_b_t
  std::vector<HybridBlock> combiners;  // i = 1..n_b_r

  int n_s() const { return static_cast<int>(pilot.rows()); }
  int t_ms() const { return static_cast<int>(pilot.cols()); }
  int n_r() const { return static_cast<int>(w_agg.cols()); }
  int n_t() const { return static_cast<int>(f_agg.cols()); }
  int n_b_r() const { return static_cast<int>(combiners.size()); }
  int n_b_t() const { return static_cast<int>(precoders.size()); }
  // Total pilot symbols T = t_ms * n_b_r * n_b_t.
  int pilot_overhead() const { return t_ms() * n_b_r() * n_b_t(); }
};

// Low-dimensional effective channel recovered from the training observation.
struct EffectiveChannel {
  CMatrix h_bar;       // n_r x n_t
  double scale = 1.0;  // alpha_w * alpha_f carried inside h_bar
};

// Unnormalized n x n DFT matrix, entries exp(-j*2*pi*m*k/n).
CMatrix dft_matrix(int n);

// Scaled-unitary pilot block (DFT), S * S^H = n_s * I.
CMatrix build_pilot(int n_s);

// Block j is 1-based. The product equals alpha_f * [O; I_{n_s}; O] with the
// identity on rows (j-1)*n_s .. j*n_s-1.
HybridBlock build_precoder_block(int j, const SystemConfig& cfg);
HybridBlock build_combiner_block(int i, const SystemConfig& cfg);

double precoder_scale(const SystemConfig& cfg);  // sqrt(n_rf_ms / n_s)
double combiner_scale(const SystemConfig& cfg);  // n_rf_bs / sqrt(n_bs)

TrainingPlan aggregate_training(const SystemConfig& cfg);

// Block-diagonal repetition of the pilot, n_b_t*n_s x n_b_t*t_ms.
CMatrix aggregated_pilot(const TrainingPlan& plan);

// Y = W^H H F Sbar + Wbar^H N with N i.i.d. CN(0, sigma_n_sq) at the BS
// antennas of every block.
CMatrix simulate_uplink(const CMatrix& h, const TrainingPlan& plan, double sigma_n_sq, Rng& rng);

// LS estimate h_bar = Y Sbar^H / n_s.
EffectiveChannel estimate_effective_channel(const CMatrix& y, const TrainingPlan& plan);

}  // namespace mmwce::training
