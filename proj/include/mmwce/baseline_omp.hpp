#pragma once

#include <utility>
#include <vector>

#include "mmwce/config.hpp"
#include "mmwce/reconstruction.hpp"
#include "mmwce/training.hpp"
#include "mmwce/types.hpp"

namespace mmwce::omp {

// Grid dictionary over (AoA, AoD) pairs, uniform in the sine domain on
// [-sin(angle_range), sin(angle_range)].
//
// Atom (p, q) is the unit-normalized vec(W^H a_bs(aoa_p) a_ms(aod_q)^H F)
// = conj(tx_q) (x) rx_p / (|rx_p| |tx_q|). The G^2 atoms are never stored:
// the dictionary keeps the receive and transmit factors, and correlations
// against a residual R reduce to rx^H R tx.
struct GridDictionary {
  int g = 0;
  std::vector<double> virtual_aoa;
  std::vector<double> virtual_aod;
  CMatrix rx;  // n_r x G, W^H A_bs,grid
  CMatrix tx;  // n_t x G, F^H A_ms,grid
  RVector rx_norm;
  RVector tx_norm;
  int n_bs = 0;
  int n_ms = 0;
  double delta = 0.5;

  int atom_count() const { return g * g; }
  // Atom index k = q * g + p.
  CVector atom(int p, int q) const;
};

GridDictionary build_dictionary(const SystemConfig& cfg, int g, const training::TrainingPlan& plan);

struct OmpResult {
  reconstruction::ChannelEstimate estimate;
  std::vector<std::pair<int, int>> support;  // (aoa index, aod index) in selection order
  std::vector<double> residual_norms;        // |r| before the first and after every iteration
};

// Normalized correlation |atom^H vec(R)| for every grid pair, as a G x G
// matrix indexed (aoa, aod).
RMatrix correlate(const GridDictionary& dict, const CMatrix& residual);

// Greedy selection with a least-squares refit on the support after every
// iteration. Stops early once the residual vanishes.
OmpResult omp_estimate_detailed(const training::EffectiveChannel& eff, const GridDictionary& dict, int n_iter);

reconstruction::ChannelEstimate omp_estimate(const training::EffectiveChannel& eff, const GridDictionary& dict,
                                             int n_iter);

}  // namespace mmwce::omp
