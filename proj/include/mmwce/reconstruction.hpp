#pragma once

#include "mmwce/config.hpp"
#include "mmwce/esprit.hpp"
#include "mmwce/training.hpp"
#include "mmwce/types.hpp"

namespace mmwce::reconstruction {

struct ChannelEstimate {
  CMatrix h_hat;     // n_bs x n_ms
  CVector d_hat;     // scaled gains sqrt(n_bs*n_ms/L) * alpha_l
  CMatrix a_bs_hat;  // n_bs x L
  CMatrix a_ms_hat;  // n_ms x L
};

// Pairs closer than this in both AoA and AoD are treated as one scatterer.
inline constexpr double kDuplicateAngleTolerance = 1e-6;

// Z = (A_ms^H F)^T (Khatri-Rao) (W^H A_bs); column l is
// conj(F^H a_ms_l) (x) (W^H a_bs_l), so vec(h_bar) = Z d.
CMatrix measurement_matrix(const esprit::AngleEstimates& angles, const training::TrainingPlan& plan,
                           const SystemConfig& cfg);

// argmin_d |vec(h_bar) - Z d|_2 through a pivoted QR. Throws SingularityError
// on duplicate angle pairs or a rank-deficient Z.
CVector estimate_gains(const training::EffectiveChannel& eff, const esprit::AngleEstimates& angles,
                       const training::TrainingPlan& plan, const SystemConfig& cfg);

// H_hat = A_bs diag(d) A_ms^H at the estimated angles.
ChannelEstimate reconstruct_channel(const esprit::AngleEstimates& angles, const CVector& d_hat,
                                    const SystemConfig& cfg);

}  // namespace mmwce::reconstruction
