#include "mmwce/reconstruction.hpp"

#include <cmath>
#include <string>

#include "mmwce/channel_model.hpp"
#include "mmwce/errors.hpp"

namespace mmwce::reconstruction {

CMatrix measurement_matrix(const esprit::AngleEstimates& angles, const training::TrainingPlan& plan,
                           const SystemConfig& cfg) {
  const std::vector<double> aoa = angles.aoas();
  const std::vector<double> aod = angles.aods();
  const CMatrix rx = plan.w_agg.adjoint() * channel::steering_matrix(aoa, cfg.n_bs, cfg.delta);
  const CMatrix tx = (channel::steering_matrix(aod, cfg.n_ms, cfg.delta).adjoint() * plan.f_agg).transpose();
  CMatrix z(rx.rows() * tx.rows(), angles.size());
  for (int l = 0; l < angles.size(); ++l)
    for (Eigen::Index c = 0; c < tx.rows(); ++c) z.col(l).segment(c * rx.rows(), rx.rows()) = tx(c, l) * rx.col(l);
  return z;
}

CVector estimate_gains(const training::EffectiveChannel& eff, const esprit::AngleEstimates& angles,
                       const training::TrainingPlan& plan, const SystemConfig& cfg) {
  const int n_paths = angles.size();
  if (n_paths < 1) throw ConfigError("gain estimation needs at least one path");

  std::vector<std::pair<int, int>> colliding;
  for (int a = 0; a < n_paths; ++a)
    for (int b = a + 1; b < n_paths; ++b)
      if (std::abs(angles.pairs[a].aoa - angles.pairs[b].aoa) < kDuplicateAngleTolerance &&
          std::abs(angles.pairs[a].aod - angles.pairs[b].aod) < kDuplicateAngleTolerance)
        colliding.emplace_back(a, b);
  if (!colliding.empty()) {
    std::string names;
    for (auto [a, b] : colliding) names += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    throw SingularityError("duplicate estimated angle pairs:" + names, colliding);
  }

  const CMatrix z = measurement_matrix(angles, plan, cfg);
  const Eigen::Map<const CVector> h_vec(eff.h_bar.data(), eff.h_bar.size());
  if (z.rows() != h_vec.size()) throw ConfigError("effective channel does not match the training plan");

  Eigen::ColPivHouseholderQR<CMatrix> qr(z);
  if (qr.rank() < n_paths) {
    const auto& perm = qr.colsPermutation().indices();
    std::vector<std::pair<int, int>> dependent;
    for (Eigen::Index k = qr.rank(); k < n_paths; ++k) dependent.emplace_back(perm(k), perm(k));
    throw SingularityError("measurement matrix is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                               std::to_string(n_paths) + ")",
                           dependent);
  }
  return qr.solve(h_vec);
}

ChannelEstimate reconstruct_channel(const esprit::AngleEstimates& angles, const CVector& d_hat,
                                    const SystemConfig& cfg) {
  if (angles.size() != d_hat.size()) throw ConfigError("angle and gain counts differ");
  ChannelEstimate est;
  est.d_hat = d_hat;
  est.a_bs_hat = channel::steering_matrix(angles.aoas(), cfg.n_bs, cfg.delta);
  est.a_ms_hat = channel::steering_matrix(angles.aods(), cfg.n_ms, cfg.delta);
  est.h_hat = est.a_bs_hat * d_hat.asDiagonal() * est.a_ms_hat.adjoint();
  return est;
}

}  // namespace mmwce::reconstruction
