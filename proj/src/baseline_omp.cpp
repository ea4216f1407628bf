#include "mmwce/baseline_omp.hpp"

#include <cmath>
#include <string>

#include "mmwce/channel_model.hpp"
#include "mmwce/errors.hpp"

namespace mmwce::omp {

namespace {

constexpr double kResidualFloor = 1e-13;
constexpr double kDependenceTolerance = 1e-10;

}  // namespace

CVector GridDictionary::atom(int p, int q) const {
  const Eigen::Index n_r = rx.rows();
  CVector a(n_r * tx.rows());
  for (Eigen::Index c = 0; c < tx.rows(); ++c) a.segment(c * n_r, n_r) = std::conj(tx(c, q)) * rx.col(p);
  return a / (rx_norm(p) * tx_norm(q));
}

GridDictionary build_dictionary(const SystemConfig& cfg, int g, const training::TrainingPlan& plan) {
  if (g < 2) throw ConfigError("OMP grid needs at least two points");
  GridDictionary d;
  d.g = g;
  d.n_bs = cfg.n_bs;
  d.n_ms = cfg.n_ms;
  d.delta = cfg.delta;
  const double s_max = std::sin(cfg.angle_range);
  for (int k = 0; k < g; ++k) {
    const double s = -s_max + 2.0 * s_max * k / (g - 1);
    d.virtual_aoa.push_back(std::asin(s));
  }
  d.virtual_aod = d.virtual_aoa;
  d.rx = plan.w_agg.adjoint() * channel::steering_matrix(d.virtual_aoa, cfg.n_bs, cfg.delta);
  d.tx = plan.f_agg.adjoint() * channel::steering_matrix(d.virtual_aod, cfg.n_ms, cfg.delta);
  d.rx_norm = d.rx.colwise().norm().transpose();
  d.tx_norm = d.tx.colwise().norm().transpose();
  return d;
}

RMatrix correlate(const GridDictionary& dict, const CMatrix& residual) {
  const CMatrix c = dict.rx.adjoint() * (residual * dict.tx);
  RMatrix out = c.cwiseAbs();
  out.array().colwise() /= dict.rx_norm.array();
  out.array().rowwise() /= dict.tx_norm.transpose().array();
  return out;
}

OmpResult omp_estimate_detailed(const training::EffectiveChannel& eff, const GridDictionary& dict, int n_iter) {
  if (n_iter < 0 || n_iter > dict.atom_count()) throw ConfigError("OMP iteration count outside 0..G^2");
  const Eigen::Index n_r = eff.h_bar.rows();
  const Eigen::Index n_t = eff.h_bar.cols();
  if (n_r != dict.rx.rows() || n_t != dict.tx.rows())
    throw ConfigError("effective channel does not match the dictionary");

  const Eigen::Map<const CVector> y(eff.h_bar.data(), eff.h_bar.size());
  const double y_norm = y.norm();

  OmpResult res;
  CMatrix basis(y.size(), 0);  // orthonormal basis of the selected atoms
  CMatrix r_factor(0, 0);      // atoms = basis * r_factor
  CVector residual = y;
  res.residual_norms.push_back(residual.norm());

  for (int it = 0; it < n_iter; ++it) {
    if (residual.norm() <= kResidualFloor * y_norm) break;
    const Eigen::Map<const CMatrix> r_mat(residual.data(), n_r, n_t);
    RMatrix corr = correlate(dict, r_mat);
    for (auto [p, q] : res.support) corr(p, q) = -1.0;
    Eigen::Index p = 0;
    Eigen::Index q = 0;
    corr.maxCoeff(&p, &q);

    // Gram-Schmidt with one reorthogonalization pass.
    const CVector a = dict.atom(static_cast<int>(p), static_cast<int>(q));
    CVector v = a;
    CVector coeff = CVector::Zero(basis.cols());
    for (int pass = 0; pass < 2; ++pass) {
      const CVector c = basis.adjoint() * v;
      v -= basis * c;
      coeff += c;
    }
    const double rkk = v.norm();
    if (rkk < kDependenceTolerance) {
      std::vector<std::pair<int, int>> atoms(res.support.begin(), res.support.end());
      atoms.emplace_back(static_cast<int>(p), static_cast<int>(q));
      throw SingularityError("OMP support became linearly dependent at iteration " + std::to_string(it + 1),
                             atoms);
    }
    const Eigen::Index k = basis.cols();
    basis.conservativeResize(Eigen::NoChange, k + 1);
    basis.col(k) = v / rkk;
    r_factor.conservativeResize(k + 1, k + 1);
    r_factor.row(k).setZero();
    r_factor.col(k).head(k) = coeff;
    r_factor(k, k) = rkk;

    res.support.emplace_back(static_cast<int>(p), static_cast<int>(q));
    residual = y - basis * (basis.adjoint() * y);
    res.residual_norms.push_back(residual.norm());
  }

  const int k = static_cast<int>(res.support.size());
  CVector x = CVector::Zero(k);
  if (k > 0) x = r_factor.triangularView<Eigen::Upper>().solve(basis.adjoint() * y);

  std::vector<double> aoa, aod;
  CVector d(k);
  for (int s = 0; s < k; ++s) {
    const auto [p, q] = res.support[s];
    aoa.push_back(dict.virtual_aoa[p]);
    aod.push_back(dict.virtual_aod[q]);
    d(s) = x(s) / (dict.rx_norm(p) * dict.tx_norm(q));
  }
  auto& est = res.estimate;
  est.d_hat = d;
  est.a_bs_hat = channel::steering_matrix(aoa, dict.n_bs, dict.delta);
  est.a_ms_hat = channel::steering_matrix(aod, dict.n_ms, dict.delta);
  est.h_hat = k > 0 ? CMatrix(est.a_bs_hat * d.asDiagonal() * est.a_ms_hat.adjoint())
                    : CMatrix(CMatrix::Zero(dict.n_bs, dict.n_ms));
  return res;
}

reconstruction::ChannelEstimate omp_estimate(const training::EffectiveChannel& eff, const GridDictionary& dict,
                                             int n_iter) {
  return omp_estimate_detailed(eff, dict, n_iter).estimate;
}

}  // namespace mmwce::omp
