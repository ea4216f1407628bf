#include "mmwce/metrics.hpp"

#include <array>
#include <bit>
#include <cmath>

#include "mmwce/errors.hpp"

namespace mmwce::metrics {

double nmse_ratio(const CMatrix& h_true, const CMatrix& h_est) {
  if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols())
    throw MetricError("NMSE needs matching shapes");
  const double denom = h_true.squaredNorm();
  if (!(denom > 0.0)) throw MetricError("NMSE undefined for a zero channel");
  return (h_true - h_est).squaredNorm() / denom;
}

double ratio_to_db(double ratio) {
  if (ratio < kNmseRatioFloor) return kNmseFloorDb;
  return 10.0 * std::log10(ratio);
}

double nmse_db(const CMatrix& h_true, const CMatrix& h_est) { return ratio_to_db(nmse_ratio(h_true, h_est)); }

SvdBeamformers svd_beamformers(const CMatrix& h_est, int n_rf) {
  if (n_rf < 1 || n_rf > std::min(h_est.rows(), h_est.cols()))
    throw ConfigError("n_rf must lie in 1..min(n_bs, n_ms)");
  // Jacobi: Eigen 3.4.0 complex BDCSVD can crash on low-rank inputs.
  Eigen::JacobiSVD<CMatrix> svd(h_est, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixV().leftCols(n_rf), svd.matrixU().leftCols(n_rf)};
}

double ase(const CMatrix& h_true, const CMatrix& h_est, double sigma_n_sq, int n_rf) {
  return ase(h_true, svd_beamformers(h_est, n_rf), sigma_n_sq);
}

double ase(const CMatrix& h_true, const SvdBeamformers& bf, double sigma_n_sq) {
  const int n_rf = static_cast<int>(bf.f_opt.cols());
  const CMatrix r_n = sigma_n_sq * bf.w_opt.adjoint() * bf.w_opt;
  Eigen::LLT<CMatrix> r_chol(r_n);
  if (!(sigma_n_sq > 0.0) || r_chol.info() != Eigen::Success) throw MetricError("noise covariance is singular");
  const CMatrix g = bf.w_opt.adjoint() * h_true * bf.f_opt;
  const CMatrix m = CMatrix::Identity(n_rf, n_rf) + r_chol.solve(g * g.adjoint()) / static_cast<double>(n_rf);
  // det(I + R^{-1} G G^H) is real and >= 1; the LU determinant carries only
  // round-off in its imaginary part.
  const cdouble det = m.partialPivLu().determinant();
  return std::log2(std::abs(det));
}

namespace {

// Gray mapping per axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
constexpr std::array<double, 4> kLevels = {-3.0, -1.0, 3.0, 1.0};  // indexed by the 2-bit value
const double kQamScale = 1.0 / std::sqrt(10.0);

unsigned slice_axis(double x) {
  if (x < -2.0) return 0b00;
  if (x < 0.0) return 0b01;
  if (x < 2.0) return 0b11;
  return 0b10;
}

}  // namespace

cdouble qam16_modulate(unsigned nibble) {
  return {kLevels[(nibble >> 2) & 3u] * kQamScale, kLevels[nibble & 3u] * kQamScale};
}

unsigned qam16_demodulate(cdouble symbol) {
  return (slice_axis(symbol.real() / kQamScale) << 2) | slice_axis(symbol.imag() / kQamScale);
}

BitErrorCount ber_16qam(const CMatrix& h_true, const CMatrix& h_est, double sigma_n_sq, int n_rf, Rng& rng,
                        int n_symbols) {
  return ber_16qam(h_true, h_est, svd_beamformers(h_est, n_rf), sigma_n_sq, rng, n_symbols);
}

BitErrorCount ber_16qam(const CMatrix& h_true, const CMatrix& h_est, const SvdBeamformers& bf, double sigma_n_sq,
                        Rng& rng, int n_symbols) {
  if (n_symbols < 1) throw ConfigError("BER simulation needs at least one symbol");
  const int n_rf = static_cast<int>(bf.f_opt.cols());
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_rf));
  const CMatrix effective_est = amp * (bf.w_opt.adjoint() * h_est * bf.f_opt);
  Eigen::JacobiSVD<CMatrix> check(effective_est);
  const RVector& sv = check.singularValues();
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) throw EqualizationError("estimated effective channel is singular");
  const Eigen::PartialPivLU<CMatrix> zf(effective_est);
  const CMatrix link = amp * (bf.w_opt.adjoint() * h_true * bf.f_opt);
  const CMatrix w_h = bf.w_opt.adjoint();

  std::uniform_int_distribution<unsigned> nibble_dist(0, 15);
  BitErrorCount count;
  CVector s(n_rf);
  std::vector<unsigned> sent(n_rf);
  CVector noise(h_true.rows());
  for (int t = 0; t < n_symbols; ++t) {
    for (int k = 0; k < n_rf; ++k) {
      sent[k] = nibble_dist(rng);
      s(k) = qam16_modulate(sent[k]);
    }
    for (Eigen::Index a = 0; a < noise.size(); ++a) noise(a) = complex_gaussian(rng, sigma_n_sq);
    const CVector y = link * s + w_h * noise;
    const CVector s_hat = zf.solve(y);
    for (int k = 0; k < n_rf; ++k) {
      const unsigned diff = sent[k] ^ qam16_demodulate(s_hat(k));
      count.errors += static_cast<std::uint64_t>(std::popcount(diff));
    }
    count.bits += 4u * static_cast<std::uint64_t>(n_rf);
  }
  return count;
}

Accounting overhead_and_complexity(const SystemConfig& cfg, const AccountingParams& p) {
  const double l = cfg.n_paths;
  const double k = p.acs_k;
  const double n_rf = cfg.n_rf_bs;
  const double log_k = std::log(p.acs_grid / l) / std::log(k);
  Accounting a;
  a.t_proposed = static_cast<double>(cfg.t_ms()) * cfg.n_b_r * cfg.n_b_t;
  a.t_omp = static_cast<double>(p.omp_beams_t) * p.omp_beams_r / n_rf;
  a.t_acs = k * l * l * (k * l / n_rf) * log_k;
  a.c_proposed = static_cast<double>(cfg.m1) * (cfg.n_r() - cfg.m2 + 1) * l * l;
  const double iters = p.omp_iterations;
  a.c_omp = static_cast<double>(p.omp_beams_t) * p.omp_beams_r * static_cast<double>(p.omp_grid) * p.omp_grid +
            iters * iters * iters * iters;
  a.c_acs = 2.0 * l * std::pow(static_cast<double>(cfg.n_bs), 3) * log_k;
  return a;
}

}  // namespace mmwce::metrics
