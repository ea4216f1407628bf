#include "mmwce/esprit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mmwce/errors.hpp"

namespace mmwce::esprit {

namespace {

constexpr double kRealnessTolerance = 1e-10;

CMatrix exchange_times_conj(const CMatrix& m) { return m.conjugate().colwise().reverse(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Q_{n-1}^H [0 I_{n-1}] Q_n: selection of the last n-1 elements in the
// real-valued domain.
CMatrix transformed_shift(int n) {
  CMatrix sel = CMatrix::Zero(n - 1, n);
  sel.rightCols(n - 1).setIdentity();
  return q_matrix(n - 1).adjoint() * sel * q_matrix(n);
}

// Moore-Penrose solve a^+ b with cutoff max(rows, cols) * eps * sigma_max.
RMatrix pinv_solve(const RMatrix& a, const RMatrix& b, const char* axis) {
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  const Eigen::Index rank = (s.array() > tol).count();
  if (rank < a.cols()) {
    const double smin = s.size() ? s(s.size() - 1) : 0.0;
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    throw RankDeficiencyError(std::string("selected subspace on the ") + axis +
                                  " axis is rank deficient (condition number " +
                                  std::to_string(cond) + ")",
                              cond);
  }
  const RVector inv = s.cwiseInverse();
  return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * b);
}

double decode(double tan_value, double delta, const char* axis) {
  if (!std::isfinite(tan_value)) throw AngleDomainError(std::string("non-finite ") + axis + " eigenvalue");
  const double half_phase = std::atan(tan_value);
  const double limit = kPi * delta;
  if (!(std::abs(half_phase) < limit))
    throw AngleDomainError(std::string(axis) + " eigenvalue maps outside the visible region");
  return std::asin(half_phase / limit);
}

}  // namespace

std::vector<double> AngleEstimates::aoas() const {
  std::vector<double> v;
  for (const auto& p : pairs) v.push_back(p.aoa);
  return v;
}

std::vector<double> AngleEstimates::aods() const {
  std::vector<double> v;
  for (const auto& p : pairs) v.push_back(p.aod);
  return v;
}

CMatrix build_hankel(const CMatrix& h_bar, int m1, int m2) {
  const int n_r = static_cast<int>(h_bar.rows());
  const int n_t = static_cast<int>(h_bar.cols());
  if (m1 < 2 || m1 > n_t) throw ConfigError("m1 must satisfy 2 <= m1 <= n_t");
  if (m2 < 1 || m2 > n_r - 1) throw ConfigError("m2 must satisfy 1 <= m2 <= n_r - 1");
  const int p = n_r - m2 + 1;
  const int q = n_t - m1 + 1;
  CMatrix hankel(m1 * p, m2 * q);
  for (int j = 0; j < m1; ++j)
    for (int i = 0; i < m2; ++i) hankel.block(j * p, i * q, p, q) = h_bar.block(i, j, p, q);
  return hankel;
}

CMatrix extend_forward_backward(const CMatrix& hankel) {
  CMatrix out(hankel.rows(), 2 * hankel.cols());
  out << hankel, exchange_times_conj(hankel);
  return out;
}

CMatrix q_matrix(int n) {
  if (n < 1) throw ConfigError("Q matrix size must be positive");
  const int half = n / 2;
  const double r = 1.0 / std::sqrt(2.0);
  const cdouble j(0.0, 1.0);
  CMatrix q = CMatrix::Zero(n, n);
  for (int k = 0; k < half; ++k) {
    q(k, k) = r;
    q(k, n - half + k) = j * r;
    q(n - 1 - k, k) = r;
    q(n - 1 - k, n - half + k) = -j * r;
  }
  if (n % 2 == 1) q(half, half) = 1.0;
  return q;
}

RMatrix real_transform(const CMatrix& extended, int m1, int n_r, int m2) {
  const int p = n_r - m2 + 1;
  if (m1 < 1 || p < 1 || extended.rows() != static_cast<Eigen::Index>(m1) * p || extended.cols() % 2 != 0)
    throw ConfigError("extended matrix does not match the transform dimensions");
  const Eigen::Index half = extended.cols() / 2;

  // Right factor T_R acts on the column halves [A, B] -> [A + B, j(A - B)].
  CMatrix x(extended.rows(), extended.cols());
  x.leftCols(half) = extended.leftCols(half) + extended.rightCols(half);
  x.rightCols(half) = cdouble(0.0, 1.0) * (extended.leftCols(half) - extended.rightCols(half));

  // Left factor (A (x) B) applied blockwise: B on every p-row block, then A
  // mixes the blocks.
  const CMatrix qa = q_matrix(m1).adjoint();
  const CMatrix qb = q_matrix(p).adjoint();
  for (int blk = 0; blk < m1; ++blk) x.middleRows(blk * p, p) = qb * x.middleRows(blk * p, p);
  CMatrix y = CMatrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < m1; ++i)
    for (int k = 0; k < m1; ++k)
      if (qa(i, k) != cdouble(0.0)) y.middleRows(i * p, p) += qa(i, k) * x.middleRows(k * p, p);

  const double fro = y.norm();
  const double imag_max = y.imag().cwiseAbs().maxCoeff();
  if (fro > 0.0 && imag_max > kRealnessTolerance * fro)
    throw ConsistencyError("real transform left an imaginary residue of " + std::to_string(imag_max / fro));
  return y.real();
}

Subspace signal_subspace(const RMatrix& real_form, int n_paths) {
  if (n_paths < 1 || n_paths > std::min(real_form.rows(), real_form.cols()))
    throw ConfigError("path count exceeds the dimensions of the data matrix");
  Eigen::BDCSVD<RMatrix> svd(real_form, Eigen::ComputeThinU);
  if (!(svd.singularValues()(0) > 0.0))
    throw RankDeficiencyError("data matrix is zero", std::numeric_limits<double>::infinity());
  return {svd.matrixU().leftCols(n_paths), svd.singularValues()};
}

SelectionMatrices selection_matrices(int m1, int n_r, int m2) {
  const int p = n_r - m2 + 1;
  if (m1 < 2) throw ConfigError("selection matrices need m1 >= 2");
  if (p < 2) throw ConfigError("selection matrices need n_r - m2 >= 1");
  const CMatrix e_theta = kron(CMatrix::Identity(m1, m1), transformed_shift(p));
  const CMatrix e_phi = kron(transformed_shift(m1), CMatrix::Identity(p, p));
  return {e_theta.real(), e_theta.imag(), e_phi.real(), e_phi.imag()};
}

AngleEstimates joint_angle_estimation(const RMatrix& u_sig, const SelectionMatrices& sel, double delta,
                                      CMatrix* psi_out) {
  const RMatrix phi_part = pinv_solve(sel.phi_re * u_sig, sel.phi_im * u_sig, "AoD");
  const RMatrix theta_part = pinv_solve(sel.theta_re * u_sig, sel.theta_im * u_sig, "AoA");
  CMatrix psi(phi_part.rows(), phi_part.cols());
  psi.real() = phi_part;
  psi.imag() = theta_part;
  if (psi_out) *psi_out = psi;

  Eigen::ComplexEigenSolver<CMatrix> evd(psi, /*computeEigenvectors=*/false);
  if (evd.info() != Eigen::Success) throw RankDeficiencyError("eigen decomposition did not converge", 0.0);
  const CVector& lambda = evd.eigenvalues();

  AngleEstimates est;
  for (Eigen::Index l = 0; l < lambda.size(); ++l) {
    // The transmit phase enters through a_MS^H, so the m1-axis shift carries
    // exp(-j*2*pi*delta*sin(aod)); the real part therefore decodes -aod.
    const double aoa = decode(lambda(l).imag(), delta, "AoA");
    const double aod = -decode(lambda(l).real(), delta, "AoD");
    est.pairs.push_back({aoa, aod});
    est.eigenvalues.push_back(lambda(l));
  }
  std::vector<std::size_t> order(est.pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return est.pairs[a].aoa < est.pairs[b].aoa; });
  AngleEstimates sorted;
  for (std::size_t k : order) {
    sorted.pairs.push_back(est.pairs[k]);
    sorted.eigenvalues.push_back(est.eigenvalues[k]);
  }
  return sorted;
}

AngleEstimates estimate_angles(const CMatrix& h_bar, const EspritParams& params, EspritWorkspace* workspace) {
  const int n_r = static_cast<int>(h_bar.rows());
  EspritWorkspace local;
  EspritWorkspace& ws = workspace ? *workspace : local;
  ws.hankel = build_hankel(h_bar, params.m1, params.m2);
  ws.extended = extend_forward_backward(ws.hankel);
  ws.real_form = real_transform(ws.extended, params.m1, n_r, params.m2);
  Subspace sub = signal_subspace(ws.real_form, params.n_paths);
  ws.u_sig = std::move(sub.basis);
  ws.selections = selection_matrices(params.m1, n_r, params.m2);
  AngleEstimates est = joint_angle_estimation(ws.u_sig, ws.selections, params.delta, &ws.psi);
  const Eigen::Index keep = std::min<Eigen::Index>(sub.singular_values.size(), 2 * params.n_paths + 1);
  est.singular_values = sub.singular_values.head(keep);
  return est;
}

int estimate_model_order(const RVector& sv, double ratio_threshold) {
  for (Eigen::Index k = 1; k < sv.size(); ++k) {
    if (sv(k - 1) <= 0.0 || sv(k) / sv(k - 1) < ratio_threshold) return static_cast<int>(k);
  }
  return static_cast<int>(sv.size());
}

}  // namespace mmwce::esprit
