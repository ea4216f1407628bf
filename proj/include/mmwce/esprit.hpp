#pragma once

#include <optional>
#include <vector>

#include "mmwce/types.hpp"

namespace mmwce::esprit {

struct EspritParams {
  int m1 = 13;  // stacking along the transmit (column) axis, 2 <= m1 <= n_t
  int m2 = 13;  // stacking along the receive (row) axis, 1 <= m2 <= n_r - 1
  int n_paths = 5;
  double delta = 0.5;
};

struct AnglePair {
  double aoa = 0.0;
  double aod = 0.0;
};

struct AngleEstimates {
  // Sorted by ascending AoA; eigenvalues[l] produced pairs[l].
  std::vector<AnglePair> pairs;
  // lambda = tan(pi*delta*sin(-aod)) + j*tan(pi*delta*sin(aoa)).
  std::vector<cdouble> eigenvalues;
  // Leading singular values of the real-valued data matrix (diagnostics).
  RVector singular_values;

  int size() const { return static_cast<int>(pairs.size()); }
  std::vector<double> aoas() const;
  std::vector<double> aods() const;
};

// Real and imaginary parts of the two shift-invariance selection matrices.
struct SelectionMatrices {
  RMatrix theta_re, theta_im;  // m1*(n_r-m2) x m1*(n_r-m2+1)
  RMatrix phi_re, phi_im;      // (m1-1)*(n_r-m2+1) x m1*(n_r-m2+1)
};

// Intermediate products of one estimation, kept for inspection and tests.
struct EspritWorkspace {
  CMatrix hankel;
  CMatrix extended;
  RMatrix real_form;
  SelectionMatrices selections;
  RMatrix u_sig;
  CMatrix psi;
};

// Block (j, i) (j = 1..m1 block row, i = 1..m2 block column) is the
// submatrix of h_bar with rows i..n_r-m2+i and columns j..n_t-m1+j.
CMatrix build_hankel(const CMatrix& h_bar, int m1, int m2);

// [H, J H*] with J the row-reversal exchange matrix.
CMatrix extend_forward_backward(const CMatrix& hankel);

// Sparse unitary left-J-real matrix (J Q* = Q).
CMatrix q_matrix(int n);

// T_L * extended * T_R with T_L = Q_{m1}^H (x) Q_{n_r-m2+1}^H and
// T_R = [I jI; I -jI]. Throws ConsistencyError if the result is not real.
RMatrix real_transform(const CMatrix& extended, int m1, int n_r, int m2);

struct Subspace {
  RMatrix basis;            // rows x L, orthonormal columns
  RVector singular_values;  // all singular values, descending
};

// First L left singular vectors.
Subspace signal_subspace(const RMatrix& real_form, int n_paths);

SelectionMatrices selection_matrices(int m1, int n_r, int m2);

// Decodes paired angles from the complex EVD of
// Psi = (E_phi,R U)^+ (E_phi,I U) + j (E_theta,R U)^+ (E_theta,I U).
AngleEstimates joint_angle_estimation(const RMatrix& u_sig, const SelectionMatrices& sel,
                                      double delta, CMatrix* psi_out = nullptr);

// Full chain: Hankel, extension, real transform, subspace, joint
// diagonalization.
AngleEstimates estimate_angles(const CMatrix& h_bar, const EspritParams& params,
                               EspritWorkspace* workspace = nullptr);

// Model-order hook: the smallest k with sv[k] / sv[k-1] < ratio_threshold,
// or the number of singular values if no such drop exists.
int estimate_model_order(const RVector& singular_values, double ratio_threshold);

}  // namespace mmwce::esprit
