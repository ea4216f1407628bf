#pragma once

#include <cstdint>

#include "mmwce/config.hpp"
#include "mmwce/rng.hpp"
#include "mmwce/types.hpp"

namespace mmwce::metrics {

// Ratios below this clamp to kNmseFloorDb so reports stay finite.
inline constexpr double kNmseRatioFloor = 1e-30;
inline constexpr double kNmseFloorDb = -300.0;

// |H - H_hat|_F^2 / |H|_F^2. Throws MetricError for a zero true channel.
double nmse_ratio(const CMatrix& h_true, const CMatrix& h_est);

// 10 log10(ratio) with the floor sentinel.
double ratio_to_db(double ratio);

double nmse_db(const CMatrix& h_true, const CMatrix& h_est);

// Precoder (first n_rf right singular vectors) and combiner (first n_rf left
// singular vectors) of a channel estimate.
struct SvdBeamformers {
  CMatrix f_opt;  // n_ms x n_rf
  CMatrix w_opt;  // n_bs x n_rf
};

SvdBeamformers svd_beamformers(const CMatrix& h_est, int n_rf);

// log2 det(I + R_n^{-1} W^H H F F^H H^H W / n_rf), R_n = sigma_n_sq W^H W,
// with F and W taken from the estimate and H the true channel.
double ase(const CMatrix& h_true, const CMatrix& h_est, double sigma_n_sq, int n_rf);
double ase(const CMatrix& h_true, const SvdBeamformers& beamformers, double sigma_n_sq);

struct BitErrorCount {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;

  double rate() const { return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
};

// Gray-coded unit-energy 16-QAM (I and Q each carry two bits).
cdouble qam16_modulate(unsigned nibble);
unsigned qam16_demodulate(cdouble symbol);

// n_rf 16-QAM streams at power 1/n_rf each through F_opt, the true channel,
// AWGN at the BS antennas and W_opt; zero-forcing on W_opt^H H_hat F_opt and
// hard decisions. n_symbols symbol vectors are sent.
BitErrorCount ber_16qam(const CMatrix& h_true, const CMatrix& h_est, double sigma_n_sq, int n_rf, Rng& rng,
                        int n_symbols);
// Same, reusing beamformers already derived from h_est.
BitErrorCount ber_16qam(const CMatrix& h_true, const CMatrix& h_est, const SvdBeamformers& beamformers,
                        double sigma_n_sq, Rng& rng, int n_symbols);

// Constants of the comparison schemes that enter the accounting formulas.
struct AccountingParams {
  int acs_k = 4;          // beamforming vectors per ACS stage
  int acs_grid = 320;     // G_ACS
  int omp_beams_t = 48;   // N_T^Beam
  int omp_beams_r = 48;   // N_R^Beam
  int omp_grid = 150;     // G_OMP
  int omp_iterations = 50;  // |I_t|
};

struct Accounting {
  double t_proposed = 0;
  double t_omp = 0;
  double t_acs = 0;
  double c_proposed = 0;
  double c_omp = 0;
  double c_acs = 0;

  double ratio_acs() const { return c_proposed / c_acs; }
  double ratio_omp() const { return c_proposed / c_omp; }
};

// Pilot overheads and modeled operation counts. The RF-chain count is the
// BS one.
Accounting overhead_and_complexity(const SystemConfig& cfg, const AccountingParams& params = {});

}  // namespace mmwce::metrics
