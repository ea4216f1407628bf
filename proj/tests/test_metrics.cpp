#include "doctest.h"
#include "mmwce/channel_model.hpp"
#include "mmwce/errors.hpp"
#include "mmwce/esprit.hpp"
#include "mmwce/metrics.hpp"
#include "mmwce/reconstruction.hpp"
#include "mmwce/training.hpp"
#include "oracles.hpp"

using namespace mmwce;

namespace {

CMatrix draw_channel(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t trial) {
  Rng rng = make_stream(seed, StreamTag::kPaths, trial);
  return channel::assemble_channel(channel::draw_paths(cfg, rng), cfg);
}

}  // namespace

TEST_CASE("NMSE hand cases") {
  const CMatrix h = draw_channel(SystemConfig{}, 1, 0);
  CHECK(metrics::nmse_db(h, h) == metrics::kNmseFloorDb);
  CHECK(metrics::nmse_db(h, CMatrix::Zero(64, 64)) == doctest::Approx(0.0));
  CHECK(metrics::nmse_db(h, 2.0 * h) == doctest::Approx(0.0));
  CHECK(metrics::nmse_ratio(h, 0.9 * h) == doctest::Approx(0.01));
  CHECK(metrics::nmse_ratio(h, 0.5 * h) == doctest::Approx(oracle::nmse_ratio(h, 0.5 * h)));
  CHECK(metrics::ratio_to_db(1e-31) == -300.0);
  CHECK(metrics::ratio_to_db(1e-3) == doctest::Approx(-30.0));
  CHECK_THROWS_AS(metrics::nmse_ratio(CMatrix::Zero(4, 4), CMatrix::Ones(4, 4)), MetricError);
}

TEST_CASE("ASE of a single path with perfect CSI") {
  SystemConfig cfg;
  cfg.n_paths = 1;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const CMatrix h = draw_channel(cfg, 2, t);
    const double s1 = Eigen::JacobiSVD<CMatrix>(h).singularValues()(0);
    for (int n_rf : {1, 4}) CHECK(std::abs(metrics::ase(h, h, 1.0, n_rf) - std::log2(1.0 + s1 * s1 / n_rf)) < 1e-9);
  }
}

TEST_CASE("ASE of a zero channel is zero") {
  const CMatrix h_est = draw_channel(SystemConfig{}, 3, 0);
  CHECK(metrics::ase(CMatrix::Zero(64, 64), h_est, 0.5, 4) == doctest::Approx(0.0));
}

TEST_CASE("perfect CSI upper-bounds the estimated ASE on average") {
  const SystemConfig cfg;
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  const double sigma_sq = 1.0;  // 0 dB
  double perfect = 0.0, estimated = 0.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const CMatrix h = draw_channel(cfg, 4, t);
    Rng noise = make_stream(4, StreamTag::kUplinkNoise, t);
    const training::EffectiveChannel eff =
        training::estimate_effective_channel(training::simulate_uplink(h, plan, sigma_sq, noise), plan);
    const esprit::AngleEstimates ang = esprit::estimate_angles(eff.h_bar, {13, 13, 5, 0.5});
    const CMatrix h_hat =
        reconstruction::reconstruct_channel(ang, reconstruction::estimate_gains(eff, ang, plan, cfg), cfg).h_hat;
    perfect += metrics::ase(h, h, sigma_sq, 4);
    estimated += metrics::ase(h, h_hat, sigma_sq, 4);
  }
  CHECK(perfect >= estimated);
}

TEST_CASE("Gray 16-QAM round trip and unit energy") {
  double energy = 0.0;
  for (unsigned n = 0; n < 16; ++n) {
    const cdouble s = metrics::qam16_modulate(n);
    energy += std::norm(s);
    CHECK(metrics::qam16_demodulate(s) == n);
    // Gray property: horizontal and vertical neighbours differ in one bit.
    for (unsigned m = 0; m < 16; ++m) {
      const double dist = std::abs(s - metrics::qam16_modulate(m)) * std::sqrt(10.0);
      if (std::abs(dist - 2.0) < 1e-9) CHECK(std::popcount(n ^ m) == 1);
    }
  }
  CHECK(energy / 16 == doctest::Approx(1.0));
}

TEST_CASE("BER limits") {
  const SystemConfig cfg;
  const CMatrix h = draw_channel(cfg, 5, 0);
  Rng rng(1);
  CHECK(metrics::ber_16qam(h, h, 1e-12, 4, rng, 1000).errors == 0);

  Rng noisy(2);
  const metrics::BitErrorCount c = metrics::ber_16qam(h, h, 1e12, 4, noisy, 6250);
  CHECK(c.bits == 100000);
  CHECK(std::abs(c.rate() - 0.5) < 0.02);
}

TEST_CASE("BER refuses a singular estimated link") {
  SystemConfig cfg;
  cfg.n_paths = 1;
  const CMatrix h_est = draw_channel(cfg, 6, 0);  // rank one, four streams
  Rng rng(0);
  CHECK_THROWS_AS(metrics::ber_16qam(h_est, h_est, 0.1, 4, rng, 10), EqualizationError);
}

TEST_CASE("accounting for the reference configuration") {
  SystemConfig cfg;
  const metrics::Accounting a = metrics::overhead_and_complexity(cfg);
  CHECK(a.t_proposed == 300);
  CHECK(a.t_omp == 576);
  CHECK(a.t_acs == doctest::Approx(1500));
  CHECK(a.c_proposed == 5850);
  CHECK(a.c_omp == 48.0 * 48 * 150 * 150 + 50.0 * 50 * 50 * 50);
  CHECK(a.c_acs == doctest::Approx(2.0 * 5 * 64 * 64 * 64 * 3.0));
  cfg.n_paths = 10;
  const metrics::Accounting b = metrics::overhead_and_complexity(cfg);
  CHECK(b.t_acs == doctest::Approx(4.0 * 100 * 10 * 2.5));
}
