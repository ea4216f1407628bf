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

constexpr double kDeg = kPi / 180.0;

struct Planted {
  SystemConfig cfg;
  training::TrainingPlan plan;
  channel::PathSet paths;
  CMatrix h;
  training::EffectiveChannel eff;
  esprit::AngleEstimates truth;  // true angles in AngleEstimates form
  CVector d_true;
};

Planted plant(int n_paths, unsigned seed) {
  Planted p;
  p.cfg.n_paths = n_paths;
  p.plan = training::aggregate_training(p.cfg);
  p.paths.aoa = oracle::spread_angles(n_paths, kPi / 3, 2 * kDeg, seed);
  p.paths.aod = oracle::spread_angles(n_paths, kPi / 3, 2 * kDeg, seed + 1000u);
  Rng rng = make_stream(seed, StreamTag::kPaths, 0);
  for (int l = 0; l < n_paths; ++l) p.paths.gains.push_back(complex_gaussian(rng, 1.0));
  p.h = channel::assemble_channel(p.paths, p.cfg);
  Rng noise(0);
  p.eff = training::estimate_effective_channel(training::simulate_uplink(p.h, p.plan, 0.0, noise), p.plan);
  p.d_true.resize(n_paths);
  for (int l = 0; l < n_paths; ++l) {
    p.truth.pairs.push_back({p.paths.aoa[l], p.paths.aod[l]});
    p.d_true(l) = std::sqrt(64.0 * 64.0 / n_paths) * p.paths.gains[l];
  }
  return p;
}

}  // namespace

TEST_CASE("plant and recover gains from true angles") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const Planted p = plant(5, seed);
    const CVector d = reconstruction::estimate_gains(p.eff, p.truth, p.plan, p.cfg);
    for (int l = 0; l < 5; ++l) CHECK(std::abs(d(l) - p.d_true(l)) / std::abs(p.d_true(l)) < 1e-10);
  }
}

TEST_CASE("measurement matrix column is a Kronecker product") {
  const Planted p = plant(3, 4);
  const CMatrix z = reconstruction::measurement_matrix(p.truth, p.plan, p.cfg);
  CHECK(z.rows() == 900);
  for (int l = 0; l < 3; ++l) {
    const CVector rx = p.plan.w_agg.adjoint() * oracle::steering(p.paths.aoa[l], 64, 0.5);
    const CVector tx = p.plan.f_agg.adjoint() * oracle::steering(p.paths.aod[l], 64, 0.5);
    CHECK((z.col(l) - oracle::kron(tx.conjugate(), rx)).norm() < 1e-13);
  }
}

TEST_CASE("single broadside path") {
  SystemConfig cfg;
  cfg.n_paths = 1;
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  channel::PathSet paths{{0.0}, {0.0}, {cdouble(1.0, 0.0)}};
  Rng rng(0);
  const CMatrix y = training::simulate_uplink(channel::assemble_channel(paths, cfg), plan, 0.0, rng);
  esprit::AngleEstimates truth;
  truth.pairs.push_back({0.0, 0.0});
  const CVector d = reconstruction::estimate_gains(training::estimate_effective_channel(y, plan), truth, plan, cfg);
  CHECK(std::abs(d(0) - cdouble(64.0, 0.0)) < 1e-10);
}

TEST_CASE("least-squares gains beat random alternatives") {
  const Planted base = plant(5, 7);
  training::EffectiveChannel eff = base.eff;
  Rng rng(17);
  for (Eigen::Index k = 0; k < eff.h_bar.size(); ++k) eff.h_bar(k) += complex_gaussian(rng, 0.1);
  const CMatrix z = reconstruction::measurement_matrix(base.truth, base.plan, base.cfg);
  const Eigen::Map<const CVector> y(eff.h_bar.data(), eff.h_bar.size());
  const CVector d = reconstruction::estimate_gains(eff, base.truth, base.plan, base.cfg);
  const double best = (y - z * d).norm();
  for (int t = 0; t < 100; ++t) {
    CVector alt = d;
    for (Eigen::Index l = 0; l < alt.size(); ++l) alt(l) += complex_gaussian(rng, t < 50 ? 1e-6 : 10.0);
    CHECK(best <= (y - z * alt).norm());
  }
}

TEST_CASE("round trip and zero gains") {
  const Planted p = plant(5, 9);
  const reconstruction::ChannelEstimate est = reconstruction::reconstruct_channel(p.truth, p.d_true, p.cfg);
  CHECK((est.h_hat - p.h).norm() / p.h.norm() < 1e-10);
  const CVector zero = CVector::Zero(5);
  CHECK(reconstruction::reconstruct_channel(p.truth, zero, p.cfg).h_hat.norm() == 0.0);
}

TEST_CASE("noiseless pipeline is exact") {
  for (unsigned seed = 30; seed < 40; ++seed) {
    const Planted p = plant(5, seed);
    const esprit::AngleEstimates est = esprit::estimate_angles(p.eff.h_bar, {13, 13, 5, 0.5});
    const CVector d = reconstruction::estimate_gains(p.eff, est, p.plan, p.cfg);
    const CMatrix h_hat = reconstruction::reconstruct_channel(est, d, p.cfg).h_hat;
    CHECK(metrics::nmse_db(p.h, h_hat) < -100.0);
    CHECK((h_hat - p.h).norm() / p.h.norm() < 1e-8);
  }
}

TEST_CASE("duplicate angle pairs are reported") {
  const Planted p = plant(3, 11);
  esprit::AngleEstimates dup = p.truth;
  dup.pairs[2] = dup.pairs[0];
  dup.pairs[2].aoa += 1e-8;
  try {
    reconstruction::estimate_gains(p.eff, dup, p.plan, p.cfg);
    FAIL("expected a SingularityError");
  } catch (const SingularityError& e) {
    REQUIRE(e.colliding().size() == 1);
    CHECK(e.colliding()[0] == std::pair<int, int>{0, 2});
  }
}

TEST_CASE("gain LS follows the path order") {
  const Planted p = plant(5, 12);
  esprit::AngleEstimates shuffled;
  const std::vector<int> order{2, 4, 0, 3, 1};
  for (int k : order) shuffled.pairs.push_back(p.truth.pairs[k]);
  const CVector d0 = reconstruction::estimate_gains(p.eff, p.truth, p.plan, p.cfg);
  const CVector d1 = reconstruction::estimate_gains(p.eff, shuffled, p.plan, p.cfg);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(d1(k) - d0(order[k])) < 1e-10 * std::abs(d0(order[k])));
  const CMatrix h0 = reconstruction::reconstruct_channel(p.truth, d0, p.cfg).h_hat;
  const CMatrix h1 = reconstruction::reconstruct_channel(shuffled, d1, p.cfg).h_hat;
  CHECK((h0 - h1).norm() / h0.norm() < 1e-12);
}
