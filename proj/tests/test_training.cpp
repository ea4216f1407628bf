#include "doctest.h"
#include "mmwce/channel_model.hpp"
#include "mmwce/errors.hpp"
#include "mmwce/training.hpp"
#include "oracles.hpp"

using namespace mmwce;

namespace {

SystemConfig small_config() {
  SystemConfig cfg;
  cfg.n_bs = cfg.n_ms = 4;
  cfg.n_rf_bs = cfg.n_rf_ms = 2;
  cfg.n_s = 1;
  cfg.n_b_t = cfg.n_b_r = 4;
  return cfg;
}

CVector unit(int n, int k) {
  CVector e = CVector::Zero(n);
  e(k) = 1.0;
  return e;
}

// Columns of `m` are parallel to the given standard basis vectors.
bool selects(const CMatrix& m, int first_row, double gain) {
  CMatrix expect = CMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) expect(first_row + c, c) = gain;
  return (m - expect).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

TEST_CASE("pilot block") {
  CHECK((training::build_pilot(1) - CMatrix::Ones(1, 1)).norm() < 1e-15);
  for (int n_s = 1; n_s <= 8; ++n_s) {
    const CMatrix s = training::build_pilot(n_s);
    CHECK((s * s.adjoint() - n_s * CMatrix::Identity(n_s, n_s)).norm() < 1e-12);
    CHECK(std::abs(std::norm(s.determinant()) / std::pow(n_s, n_s) - 1.0) < 1e-10);
  }
}

TEST_CASE("DFT columns are orthogonal with squared norm n") {
  for (int n : {2, 3, 4, 16}) {
    const CMatrix u = training::dft_matrix(n);
    CHECK((u.adjoint() * u - n * CMatrix::Identity(n, n)).norm() < 1e-12);
    CHECK((u.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("small-config precoder blocks select standard basis vectors") {
  const SystemConfig cfg = small_config();
  const training::HybridBlock f1 = training::build_precoder_block(1, cfg);
  CHECK((f1.rf.cwiseAbs().array() - 0.5).abs().maxCoeff() < 1e-15);
  const double gain = f1.product(0, 0).real();
  CHECK(gain > 0.0);
  CHECK((f1.product - gain * unit(4, 0)).norm() < 1e-12);

  const training::HybridBlock f2 = training::build_precoder_block(2, cfg);
  CHECK((f2.product - gain * unit(4, 1)).norm() < 1e-12);
  CHECK_THROWS_AS(training::build_precoder_block(5, cfg), std::out_of_range);
  CHECK_THROWS_AS(training::build_precoder_block(0, cfg), std::out_of_range);
}

TEST_CASE("small-config combiner blocks") {
  const SystemConfig cfg = small_config();
  const training::HybridBlock w1 = training::build_combiner_block(1, cfg);
  CHECK(selects(w1.product, 0, training::combiner_scale(cfg)));
  // Last block with n_b_r * n_s = n_bs fills the final rows.
  const training::HybridBlock w4 = training::build_combiner_block(4, cfg);
  CHECK(selects(w4.product, 3, training::combiner_scale(cfg)));

  SystemConfig wide;
  wide.n_b_r = 21;  // 21 * 3 = 63 rows
  wide.n_bs = 63;
  const training::HybridBlock last = training::build_combiner_block(21, wide);
  CHECK(selects(last.product, 60, training::combiner_scale(wide)));
  const Eigen::VectorXd norms = last.product.colwise().norm();
  CHECK((norms.array() - norms(0)).abs().maxCoeff() < 1e-14);
}

TEST_CASE("constant modulus and power audits") {
  const SystemConfig cfg;
  for (int j = 1; j <= cfg.n_b_t; ++j) {
    const training::HybridBlock f = training::build_precoder_block(j, cfg);
    CHECK((f.rf.cwiseAbs().array() - 1.0 / std::sqrt(64.0)).abs().maxCoeff() < 1e-14);
    CHECK(std::abs(f.product.squaredNorm() - cfg.n_rf_ms) < 1e-10);
  }
  for (int i = 1; i <= cfg.n_b_r; ++i) {
    const training::HybridBlock w = training::build_combiner_block(i, cfg);
    CHECK((w.rf.cwiseAbs().array() - 1.0 / std::sqrt(64.0)).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("aggregated training for the reference config") {
  const SystemConfig cfg;
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  CHECK(plan.f_agg.rows() == 64);
  CHECK(plan.f_agg.cols() == 30);
  CHECK(std::abs(plan.alpha_f - std::sqrt(4.0 / 3.0)) < 1e-15);
  CHECK(std::abs(plan.alpha_w - 0.5) < 1e-15);
  CMatrix expect_f = CMatrix::Zero(64, 30);
  expect_f.topRows(30) = plan.alpha_f * CMatrix::Identity(30, 30);
  CHECK((plan.f_agg - expect_f).cwiseAbs().maxCoeff() < 1e-12);
  // alpha_f from the power normalization of a single block.
  const training::HybridBlock f1 = training::build_precoder_block(1, cfg);
  CHECK(std::abs(std::sqrt(f1.product.squaredNorm() / cfg.n_s) - plan.alpha_f) < 1e-12);
  CHECK((plan.w_agg.adjoint() * plan.w_agg - plan.alpha_w * plan.alpha_w * CMatrix::Identity(30, 30)).norm() <
        1e-12);
  CHECK(plan.pilot_overhead() == 300);
  CHECK(plan.n_r() == 30);
  CHECK(plan.n_t() == 30);
}

TEST_CASE("effective channel is the scaled top-left submatrix") {
  const SystemConfig cfg;
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  const double scale = plan.alpha_w * plan.alpha_f;
  for (int t = 0; t < 200; ++t) {
    Rng rng = make_stream(8, StreamTag::kPaths, static_cast<std::uint64_t>(t));
    const CMatrix h = channel::assemble_channel(channel::draw_paths(cfg, rng), cfg);
    const CMatrix sub = scale * h.topLeftCorner(30, 30);
    CHECK((plan.w_agg.adjoint() * h * plan.f_agg - sub).cwiseAbs().maxCoeff() < 1e-12 * h.cwiseAbs().maxCoeff());

    Rng noise = make_stream(8, StreamTag::kUplinkNoise, static_cast<std::uint64_t>(t));
    const CMatrix y = training::simulate_uplink(h, plan, 0.0, noise);
    CHECK((y - sub * training::aggregated_pilot(plan)).cwiseAbs().maxCoeff() < 1e-12 * h.cwiseAbs().maxCoeff());
    const training::EffectiveChannel eff = training::estimate_effective_channel(y, plan);
    CHECK(eff.scale == doctest::Approx(scale));
    CHECK((eff.h_bar / scale - h.topLeftCorner(30, 30)).cwiseAbs().maxCoeff() < 1e-12 * h.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("LS step inverts an arbitrary effective channel") {
  const SystemConfig cfg;
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  Rng rng(99);
  CMatrix h_bar(30, 30);
  for (Eigen::Index k = 0; k < h_bar.size(); ++k) h_bar(k) = complex_gaussian(rng, 1.0);
  const CMatrix y = h_bar * training::aggregated_pilot(plan);
  CHECK((training::estimate_effective_channel(y, plan).h_bar - h_bar).norm() < 1e-12);
}

TEST_CASE("noise propagates with variance alpha_w^2 sigma^2, then divided by n_s") {
  const SystemConfig cfg;
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  const double sigma_sq = 0.7;
  const CMatrix zero = CMatrix::Zero(64, 64);
  double y_sum = 0.0, h_sum = 0.0;
  long y_count = 0, h_count = 0;
  for (int t = 0; t < 12; ++t) {
    Rng rng = make_stream(31, StreamTag::kUplinkNoise, static_cast<std::uint64_t>(t));
    const CMatrix y = training::simulate_uplink(zero, plan, sigma_sq, rng);
    y_sum += y.squaredNorm();
    y_count += y.size();
    const CMatrix h_bar = training::estimate_effective_channel(y, plan).h_bar;
    h_sum += h_bar.squaredNorm();
    h_count += h_bar.size();
  }
  const double aw2 = plan.alpha_w * plan.alpha_w;
  CHECK(y_count >= 10000);
  CHECK(std::abs(y_sum / y_count / (aw2 * sigma_sq) - 1.0) < 0.05);
  CHECK(std::abs(h_sum / h_count / (aw2 * sigma_sq / cfg.n_s) - 1.0) < 0.05);
}

TEST_CASE("training rejects designs without a filler column") {
  SystemConfig cfg;
  cfg.n_s = 4;
  cfg.n_b_t = cfg.n_b_r = 8;
  CHECK_THROWS_AS(training::aggregate_training(cfg), ConfigError);
}
