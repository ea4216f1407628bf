#include "mmwce/monte_carlo.hpp"

#include <bit>
#include <cmath>
#include <exception>
#include <optional>

#include <omp.h>

#include "mmwce/baseline_omp.hpp"
#include "mmwce/channel_model.hpp"
#include "mmwce/errors.hpp"
#include "mmwce/esprit.hpp"
#include "mmwce/reconstruction.hpp"
#include "mmwce/rng.hpp"
#include "mmwce/training.hpp"

namespace mmwce::mc {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kEsprit: return "esprit";
    case Scheme::kOmp: return "omp";
    case Scheme::kPerfect: return "perfect";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::kEsprit, Scheme::kOmp, Scheme::kPerfect})
    if (scheme_name(s) == name) return s;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected esprit, omp or perfect)");
}

std::vector<Scheme> parse_scheme_list(std::string_view list) {
  std::vector<Scheme> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, end - start);
    if (item.empty()) throw ConfigError("empty entry in scheme list");
    out.push_back(parse_scheme(item));
    start = end + 1;
  }
  return out;
}

void ExperimentConfig::validate() const {
  system.validate();
  if (schemes.empty()) throw ConfigError("no schemes selected");
  if (omp_grid < 2) throw ConfigError("omp grid must be at least 2");
  if (omp_iterations < 0 || omp_iterations > omp_grid * omp_grid)
    throw ConfigError("omp iterations outside 0..grid^2");
  if (ber_symbols < 0) throw ConfigError("ber_symbols must be non-negative");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  const int n_rf = std::min(system.n_rf_bs, system.n_rf_ms);
  if (n_rf > std::min(system.n_bs, system.n_ms)) throw ConfigError("n_rf exceeds the antenna count");
}

TrialTable::TrialTable(std::vector<Scheme> schemes, std::vector<double> snr_db, int n_trials)
    : schemes_(std::move(schemes)),
      snr_db_(std::move(snr_db)),
      n_trials_(n_trials),
      cells_(schemes_.size() * snr_db_.size() * static_cast<std::size_t>(n_trials)) {}

TrialSample& TrialTable::at(std::size_t scheme, std::size_t snr, std::size_t trial) {
  return cells_[(scheme * snr_db_.size() + snr) * static_cast<std::size_t>(n_trials_) + trial];
}

const TrialSample& TrialTable::at(std::size_t scheme, std::size_t snr, std::size_t trial) const {
  return cells_[(scheme * snr_db_.size() + snr) * static_cast<std::size_t>(n_trials_) + trial];
}

bool TrialTable::operator==(const TrialTable& o) const {
  if (schemes_ != o.schemes_ || snr_db_ != o.snr_db_ || n_trials_ != o.n_trials_) return false;
  auto bits = [](double x) { return std::bit_cast<std::uint64_t>(x); };
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const TrialSample& a = cells_[k];
    const TrialSample& b = o.cells_[k];
    if (a.failed != b.failed || bits(a.nmse_ratio) != bits(b.nmse_ratio) || bits(a.ase) != bits(b.ase) ||
        a.bit_errors != b.bit_errors || a.bits != b.bits)
      return false;
  }
  return true;
}

double noise_variance(const SystemConfig& cfg, double snr_db) {
  return cfg.sigma_alpha_sq / std::pow(10.0, snr_db / 10.0);
}

namespace {

// Read-only state shared by every trial.
struct Context {
  const ExperimentConfig& exp;
  training::TrainingPlan plan;
  std::optional<omp::GridDictionary> dict;
  esprit::EspritParams esprit_params;
  int n_rf;
};

Context make_context(const ExperimentConfig& exp) {
  exp.validate();
  const SystemConfig& cfg = exp.system;
  Context ctx{exp, training::aggregate_training(cfg), std::nullopt,
              esprit::EspritParams{cfg.m1, cfg.m2, cfg.n_paths, cfg.delta}, std::min(cfg.n_rf_bs, cfg.n_rf_ms)};
  for (Scheme s : exp.schemes)
    if (s == Scheme::kOmp) ctx.dict = omp::build_dictionary(cfg, exp.omp_grid, ctx.plan);
  return ctx;
}

CMatrix estimate(const Context& ctx, Scheme scheme, const training::EffectiveChannel& eff, const CMatrix& h) {
  switch (scheme) {
    case Scheme::kEsprit: {
      const esprit::AngleEstimates angles = esprit::estimate_angles(eff.h_bar, ctx.esprit_params);
      const CVector d = reconstruction::estimate_gains(eff, angles, ctx.plan, ctx.exp.system);
      return reconstruction::reconstruct_channel(angles, d, ctx.exp.system).h_hat;
    }
    case Scheme::kOmp:
      return omp::omp_estimate(eff, *ctx.dict, ctx.exp.omp_iterations).h_hat;
    case Scheme::kPerfect:
      return h;
  }
  throw ConfigError("unregistered scheme");
}

void run_trial(const Context& ctx, int trial, TrialTable& table) {
  const ExperimentConfig& exp = ctx.exp;
  const SystemConfig& cfg = exp.system;
  const auto t = static_cast<std::uint64_t>(trial);

  Rng path_rng = make_stream(cfg.seed, StreamTag::kPaths, t);
  const channel::PathSet paths = channel::draw_paths(cfg, path_rng);
  const CMatrix h = channel::assemble_channel(paths, cfg);

  for (std::size_t k = 0; k < table.snr_db().size(); ++k) {
    const double sigma_n_sq = noise_variance(cfg, table.snr_db()[k]);
    Rng noise_rng = make_stream(cfg.seed, StreamTag::kUplinkNoise, t, k);
    const CMatrix y = training::simulate_uplink(h, ctx.plan, sigma_n_sq, noise_rng);
    const training::EffectiveChannel eff = training::estimate_effective_channel(y, ctx.plan);

    for (std::size_t s = 0; s < table.schemes().size(); ++s) {
      TrialSample& cell = table.at(s, k, static_cast<std::size_t>(trial));
      try {
        const CMatrix h_hat = estimate(ctx, table.schemes()[s], eff, h);
        cell.nmse_ratio = metrics::nmse_ratio(h, h_hat);
        const metrics::SvdBeamformers bf = metrics::svd_beamformers(h_hat, ctx.n_rf);
        cell.ase = metrics::ase(h, bf, sigma_n_sq);
        if (exp.ber_symbols > 0) {
          Rng data_rng = make_stream(cfg.seed, StreamTag::kDownlink, t, k, static_cast<std::uint64_t>(s));
          const metrics::BitErrorCount ber = metrics::ber_16qam(h, h_hat, bf, sigma_n_sq, data_rng, exp.ber_symbols);
          cell.bit_errors = ber.errors;
          cell.bits = ber.bits;
        }
      } catch (const EstimationFailure&) {
        cell = TrialSample{};
        cell.failed = true;
      }
    }
  }
}

}  // namespace

TrialTable run_trials_serial(const ExperimentConfig& exp) {
  const Context ctx = make_context(exp);
  TrialTable table(exp.schemes, exp.system.snr_db_grid, exp.system.n_trials);
  if (exp.system.snr_db_grid.empty()) return table;
  for (int t = 0; t < exp.system.n_trials; ++t) run_trial(ctx, t, table);
  return table;
}

TrialTable run_trials(const ExperimentConfig& exp) {
  const Context ctx = make_context(exp);
  TrialTable table(exp.schemes, exp.system.snr_db_grid, exp.system.n_trials);
  if (exp.system.snr_db_grid.empty()) return table;

  std::exception_ptr error;
  const int n_trials = exp.system.n_trials;
#pragma omp parallel for schedule(dynamic) num_threads(exp.jobs)
  for (int t = 0; t < n_trials; ++t) {
    try {
      run_trial(ctx, t, table);
    } catch (...) {
#pragma omp critical(mmwce_mc_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return table;
}

std::vector<MetricsRecord> aggregate(const TrialTable& table, const ExperimentConfig& exp) {
  const SystemConfig& cfg = exp.system;
  const metrics::Accounting acc = metrics::overhead_and_complexity(cfg, exp.accounting);
  std::vector<MetricsRecord> out;
  for (std::size_t s = 0; s < table.schemes().size(); ++s) {
    const Scheme scheme = table.schemes()[s];
    for (std::size_t k = 0; k < table.snr_db().size(); ++k) {
      double ratio_sum = 0.0;
      double ase_sum = 0.0;
      std::uint64_t errors = 0;
      std::uint64_t bits = 0;
      int ok = 0;
      for (int t = 0; t < table.n_trials(); ++t) {
        const TrialSample& c = table.at(s, k, static_cast<std::size_t>(t));
        if (c.failed) continue;
        ++ok;
        ratio_sum += c.nmse_ratio;
        ase_sum += c.ase;
        errors += c.bit_errors;
        bits += c.bits;
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      MetricsRecord r;
      r.scheme = std::string(scheme_name(scheme));
      r.snr_db = table.snr_db()[k];
      r.n_paths = cfg.n_paths;
      r.n_trials = table.n_trials();
      r.nmse_db = ok ? metrics::ratio_to_db(ratio_sum / ok) : nan;
      r.ase_bps_hz = ok ? ase_sum / ok : nan;
      r.ber = bits ? static_cast<double>(errors) / static_cast<double>(bits) : nan;
      r.failure_rate = static_cast<double>(table.n_trials() - ok) / table.n_trials();
      switch (scheme) {
        case Scheme::kEsprit:
          r.pilot_overhead = acc.t_proposed;
          r.complexity_ops = acc.c_proposed;
          break;
        case Scheme::kOmp:
          // The baseline consumes the same training observation.
          r.pilot_overhead = acc.t_proposed;
          r.complexity_ops = acc.c_omp;
          break;
        case Scheme::kPerfect:
          r.pilot_overhead = 0;
          r.complexity_ops = 0;
          break;
      }
      out.push_back(r);
    }
  }
  return out;
}

std::vector<MetricsRecord> run_monte_carlo(const ExperimentConfig& exp) {
  return aggregate(exp.jobs > 1 ? run_trials(exp) : run_trials_serial(exp), exp);
}

}  // namespace mmwce::mc
