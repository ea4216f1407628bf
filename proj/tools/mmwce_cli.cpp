// Command-line front end: parameter sweeps, single-realization inspection and
// overhead/complexity accounting.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmwce/baseline_omp.hpp"
#include "mmwce/channel_model.hpp"
#include "mmwce/errors.hpp"
#include "mmwce/esprit.hpp"
#include "mmwce/metrics.hpp"
#include "mmwce/monte_carlo.hpp"
#include "mmwce/reconstruction.hpp"
#include "mmwce/report.hpp"
#include "mmwce/training.hpp"

namespace {

constexpr double kRadToDeg = 180.0 / mmwce::kPi;

struct CommonOptions {
  std::string config_path;
  std::vector<double> snr;
  std::optional<int> paths;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string schemes = "esprit,omp";
  std::string out_dir;
  std::string format = "csv";
  int jobs = 1;
  int omp_grid = 150;
  int omp_iters = 50;
  int ber_symbols = 100;
};

mmwce::SystemConfig resolve_config(const CommonOptions& o, bool snr_given) {
  mmwce::SystemConfig cfg = o.config_path.empty() ? mmwce::SystemConfig{} : mmwce::load_config(o.config_path);
  if (snr_given) cfg.snr_db_grid = o.snr;
  if (o.paths) cfg.n_paths = *o.paths;
  if (o.trials) cfg.n_trials = *o.trials;
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();
  return cfg;
}

int cmd_run(const CommonOptions& o, bool snr_given) {
  mmwce::mc::ExperimentConfig exp;
  exp.system = resolve_config(o, snr_given);
  exp.schemes = mmwce::mc::parse_scheme_list(o.schemes);
  exp.jobs = o.jobs;
  exp.omp_grid = o.omp_grid;
  exp.omp_iterations = o.omp_iters;
  exp.ber_symbols = o.ber_symbols;
  exp.accounting.omp_grid = o.omp_grid;
  exp.accounting.omp_iterations = o.omp_iters;

  const auto records = mmwce::mc::run_monte_carlo(exp);
  auto emit = [&](std::ostream& out) {
    if (o.format == "json")
      mmwce::report::write_json(out, records, exp);
    else
      mmwce::report::write_csv(out, records);
  };
  if (o.out_dir.empty()) {
    emit(std::cout);
    return 0;
  }
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / ("results." + o.format);
  std::ofstream out(path);
  if (!out) throw mmwce::ConfigError("cannot write " + path.string());
  emit(out);
  std::cerr << "wrote " << records.size() << " records to " << path.string() << '\n';
  return 0;
}

int cmd_estimate(const CommonOptions& o, bool snr_given) {
  using namespace mmwce;
  const SystemConfig cfg = resolve_config(o, snr_given);
  const double snr_db = cfg.snr_db_grid.empty() ? 20.0 : cfg.snr_db_grid.front();
  const double sigma_n_sq = mc::noise_variance(cfg, snr_db);

  Rng path_rng = make_stream(cfg.seed, StreamTag::kPaths, 0);
  const channel::PathSet paths = channel::draw_paths(cfg, path_rng);
  const CMatrix h = channel::assemble_channel(paths, cfg);
  const training::TrainingPlan plan = training::aggregate_training(cfg);
  Rng noise_rng = make_stream(cfg.seed, StreamTag::kUplinkNoise, 0, 0);
  const training::EffectiveChannel eff =
      training::estimate_effective_channel(training::simulate_uplink(h, plan, sigma_n_sq, noise_rng), plan);

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "SNR " << snr_db << " dB, L = " << cfg.n_paths << ", pilot overhead " << plan.pilot_overhead()
            << " symbols\n\n";

  std::vector<int> order(paths.size());
  for (int l = 0; l < paths.size(); ++l) order[l] = l;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return paths.aoa[a] < paths.aoa[b]; });
  std::cout << "true paths\n  #    AoA(deg)    AoD(deg)    |alpha|\n";
  for (int l : order)
    std::cout << "  " << std::setw(2) << l << std::setw(12) << paths.aoa[l] * kRadToDeg << std::setw(12)
              << paths.aod[l] * kRadToDeg << std::setw(11) << std::abs(paths.gains[l]) << '\n';

  try {
    const esprit::AngleEstimates est =
        esprit::estimate_angles(eff.h_bar, {cfg.m1, cfg.m2, cfg.n_paths, cfg.delta});
    const CVector d = reconstruction::estimate_gains(eff, est, plan, cfg);
    const auto rec = reconstruction::reconstruct_channel(est, d, cfg);
    const double gain_scale = std::sqrt(static_cast<double>(cfg.n_bs) * cfg.n_ms / cfg.n_paths);
    std::cout << "\nesprit estimates\n  #    AoA(deg)    AoD(deg)    |alpha|   Re(lambda)  Im(lambda)\n";
    for (int l = 0; l < est.size(); ++l)
      std::cout << "  " << std::setw(2) << l << std::setw(12) << est.pairs[l].aoa * kRadToDeg << std::setw(12)
                << est.pairs[l].aod * kRadToDeg << std::setw(11) << std::abs(d(l)) / gain_scale << std::setw(12)
                << est.eigenvalues[l].real() << std::setw(12) << est.eigenvalues[l].imag() << '\n';
    std::cout << "esprit NMSE " << metrics::nmse_db(h, rec.h_hat) << " dB\n";
  } catch (const EstimationFailure& e) {
    std::cout << "\nesprit failed: " << e.what() << '\n';
  }

  if (o.schemes.find("omp") != std::string::npos) {
    const omp::GridDictionary dict = omp::build_dictionary(cfg, o.omp_grid, plan);
    try {
      const auto rec = omp::omp_estimate(eff, dict, o.omp_iters);
      std::cout << "omp    NMSE " << metrics::nmse_db(h, rec.h_hat) << " dB (G=" << o.omp_grid
                << ", iterations=" << o.omp_iters << ")\n";
    } catch (const EstimationFailure& e) {
      std::cout << "omp failed: " << e.what() << '\n';
    }
  }
  return 0;
}

int cmd_accounting(const CommonOptions& o) {
  using namespace mmwce;
  SystemConfig cfg = o.config_path.empty() ? SystemConfig{} : load_config(o.config_path);
  if (o.paths) cfg.n_paths = *o.paths;
  cfg.validate();
  metrics::AccountingParams p;
  p.omp_grid = o.omp_grid;
  p.omp_iterations = o.omp_iters;
  const metrics::Accounting acc = metrics::overhead_and_complexity(cfg, p);
  if (o.format == "json") {
    const nlohmann::json j = {{"version", report::version()},
                              {"n_paths", cfg.n_paths},
                              {"t_proposed", acc.t_proposed},
                              {"t_omp", acc.t_omp},
                              {"t_acs", acc.t_acs},
                              {"c_proposed", acc.c_proposed},
                              {"c_omp", acc.c_omp},
                              {"c_acs", acc.c_acs},
                              {"c_proposed_over_c_acs", acc.ratio_acs()},
                              {"c_proposed_over_c_omp", acc.ratio_omp()}};
    std::cout << std::setw(2) << j << '\n';
  } else {
    report::write_accounting(std::cout, acc, cfg, p);
  }
  return 0;
}

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "JSON file with SystemConfig fields")->check(CLI::ExistingFile);
  app->add_option("--snr", o.snr, "SNR points in dB, comma separated")->delimiter(',');
  app->add_option("--paths", o.paths, "number of paths L");
  app->add_option("--trials", o.trials, "Monte Carlo trials");
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--schemes", o.schemes, "estimators: esprit,omp,perfect");
  app->add_option("--out", o.out_dir, "output directory (stdout when omitted)");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--omp-grid", o.omp_grid, "OMP grid size per angle axis");
  app->add_option("--omp-iters", o.omp_iters, "OMP iterations");
  app->add_option("--ber-symbols", o.ber_symbols, "16-QAM symbol vectors per trial (0 disables BER)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave hybrid-precoding channel estimation by 2D unitary ESPRIT"};
  app.set_version_flag("--version", mmwce::report::version());
  app.require_subcommand(1);

  CommonOptions run_opts, est_opts, acc_opts;
  auto* run = app.add_subcommand("run", "Monte Carlo sweep over the SNR grid");
  add_common(run, run_opts);
  auto* est = app.add_subcommand("estimate", "single realization with an angle table");
  add_common(est, est_opts);
  auto* acc = app.add_subcommand("accounting", "pilot overhead and complexity report");
  add_common(acc, acc_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, run->count("--snr") > 0);
    if (*est) return cmd_estimate(est_opts, est->count("--snr") > 0);
    if (*acc) return cmd_accounting(acc_opts);
  } catch (const mmwce::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
