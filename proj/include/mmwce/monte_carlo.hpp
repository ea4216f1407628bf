#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "mmwce/config.hpp"
#include "mmwce/metrics.hpp"

namespace mmwce::mc {

enum class Scheme { kEsprit, kOmp, kPerfect };

std::string_view scheme_name(Scheme s);
// Throws ConfigError for names that are not registered estimators.
Scheme parse_scheme(std::string_view name);
// Comma-separated list, e.g. "esprit,omp".
std::vector<Scheme> parse_scheme_list(std::string_view list);

struct ExperimentConfig {
  SystemConfig system;
  std::vector<Scheme> schemes = {Scheme::kEsprit, Scheme::kOmp};
  int omp_grid = 150;
  int omp_iterations = 50;
  // 16-QAM symbol vectors per (trial, scheme, SNR); 0 skips the BER stage.
  int ber_symbols = 100;
  int jobs = 1;
  metrics::AccountingParams accounting;

  void validate() const;
};

// Outcome of one (scheme, SNR, trial) cell.
struct TrialSample {
  bool failed = false;
  double nmse_ratio = std::numeric_limits<double>::quiet_NaN();
  double ase = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
};

class TrialTable {
 public:
  TrialTable(std::vector<Scheme> schemes, std::vector<double> snr_db, int n_trials);

  TrialSample& at(std::size_t scheme, std::size_t snr, std::size_t trial);
  const TrialSample& at(std::size_t scheme, std::size_t snr, std::size_t trial) const;

  const std::vector<Scheme>& schemes() const { return schemes_; }
  const std::vector<double>& snr_db() const { return snr_db_; }
  int n_trials() const { return n_trials_; }

  bool operator==(const TrialTable&) const;

 private:
  std::vector<Scheme> schemes_;
  std::vector<double> snr_db_;
  int n_trials_;
  std::vector<TrialSample> cells_;
};

struct MetricsRecord {
  std::string scheme;
  double snr_db = 0;
  int n_paths = 0;
  int n_trials = 0;
  double nmse_db = 0;
  double ase_bps_hz = 0;
  double ber = 0;
  double pilot_overhead = 0;
  double complexity_ops = 0;
  double failure_rate = 0;

  bool operator==(const MetricsRecord&) const = default;
};

// sigma_n^2 = sigma_alpha^2 / 10^(snr_db / 10).
double noise_variance(const SystemConfig& cfg, double snr_db);

// OpenMP over trials with exp.jobs threads.
TrialTable run_trials(const ExperimentConfig& exp);

// Single-threaded reference; must agree with run_trials bit for bit.
TrialTable run_trials_serial(const ExperimentConfig& exp);

// One record per (scheme, SNR). NMSE is 10 log10 of the mean ratio over
// non-failed trials; BER pools all bits; failed trials count only toward
// failure_rate.
std::vector<MetricsRecord> aggregate(const TrialTable& table, const ExperimentConfig& exp);

std::vector<MetricsRecord> run_monte_carlo(const ExperimentConfig& exp);

}  // namespace mmwce::mc
