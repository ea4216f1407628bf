#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mmwce/metrics.hpp"
#include "mmwce/monte_carlo.hpp"

namespace mmwce::report {

inline constexpr const char* kCsvHeader =
    "scheme,snr_db,n_paths,n_trials,nmse_db,ase_bps_hz,ber,pilot_overhead,failure_rate";

// Build version, git-describe style.
std::string version();

// 10 significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format_number(double x);

void write_csv(std::ostream& out, const std::vector<mc::MetricsRecord>& records);

// {"version": ..., "config": {...}, "records": [...]}.
void write_json(std::ostream& out, const std::vector<mc::MetricsRecord>& records, const mc::ExperimentConfig& exp);

void write_accounting(std::ostream& out, const metrics::Accounting& acc, const SystemConfig& cfg,
                      const metrics::AccountingParams& params);

}  // namespace mmwce::report
