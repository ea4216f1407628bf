#include "mmwce/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

#include "json.hpp"

#ifndef MMWCE_VERSION
#define MMWCE_VERSION "unknown"
#endif

namespace mmwce::report {

std::string version() { return MMWCE_VERSION; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<mc::MetricsRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.scheme << ',' << format_number(r.snr_db) << ',' << r.n_paths << ',' << r.n_trials << ','
        << format_number(r.nmse_db) << ',' << format_number(r.ase_bps_hz) << ',' << format_number(r.ber) << ','
        << format_number(r.pilot_overhead) << ',' << format_number(r.failure_rate) << '\n';
  }
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

void write_json(std::ostream& out, const std::vector<mc::MetricsRecord>& records, const mc::ExperimentConfig& exp) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    recs.push_back({{"scheme", r.scheme},
                    {"snr_db", number(r.snr_db)},
                    {"n_paths", r.n_paths},
                    {"n_trials", r.n_trials},
                    {"nmse_db", number(r.nmse_db)},
                    {"ase_bps_hz", number(r.ase_bps_hz)},
                    {"ber", number(r.ber)},
                    {"pilot_overhead", number(r.pilot_overhead)},
                    {"complexity_ops", number(r.complexity_ops)},
                    {"failure_rate", number(r.failure_rate)}});
  }
  nlohmann::json schemes = nlohmann::json::array();
  for (auto s : exp.schemes) schemes.push_back(std::string(mc::scheme_name(s)));
  nlohmann::json config = exp.system;
  config["schemes"] = schemes;
  config["omp_grid"] = exp.omp_grid;
  config["omp_iterations"] = exp.omp_iterations;
  config["ber_symbols"] = exp.ber_symbols;
  config["jobs"] = exp.jobs;

  const nlohmann::json doc = {{"version", version()}, {"config", config}, {"records", recs}};
  out << std::setw(2) << doc << '\n';
}

void write_accounting(std::ostream& out, const metrics::Accounting& acc, const SystemConfig& cfg,
                      const metrics::AccountingParams& p) {
  out << "pilot overhead (symbols)\n"
      << "  T_proposed = T_MS*N_b^R*N_b^T            = " << format_number(acc.t_proposed) << '\n'
      << "  T_omp      = N_T^Beam*N_R^Beam/N_RF      = " << format_number(acc.t_omp) << '\n'
      << "  T_acs      = K*L^2*(K*L/N_RF)*log_K(G/L) = " << format_number(acc.t_acs) << '\n'
      << "modeled complexity (operations)\n"
      << "  C_proposed = m1*(N_R-m2+1)*L^2            = " << format_number(acc.c_proposed) << '\n'
      << "  C_omp      = N_T^Beam*N_R^Beam*G^2+|I|^4  = " << format_number(acc.c_omp) << '\n'
      << "  C_acs      = 2*L*N_BS^3*log_K(G/L)        = " << format_number(acc.c_acs) << '\n'
      << "ratios\n"
      << "  C_proposed/C_acs = " << format_number(acc.ratio_acs()) << '\n'
      << "  C_proposed/C_omp = " << format_number(acc.ratio_omp()) << '\n'
      << "parameters: L=" << cfg.n_paths << " N_RF=" << cfg.n_rf_bs << " N_BS=" << cfg.n_bs << " m1=" << cfg.m1
      << " m2=" << cfg.m2 << " N_R=" << cfg.n_r() << " K=" << p.acs_k << " G_ACS=" << p.acs_grid
      << " G_OMP=" << p.omp_grid << " beams=" << p.omp_beams_t << 'x' << p.omp_beams_r
      << " |I_t|=" << p.omp_iterations << '\n';
}

}  // namespace mmwce::report
