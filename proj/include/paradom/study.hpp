#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "paradom/operator_lab.hpp"

namespace paradom {

struct StudyConfig {
  NoiseSpec noise{};              // kind and amplitude
  std::vector<std::uint64_t> seeds{7};
  int n = 256;
  int dim = 2;
  std::vector<double> eps;        // strictly decreasing
  double lam0 = 0.0;              // <= 0: start at 10 and double
  int k_eigs = 5;
  double delta = 0.1;             // proxy regularity for Theta u
  double delta1 = 0.1;            // proxy regularity for the lower-order part
  int norm_trials = 50;
  PowerOptions power{10, 1, 0x73747564ULL};  // for d_res and d_fac
  StackOptions stack{};
  bool control = true;
  double kpz_tol = 1e-12;
  /// Replaces the data generator (tests); receives grid, eps and seed.
  std::function<EnhancedData(const Grid&, double, std::uint64_t)> data_factory;
};

/// Throws ConfigError if the schedule is not strictly decreasing with at
/// least two entries, or other fields are inadmissible.
void validate(const StudyConfig& cfg);

struct StudyRow {
  std::uint64_t seed = 0;
  double eps = 0.0;
  int M = 0, N = 0;
  double c_eps = 0.0;
  double d_res = 0.0;  // to the next eps; NaN on the last row
  double d_fac = 0.0;
  std::vector<double> lambdas;
  double lambda_control = 0.0;  // lowest eigenvalue with c_eps dropped
  double c_lo = 0.0, c_hi = 0.0;
  double lower_proxy = 0.0;
  double theta_proxy = 0.0;  // max ||Theta u||_{B^delta_{2,2}} / ||u||_{H^2}
  double cert_exp = 0.0, cert_ups = 0.0, cert_phi = 0.0;
  // wall-clock seconds per stage
  double t_data = 0.0, t_stack = 0.0, t_spectrum = 0.0, t_norms = 0.0, t_diff = 0.0;
};

struct StudyReport {
  double lam0 = 0.0;
  std::vector<StudyRow> rows;  // ordered by (seed, eps descending)
};

StudyReport convergence_study(const StudyConfig& cfg);

/// study.csv (deterministic columns), runtimes.csv, d_res.dat, d_fac.dat,
/// eigenvalues.dat, control.dat; numbers with 17 significant digits.
void write_study(const StudyReport& rep, const StudyConfig& cfg,
                 const std::filesystem::path& dir);

std::string study_csv_header(int k_eigs);
std::string study_csv_row(const StudyRow& r);

}  // namespace paradom
