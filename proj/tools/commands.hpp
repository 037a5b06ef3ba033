#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paradom/noise.hpp"

namespace paradom::cli {

struct Args {
  int grid = 128;
  int dim = 2;
  std::string eps = "2^-4";
  std::string seed = "1";
  std::string kind = "anderson2d";
  std::string out = "out";
  bool trace = false;
  double tol = 1e-12;
  // study
  int k_eigs = 5;
  double lam0 = 0.0;
  int trials = 50;
  int power_iterations = 10;
  int power_restarts = 1;
  // check
  int check_trials = 4;
  // noise spec
  double amplitude = 1.0;
  double delta = 0.6;
  double delta1 = 0.3;
  double delta2 = 0.1;
  double p = 8.0;
  double q = 32.0;
  double r = 8.0;
};

/// "2^-3,2^-4", "0.25,0.125" or the range "2^-3..2^-6".
std::vector<double> parse_eps_list(const std::string& s);
std::vector<std::uint64_t> parse_seed_list(const std::string& s);
NoiseSpec noise_spec(const Args& a);

int cmd_noise(const Args& a);
int cmd_enhance(const Args& a);
int cmd_kpz(const Args& a);
int cmd_stack(const Args& a);
int cmd_verify(const Args& a);
int cmd_study(const Args& a);
int cmd_check(const Args& a);

}  // namespace paradom::cli
