#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paradom/field.hpp"
#include "paradom/spectral.hpp"

namespace paradom {

/// Smooth cutoff profile: 0 for t <= 0, 1 for t >= 1.
double lp_theta(double t);
/// chi(xi): 1 for |xi| <= 3/4, 0 for |xi| >= 4/3.
double lp_chi(double r);
/// rho(xi) = chi(xi/2) - chi(xi), supported in 3/4 <= |xi| <= 8/3.
double lp_rho(double r);

/// Dyadic partition tabulated on a grid.
///
/// Blocks run over j = -1 .. j_top where j_top = j_max + 1 is a tail block
/// with symbol 1 - chi(2^{-j_top} k); it makes sum_j Delta_j the identity on
/// the whole lattice. Blocks j <= j_max carry the usual symbols.
class DyadicPartition {
 public:
  explicit DyadicPartition(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int j_max() const noexcept { return j_max_; }
  int j_top() const noexcept { return j_max_ + 1; }

  /// Symbol of Delta_j, j in [-1, j_top].
  const std::vector<double>& block_symbol(int j) const;
  /// Symbol of S_j = sum_{i<j} Delta_i, j in [-1, j_top + 1].
  const std::vector<double>& low_symbol(int j) const;

  SpectralField block(const SpectralField& f, int j) const;
  SpectralField low(const SpectralField& f, int j) const;

 private:
  void check_grid(const SpectralField& f) const;

  Grid grid_;
  int j_max_;
  std::vector<std::vector<double>> blocks_;  // index j + 1
  std::vector<std::vector<double>> lows_;    // index j + 1
};

struct Decomposition {
  std::vector<SpectralField> blocks;  // Delta_j f, index j + 1
  std::vector<SpectralField> sums;    // S_j f, index j + 1
};

Decomposition decompose(const SpectralField& f, const DyadicPartition& P);

/// Besov index: regularity alpha, integrability p and summability q
/// (either may be kInf).
struct BesovIndex {
  double alpha = 0.0;
  double p = 2.0;
  double q = 2.0;
};

double besov_norm(const SpectralField& f, const BesovIndex& idx,
                  const DyadicPartition& P);

/// One row of a property report.
struct CheckRow {
  std::string check;
  std::string params;
  double ratio_max = 0.0;
  double ratio_min = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
};

std::string csv_header();
std::string to_csv(const CheckRow& r);

struct BernsteinReport {
  std::vector<double> lambdas;
  std::vector<double> upper_max;  // per lambda, ball support
  std::vector<double> upper_min;
  std::vector<double> lower_max;  // per lambda, annulus support (reverse)
  std::vector<double> lower_min;
  double slope = 0.0;  // least-squares slope of log upper_max vs log lambda
  std::vector<CheckRow> rows;
};

/// Ratios ||d^mu u||_{L^q} / (lambda^{k + d(1/p-1/q)} ||u||_{L^p}) for random
/// u supported in the ball of radius lambda, and the reverse ratios
/// lambda^k ||u||_{L^p} / max_mu ||d^mu u||_{L^p} for u supported in the
/// annulus 3/4 lambda <= |k| <= 8/3 lambda; lambda = 2^3 .. 2^{j_max}.
/// Test fields have a flat spectrum on their support.
BernsteinReport check_bernstein(const DyadicPartition& P, int k, double p,
                                double q, int trials, std::uint64_t seed);

struct EmbeddingReport {
  double ratio_max = 0.0;
  double ratio_min = 0.0;
  std::vector<CheckRow> rows;
};

/// ||f||_{B^alpha_{p,q2}} / ||f||_{B^beta_{r,q1}} with
/// beta = alpha + d(1/r - 1/p), r <= p, q1 <= q2.
EmbeddingReport check_embedding(const DyadicPartition& P, double alpha,
                                double beta, double p, double r, double q1,
                                double q2, int trials, std::uint64_t seed);

}  // namespace paradom
