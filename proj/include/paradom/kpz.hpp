#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "paradom/littlewood_paley.hpp"

namespace paradom {

/// (lam - Delta)W - |grad W|^2 + grad W . grad V + xi = 0
struct KpzProblem {
  SpectralField xi;
  SpectralField V;
  double lam = 1.0;
  double tol = 1e-10;
  int max_iter = 500;

  KpzProblem(SpectralField xi_, SpectralField V_, double lam_ = 1.0)
      : xi(std::move(xi_)), V(std::move(V_)), lam(lam_) {}
};

/// One Picard step (lam - Delta)^{-1}(|grad W|^2 - grad W . grad V - xi);
/// its fixed points solve the equation above.
SpectralField kpz_map(const SpectralField& W, const KpzProblem& prob);

/// L2 norm of (lam - Delta)W - |grad W|^2 + grad W . grad V + xi.
double kpz_equation_residual(const SpectralField& W, const KpzProblem& prob);

struct KpzSolution {
  SpectralField W;
  int iterations = 0;
  double residual = 0.0;
  std::vector<std::pair<int, double>> trace;  // (iteration, residual)
};

/// Picard iteration from W0 (default 0) until the residual is <= tol.
/// Throws ConvergenceError after max_iter, DivergenceError if the iterates
/// blow up.
KpzSolution solve_kpz(const KpzProblem& prob, const SpectralField* W0 = nullptr);

void write_trace_csv(const std::filesystem::path& path, const KpzSolution& sol);

/// Doubles lam from 1 until 20 Picard steps from 0 show contraction (five
/// consecutive step ratios <= 0.9 in the H^1 norm). Throws DataTooRoughError
/// at lam = 2^20.
KpzProblem auto_lambda(const SpectralField& xi, const SpectralField& V, double tol);

struct SmoothingReport {
  std::vector<double> lams;
  std::vector<double> ratio_max;
  double slope = 0.0;
  std::vector<CheckRow> rows;
};

/// Ratios ||(lam - Delta)^{-1} f||_{B^beta_{mu,inf}} /
/// (lam^{-kappa} ||f||_{B^{beta-2+kappa}_{mu,inf}}) over random f.
SmoothingReport check_smoothing(const DyadicPartition& P, const std::vector<double>& lams,
                                double beta, double kappa, double mu, int trials,
                                std::uint64_t seed);

}  // namespace paradom
