#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "paradom/field.hpp"

namespace paradom {

using LinearOp = std::function<SpectralField(const SpectralField&)>;

struct NormEstimate {
  double value = 0.0;               // max over restarts
  std::vector<double> per_restart;  // final estimate of each restart
  int iterations = 0;
};

struct PowerOptions {
  int iterations = 30;
  int restarts = 2;
  std::uint64_t seed = 0x6e6f726dULL;
};

/// ||T||_{H^a -> H^b} = ||S_b T S_{-a}||_{L2} by power iteration on B*B with
/// B = S_b T S_{-a}, S_s = (1 - Delta)^{s/2}. Start vectors are flat-spectrum
/// random fields in the open band, so the estimate is deterministic.
NormEstimate operator_norm(const LinearOp& T, const LinearOp& T_adj, const Grid& grid,
                           double a, double b, const PowerOptions& opt = {});

struct NeumannResult {
  SpectralField value;
  int terms = 0;
  double last_increment = 0.0;
};

/// y = (I + E)^{-1} x = sum_m (-E)^m x for an operator F = I + E given as F.
/// Stops when the H^sigma norm of a term is <= tol * ||y||_{H^sigma}; throws
/// CertificateError after max_terms.
NeumannResult neumann_inverse(const LinearOp& F, const SpectralField& x, double sigma,
                              const std::string& name, double tol = 1e-12,
                              int max_terms = 60);

struct GmresResult {
  SpectralField x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Right-preconditioned restarted GMRES for A x = b with preconditioner
/// application Minv (x = Minv y). Stops at relative residual <= tol.
GmresResult gmres(const LinearOp& A, const LinearOp& Minv, const SpectralField& b,
                  double tol, int max_iter, int restart = 40);

}  // namespace paradom
