#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paradom/transform_stack.hpp"

namespace paradom {

/// A u = (1 - Delta)u + grad V . grad u + (xi + c) u + div(rho u)
SpectralField apply_A(const SpectralField& u, const EnhancedData& d);
/// L2 adjoint: (1 - Delta)v - div(v grad V) + (xi + c) v - rho . grad v
SpectralField apply_A_adjoint(const SpectralField& v, const EnhancedData& d);

struct TildeResult {
  SpectralField value;     // exp(G) A(exp(W_M) v)
  SpectralField expanded;  // L_E v + Vt . grad v + Zt v + sW v + rt . grad v
  double discrepancy = 0.0;  // ||value - expanded|| / ||value||
};

/// The conjugated operator evaluated both from its definition and from the
/// expansion, with L_E v = Lambda v - div(a o grad v) - div(grad v < a).
TildeResult apply_A_tilde(const SpectralField& v, const TransformStack& s);

/// lower(v) = A(Theta v) - (1 - Delta)v, by direct application.
SpectralField lower_part(const SpectralField& v, const TransformStack& s);
SpectralField lower_part_adjoint(const SpectralField& w, const TransformStack& s);

struct FactorizationReport {
  double eps = 0.0;
  double lower_l2 = 0.0;     // ||lower||_{H^2 -> L^2}, power iteration
  double lower_proxy = 0.0;  // max ||lower(v)||_{H^delta'} / ||v||_{H^2} over random v
  double c_lo = 0.0;         // min and max of (||A Theta u|| + ||Theta u||) /
  double c_hi = 0.0;         //   (||(1 - Delta)u|| + ||u||) over random u
  double theta_proxy = 0.0;  // max ||Theta u||_{B^delta_{2,2}} / ||u||_{H^2}
  double resid_lambda = 0.0;      // ||Lambda w - (1 - Delta) Upsilon w|| / ||Lambda w||
  double resid_lambda_bar = 0.0;  // same for the barred pair
  double resid_theta = 0.0;       // ||Theta(Theta^{-1} u) - u|| / ||u||
};

struct FactorizationOptions {
  int trials = 50;
  double delta = 0.1;
  double delta1 = 0.1;
  std::uint64_t seed = 0x6661;
  PowerOptions power{};
  bool estimate_lower = true;
};

FactorizationReport factorization_remainder(const TransformStack& s,
                                            const FactorizationOptions& opt = {});

/// Random H^2 test field (spectral decay of regularity 2, |k| <= n/4) used by
/// the probes; the factor n/4 keeps products with the exponentials resolved.
SpectralField random_h2(const Grid& g, std::uint64_t seed, std::uint64_t stream);

struct ResolventResult {
  SpectralField u;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (lam0 + A)u = f by GMRES preconditioned with (lam0 + 1 - Delta)^{-1}.
/// Throws ShiftTooSmallError if the relative residual does not reach tol in
/// max_iter iterations.
ResolventResult resolvent(const SpectralField& f, const EnhancedData& d, double lam0,
                          double tol = 1e-10, int max_iter = 200);
/// Same for the adjoint operator.
ResolventResult resolvent_adjoint(const SpectralField& f, const EnhancedData& d, double lam0,
                                  double tol = 1e-10, int max_iter = 200);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;    // ||A phi - lambda phi|| / ||phi||
  std::vector<double> imag_parts;   // of the Ritz values (0 in the symmetric case)
  int iterations = 0;
  bool symmetric = true;
  std::string warning;
};

struct SpectrumOptions {
  double tol = 1e-6;
  int max_iter = 500;
  std::uint64_t seed = 0x73706563;
};

/// Lowest k eigenvalues by block subspace iteration on (lam0 + A)^{-1}
/// (block size k + 4) with Rayleigh-Ritz on A. For V != 0 or rho != 0 the
/// operator is not L2-symmetric and the values are Ritz values (warning set).
/// Throws ConvergenceError after max_iter iterations.
SpectrumResult spectrum(const EnhancedData& d, double lam0, int k,
                        const SpectrumOptions& opt = {});

}  // namespace paradom
