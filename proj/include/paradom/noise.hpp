#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "paradom/field.hpp"

namespace paradom {

enum class NoiseKind { anderson2d, generic_I, generic_II, smooth_manufactured };

std::string to_string(NoiseKind k);
/// Accepts the names above plus "smooth" for smooth_manufactured.
NoiseKind parse_noise_kind(const std::string& s);

/// Parameters of the generated data. `delta`, `delta1`, `delta2` are the
/// regularity offsets delta, delta', delta''; p, q, r the integrability
/// indices, validated against the assumption of the selected kind.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::anderson2d;
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double delta = 0.6;
  double delta1 = 0.3;
  double delta2 = 0.1;
  double p = 8.0;
  double q = 32.0;
  double r = 8.0;
};

/// Throws ConfigError naming the violated inequality.
void validate(const NoiseSpec& spec, int dim);

/// Enhanced data at one mollification scale.
///
/// The exponential weight is E = exp(2W - V): with the first-order term
/// +grad V . grad u in A this is the factor that turns the transformed
/// principal part into divergence form.
struct EnhancedData {
  double eps = 0.0;
  SpectralField xi, V;
  VectorField rho;
  SpectralField W, Z;
  double c_eps = 0.0;
  SpectralField Z_tilde;  // E Z
  VectorField rho_exp;    // E rho
  SpectralField sp_V;     // E grad V . rho
  SpectralField sp_W;     // E grad W . rho
  std::uint64_t seed = 0;
  NoiseKind kind = NoiseKind::anderson2d;
  double lam = 1.0;

  explicit EnhancedData(const Grid& g);
  const Grid& grid() const { return xi.grid(); }
  bool has_rho() const;
};

/// Zero data on a grid (xi = V = rho = 0, W = Z = 0, c = 0).
EnhancedData zero_data(const Grid& g);

/// Heat-kernel symbol exp(-4 pi^2 eps^2 |k|^2).
double mollifier_symbol(double eps, double k2);
SpectralField mollify(const SpectralField& f, double eps);
VectorField mollify(const VectorField& f, double eps);

/// Throws ResolutionError unless exp(-4 pi^2 eps^2 (n/2)^2) <= 1e-8.
void require_resolved(const Grid& g, double eps);

/// sum_{k != 0} 4 pi^2 |k|^2 m(eps k)^2 / (1 + 4 pi^2 |k|^2)^2  (d = 2).
double wick_constant(const Grid& g, double eps);

/// Leray projector onto divergence-free fields (k = 0 kept).
VectorField helmholtz_project(const VectorField& v);

/// Anderson data: V = rho = 0, xi = mollified white noise,
/// W = -(1 - Delta)^{-1} xi, c = wick_constant, Z = -(|grad W|^2 - c).
EnhancedData enhance_anderson2d(const Grid& g, double eps, std::uint64_t seed);

/// Generic data (kinds generic_I, generic_II): random xi, V, rho with the
/// regularities of the chosen assumption, mollified at eps, rho made
/// divergence free; W solves (lam - Delta)W - |grad W|^2 + grad W.grad V + xi = 0
/// and then Z = (1 - lam) W, c = 0. lam <= 0 selects lam automatically (and
/// doubles it further if the Picard solve then fails).
///
/// smooth_manufactured: W, V, rho are fixed smooth low-mode fields scaled by
/// the amplitude, Z = 0, c = 0, and xi is defined from the KPZ-type identity
/// so that it holds exactly. eps is recorded but not used.
EnhancedData enhance_generic(const NoiseSpec& spec, const Grid& g, double eps,
                             double lam = 0.0, double tol = 1e-12);

/// Dispatches on spec.kind (anderson2d uses spec.seed and ignores the rest).
EnhancedData enhance(const NoiseSpec& spec, const Grid& g, double eps, double tol = 1e-12);

/// Fills Z_tilde, rho_exp, sp_V, sp_W from xi, V, rho, W, Z.
void build_products(EnhancedData& d);

/// L2 norm of (1 - Delta)W - |grad W|^2 + grad W.grad V + xi + c - Z.
double kpz_residual(const EnhancedData& d);

void save_enhanced(const EnhancedData& d, const std::filesystem::path& dir);
EnhancedData load_enhanced(const std::filesystem::path& dir);

}  // namespace paradom
