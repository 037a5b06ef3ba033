#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "paradom/field.hpp"

namespace paradom {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Transforms. The forward map is c(k) = mean_x exp(2 pi i k.x) u(x); the
// inverse is u(x) = sum_k exp(-2 pi i k.x) c(k). Constants map to c(0).
// ---------------------------------------------------------------------------

std::vector<double> to_physical(const SpectralField& f);
SpectralField to_spectral(const Grid& grid, std::span<const double> samples);

// ---------------------------------------------------------------------------
// Multipliers
// ---------------------------------------------------------------------------

using Symbol = std::function<cplx(const std::array<int, 3>& k)>;

/// Multiply by m(k); the result is re-symmetrized. Throws MultiplierError if
/// m(k) is not finite at some lattice frequency.
SpectralField fourier_multiplier(const SpectralField& f, const Symbol& m);

/// Multiply by a real even symbol tabulated per flat index.
SpectralField apply_symbol(const SpectralField& f, std::span<const double> sym);
void apply_symbol_inplace(SpectralField& f, std::span<const double> sym);

/// Multiplier g(|k|^2) for a real function g.
SpectralField radial_multiplier(const SpectralField& f,
                                const std::function<double(double)>& g);

/// (1 - Delta)^{s/2}
SpectralField sobolev_scale(const SpectralField& f, double s);
double sobolev_norm(const SpectralField& f, double s);

SpectralField laplacian(const SpectralField& f);
/// (1 - Delta) f
SpectralField one_minus_laplacian(const SpectralField& f);
/// (lam - Delta)^{-1} f; lam > 0.
SpectralField resolve_helmholtz(const SpectralField& f, double lam);
/// (1 - Delta)^{-1} f
inline SpectralField inv_one_minus_laplacian(const SpectralField& f) {
  return resolve_helmholtz(f, 1.0);
}

/// d/dx_axis, symbol -2 pi i k_axis (zero on the Nyquist index so the
/// symbol stays Hermitian on the lattice).
SpectralField partial(const SpectralField& f, int axis);
VectorField grad(const SpectralField& f);
SpectralField div(const VectorField& v);

enum class Side { high, low };

/// P_{>L} (side high, |k| > 2^L) or P_{<=L} (side low), Euclidean |k|.
SpectralField project_frequencies(const SpectralField& f, int L, Side side);

/// Keep coefficients with max_i |k_i| <= K.
SpectralField truncate_box(const SpectralField& f, int K);

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Largest max_i |k_i| over the nonzero coefficients (-1 for the zero field).
int band_of(const SpectralField& f);

/// Exact product of two band-limited fields, truncated to the open band
/// |k_i| < n/2. The padded grid is chosen from the actual input bands so no
/// alias reaches a retained frequency. Nyquist inputs are split evenly
/// between +n/2 and -n/2.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

/// As pointwise_product but only frequencies with max_i |k_i| <= out_band
/// are produced.
SpectralField product_banded(const SpectralField& f, const SpectralField& g,
                             int out_band);

/// sum_i f_i g_i
SpectralField dot(const VectorField& f, const VectorField& g);
/// Componentwise a * v_i
VectorField scale(const SpectralField& a, const VectorField& v);

/// Pointwise exponential evaluated on the 2x padded grid and truncated back.
/// Throws RangeError if some sample exceeds 700.
SpectralField exp_field(const SpectralField& f);

/// Samples of f on the m^d grid (m >= n) by zero padding.
std::vector<double> to_physical_padded(const SpectralField& f, int m);

// ---------------------------------------------------------------------------
// Norms on physical samples (grid means)
// ---------------------------------------------------------------------------

double lp_norm(const SpectralField& f, double p);
double lp_norm_samples(std::span<const double> u, double p);
double sup_norm(const SpectralField& f);

/// Smallest 2^a 3^b 5^c integer that is even and >= m.
int good_fft_size(int m);

}  // namespace paradom
