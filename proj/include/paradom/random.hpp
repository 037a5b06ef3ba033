#pragma once

#include <cstdint>

#include "paradom/field.hpp"
#include "paradom/spectral.hpp"

namespace paradom {

/// Counter-based standard normal: a pure function of (seed, stream, k), so
/// a given frequency receives the same draw on every grid that holds it.
double counter_normal(std::uint64_t seed, std::uint64_t stream,
                      const std::array<int, 3>& k, int which);

struct RandomFieldOptions {
  /// Spectral decay |k|^{-alpha-d/2}.
  double alpha = 0.0;
  /// Keep kmin <= |k| <= kmax (Euclidean).
  double kmin = 1.0;
  double kmax = kInf;
  /// Independent streams for independent fields under one seed.
  std::uint64_t stream = 0;
  bool include_nyquist = false;
};

/// Hermitian random field with |k|^{-alpha-d/2} times a standard complex
/// Gaussian on the selected frequencies; zero mean.
SpectralField random_field(const Grid& grid, std::uint64_t seed,
                           const RandomFieldOptions& opt = {});

/// Spatial white noise truncated to the lattice: E|c(k)|^2 = 1, c(0) = 0.
SpectralField sample_white_noise(const Grid& grid, std::uint64_t seed);

}  // namespace paradom
