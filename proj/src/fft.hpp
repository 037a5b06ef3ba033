#pragma once

// Internal FFTW wrapper: cached real-to-complex / complex-to-real plans on
// m^d grids, plus RAII buffers. Plans are created with FFTW_ESTIMATE so that
// the chosen algorithm (and hence every rounding) is reproducible.

#include <fftw3.h>

#include <cstddef>

namespace paradom::detail {

std::size_t real_size(int dim, int m);
std::size_t half_size(int dim, int m);

class FftBuffers {
 public:
  FftBuffers(int dim, int m);
  ~FftBuffers();
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  double* real() { return real_; }
  fftw_complex* half() { return half_; }
  std::size_t nreal() const { return nreal_; }
  std::size_t nhalf() const { return nhalf_; }
  int dim() const { return dim_; }
  int m() const { return m_; }

  /// half -> real (unnormalized backward transform; destroys half)
  void backward();
  /// real -> half (unnormalized forward transform)
  void forward();

 private:
  int dim_;
  int m_;
  std::size_t nreal_;
  std::size_t nhalf_;
  double* real_;
  fftw_complex* half_;
};

}  // namespace paradom::detail
