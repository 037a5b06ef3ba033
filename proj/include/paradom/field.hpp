#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace paradom {

using cplx = std::complex<double>;

/// Periodic grid on the d-torus (R/Z)^d with n points per axis.
///
/// Coefficients are stored in FFT layout: along every axis index i carries
/// frequency i for i <= n/2 and i - n otherwise, axis 0 slowest. The
/// physical sample layout uses the same row-major order with x_i = i/n.
class Grid {
 public:
  Grid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }

  int freq_of_index(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }
  int index_of_freq(int k) const noexcept { return k >= 0 ? k : k + n_; }

  /// Integer frequency vector of flat entry `flat` (unused components 0).
  const std::array<int, 3>& k(std::size_t flat) const { return tab_->k[flat]; }
  /// |k|^2 of flat entry.
  double k2(std::size_t flat) const { return tab_->k2[flat]; }
  /// Flat index of -k (mod n).
  std::size_t conj_index(std::size_t flat) const { return tab_->conj[flat]; }
  /// True when some axis sits at the Nyquist index n/2.
  bool is_nyquist(std::size_t flat) const { return tab_->nyquist[flat] != 0; }

  std::size_t flat_of_freq(const std::array<int, 3>& k) const;

  bool operator==(const Grid& o) const noexcept {
    return dim_ == o.dim_ && n_ == o.n_;
  }
  bool operator!=(const Grid& o) const noexcept { return !(*this == o); }

 private:
  struct Tables {
    std::vector<std::array<int, 3>> k;
    std::vector<double> k2;
    std::vector<std::size_t> conj;
    std::vector<unsigned char> nyquist;
  };

  int dim_;
  int n_;
  std::size_t size_;
  std::shared_ptr<const Tables> tab_;
};

/// Real-valued function on the torus held as Hermitian-symmetric Fourier
/// coefficients, u(x) = sum_k exp(-2 pi i k.x) c(k).
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);
  SpectralField(const Grid& grid, std::vector<cplx> coeffs);

  static SpectralField constant(const Grid& grid, double value);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return c_.size(); }

  cplx& operator[](std::size_t i) { return c_[i]; }
  const cplx& operator[](std::size_t i) const { return c_[i]; }
  std::span<cplx> coeffs() { return c_; }
  std::span<const cplx> coeffs() const { return c_; }

  /// Coefficient at integer frequency k (components beyond dim ignored).
  cplx at(const std::array<int, 3>& k) const { return c_[grid_.flat_of_freq(k)]; }
  void set(const std::array<int, 3>& k, cplx v);

  /// Max |c(k) - conj(c(-k))|.
  double hermitian_residue() const;
  /// Replace c by its Hermitian part; returns the residue before the fix.
  double symmetrize();

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  bool is_zero() const;

 private:
  Grid grid_;
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);
SpectralField operator-(SpectralField a);

/// A d-component vector field on one grid.
using VectorField = std::vector<SpectralField>;

VectorField zero_vector(const Grid& grid);

/// L2 inner product (grid mean of u v), equal to sum_k Re(u(k) conj v(k)).
double inner(const SpectralField& a, const SpectralField& b);
double inner(const VectorField& a, const VectorField& b);
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& f);
double max_abs_coeff(const SpectralField& f);

void require_same_grid(const SpectralField& a, const SpectralField& b,
                       const char* where);

}  // namespace paradom
