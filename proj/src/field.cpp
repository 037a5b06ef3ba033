#include "paradom/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paradom/error.hpp"

namespace paradom {

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 3)
    throw ConfigError("grid dimension must be 1, 2 or 3, got " +
                      std::to_string(dim));
  if (n < 8 || (n & (n - 1)) != 0)
    throw ConfigError("grid size must be a power of two >= 8, got " +
                      std::to_string(n));
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);

  auto tab = std::make_shared<Tables>();
  tab->k.resize(size_);
  tab->k2.resize(size_);
  tab->conj.resize(size_);
  tab->nyquist.resize(size_);
  for (std::size_t flat = 0; flat < size_; ++flat) {
    std::array<int, 3> k{0, 0, 0};
    std::size_t rem = flat;
    std::size_t conj = 0;
    bool nyq = false;
    for (int a = dim - 1; a >= 0; --a) {
      const int i = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
      k[a] = freq_of_index(i);
      if (i == n / 2) nyq = true;
    }
    double k2 = 0.0;
    std::size_t stride = 1;
    for (int a = dim - 1; a >= 0; --a) {
      k2 += static_cast<double>(k[a]) * k[a];
      conj += static_cast<std::size_t>((n - index_of_freq(k[a])) % n) * stride;
      stride *= static_cast<std::size_t>(n);
    }
    tab->k[flat] = k;
    tab->k2[flat] = k2;
    tab->conj[flat] = conj;
    tab->nyquist[flat] = nyq ? 1 : 0;
  }
  tab_ = std::move(tab);
}

std::size_t Grid::flat_of_freq(const std::array<int, 3>& k) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    int kk = ((k[a] % n_) + n_) % n_;
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(kk);
  }
  return flat;
}

SpectralField::SpectralField(const Grid& grid)
    : grid_(grid), c_(grid.size(), cplx(0.0, 0.0)) {}

SpectralField::SpectralField(const Grid& grid, std::vector<cplx> coeffs)
    : grid_(grid), c_(std::move(coeffs)) {
  if (c_.size() != grid_.size())
    throw ConfigError("coefficient count " + std::to_string(c_.size()) +
                      " does not match grid size " +
                      std::to_string(grid_.size()));
}

SpectralField SpectralField::constant(const Grid& grid, double value) {
  SpectralField f(grid);
  f.c_[0] = value;
  return f;
}

void SpectralField::set(const std::array<int, 3>& k, cplx v) {
  c_[grid_.flat_of_freq(k)] = v;
}

double SpectralField::hermitian_residue() const {
  double r = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i)
    r = std::max(r, std::abs(c_[i] - std::conj(c_[grid_.conj_index(i)])));
  return r;
}

double SpectralField::symmetrize() {
  double r = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const std::size_t j = grid_.conj_index(i);
    if (j < i) continue;
    const cplx a = c_[i];
    const cplx b = std::conj(c_[j]);
    r = std::max(r, std::abs(a - b));
    const cplx h = 0.5 * (a + b);
    c_[i] = h;
    c_[j] = std::conj(h);
  }
  return r;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o, "operator+=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o, "operator-=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_grid(*this, o, "axpy");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * o.c_[i];
  return *this;
}

bool SpectralField::is_zero() const {
  return std::all_of(c_.begin(), c_.end(),
                     [](const cplx& v) { return v == cplx(0.0, 0.0); });
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}
SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}
SpectralField operator*(double s, SpectralField a) {
  a *= s;
  return a;
}
SpectralField operator-(SpectralField a) {
  a *= -1.0;
  return a;
}

VectorField zero_vector(const Grid& grid) {
  return VectorField(static_cast<std::size_t>(grid.dim()), SpectralField(grid));
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

double inner(const VectorField& a, const VectorField& b) {
  if (a.size() != b.size())
    throw ConfigError("inner: vector component count mismatch");
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += inner(a[c], b[c]);
  return s;
}

double l2_norm(const SpectralField& f) { return std::sqrt(inner(f, f)); }

double l2_norm(const VectorField& f) { return std::sqrt(inner(f, f)); }

double max_abs_coeff(const SpectralField& f) {
  double m = 0.0;
  for (const auto& v : f.coeffs()) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const SpectralField& a, const SpectralField& b,
                       const char* where) {
  if (a.grid() != b.grid())
    throw ConfigError(std::string(where) + ": grid mismatch (d=" +
                      std::to_string(a.grid().dim()) +
                      " n=" + std::to_string(a.grid().n()) + " vs d=" +
                      std::to_string(b.grid().dim()) +
                      " n=" + std::to_string(b.grid().n()) + ")");
}

}  // namespace paradom
