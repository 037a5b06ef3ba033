#include "paradom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fft.hpp"
#include "paradom/error.hpp"

namespace paradom {
namespace {

using detail::FftBuffers;

template <class Fn>
void for_each_in_box(int dim, int lo, int hi, Fn&& fn) {
  std::array<int, 3> k{0, 0, 0};
  if (lo > hi) return;
  if (dim == 1) {
    for (k[0] = lo; k[0] <= hi; ++k[0]) fn(k);
  } else if (dim == 2) {
    for (k[0] = lo; k[0] <= hi; ++k[0])
      for (k[1] = lo; k[1] <= hi; ++k[1]) fn(k);
  } else {
    for (k[0] = lo; k[0] <= hi; ++k[0])
      for (k[1] = lo; k[1] <= hi; ++k[1])
        for (k[2] = lo; k[2] <= hi; ++k[2]) fn(k);
  }
}

inline int wrap(int k, int m) { return k >= 0 ? k : k + m; }

inline std::size_t half_index(const std::array<int, 3>& k, int dim, int m) {
  std::size_t flat = 0;
  for (int a = 0; a + 1 < dim; ++a)
    flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(wrap(k[a], m));
  return flat * static_cast<std::size_t>(m / 2 + 1) +
         static_cast<std::size_t>(k[dim - 1]);
}

// Writes the half spectrum of f (band <= K) onto an m-grid, m > n.
void embed(const SpectralField& f, int K, FftBuffers& buf) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const int n = g.n();
  const int m = buf.m();
  fftw_complex* h = buf.half();
  std::fill(reinterpret_cast<double*>(h),
            reinterpret_cast<double*>(h) + 2 * buf.nhalf(), 0.0);
  const int lo = std::max(-K, -n / 2 + 1);
  const int hi = std::min(K, n / 2);
  for_each_in_box(dim, lo, hi, [&](const std::array<int, 3>& k) {
    const cplx c = f[g.flat_of_freq(k)];
    if (c == cplx(0.0, 0.0)) return;
    int nyq_axes[3];
    int nq = 0;
    for (int a = 0; a < dim; ++a)
      if (k[a] == n / 2) nyq_axes[nq++] = a;
    const double w = std::ldexp(1.0, -nq);
    const cplx v = w * std::conj(c);
    for (int mask = 0; mask < (1 << nq); ++mask) {
      std::array<int, 3> kk = k;
      for (int b = 0; b < nq; ++b)
        if (mask & (1 << b)) kk[nyq_axes[b]] = -n / 2;
      if (kk[dim - 1] < 0) continue;
      const std::size_t idx = half_index(kk, dim, m);
      h[idx][0] += v.real();
      h[idx][1] += v.imag();
    }
  });
}

// Reads coefficients with max|k_i| <= K (K < n/2) from a forward transform.
SpectralField extract(const Grid& g, FftBuffers& buf, int K) {
  SpectralField out(g);
  const int dim = g.dim();
  const int m = buf.m();
  const double scale = 1.0 / static_cast<double>(buf.nreal());
  const fftw_complex* h = buf.half();
  for_each_in_box(dim, -K, K, [&](const std::array<int, 3>& k) {
    cplx v;
    if (k[dim - 1] >= 0) {
      const std::size_t idx = half_index(k, dim, m);
      v = cplx(h[idx][0], -h[idx][1]) * scale;
    } else {
      std::array<int, 3> nk{-k[0], -k[1], -k[2]};
      const std::size_t idx = half_index(nk, dim, m);
      v = cplx(h[idx][0], h[idx][1]) * scale;
    }
    out[g.flat_of_freq(k)] = v;
  });
  return out;
}

int nearest_small_prime_size(int m) {
  for (int c = std::max(m, 2);; ++c) {
    if (c % 2) continue;
    int r = c;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return c;
  }
}

}  // namespace

int good_fft_size(int m) { return nearest_small_prime_size(m); }

std::vector<double> to_physical(const SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int dim = g.dim();
  FftBuffers buf(dim, n);
  fftw_complex* h = buf.half();
  const std::size_t last = static_cast<std::size_t>(n / 2 + 1);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const std::size_t i = flat % static_cast<std::size_t>(n);
    if (i > static_cast<std::size_t>(n / 2)) continue;
    const std::size_t idx = (flat / static_cast<std::size_t>(n)) * last + i;
    h[idx][0] = f[flat].real();
    h[idx][1] = -f[flat].imag();
  }
  buf.backward();
  return std::vector<double>(buf.real(), buf.real() + buf.nreal());
}

SpectralField to_spectral(const Grid& g, std::span<const double> samples) {
  if (samples.size() != g.size()) {
    std::ostringstream os;
    os << "to_spectral: " << samples.size() << " samples for a grid of "
       << g.size() << " points";
    throw ConfigError(os.str());
  }
  const int n = g.n();
  FftBuffers buf(g.dim(), n);
  std::copy(samples.begin(), samples.end(), buf.real());
  buf.forward();
  SpectralField out(g);
  const double scale = 1.0 / static_cast<double>(g.size());
  const std::size_t last = static_cast<std::size_t>(n / 2 + 1);
  const fftw_complex* h = buf.half();
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const std::size_t i = flat % static_cast<std::size_t>(n);
    if (i > static_cast<std::size_t>(n / 2)) continue;
    const std::size_t idx = (flat / static_cast<std::size_t>(n)) * last + i;
    out[flat] = cplx(h[idx][0], -h[idx][1]) * scale;
  }
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const std::size_t i = flat % static_cast<std::size_t>(n);
    if (i <= static_cast<std::size_t>(n / 2)) continue;
    out[flat] = std::conj(out[g.conj_index(flat)]);
  }
  return out;
}

SpectralField fourier_multiplier(const SpectralField& f, const Symbol& m) {
  const Grid& g = f.grid();
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx s = m(g.k(i));
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      const auto& k = g.k(i);
      std::ostringstream os;
      os << "fourier_multiplier: non-finite symbol at k=(" << k[0];
      for (int a = 1; a < g.dim(); ++a) os << "," << k[a];
      os << ")";
      throw MultiplierError(os.str());
    }
    out[i] = s * f[i];
  }
  out.symmetrize();
  return out;
}

SpectralField apply_symbol(const SpectralField& f, std::span<const double> sym) {
  SpectralField out = f;
  apply_symbol_inplace(out, sym);
  return out;
}

void apply_symbol_inplace(SpectralField& f, std::span<const double> sym) {
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= sym[i];
}

SpectralField radial_multiplier(const SpectralField& f,
                                const std::function<double(double)>& gfun) {
  const Grid& g = f.grid();
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (f[i] == cplx(0.0, 0.0)) continue;
    out[i] = gfun(g.k2(i)) * f[i];
  }
  return out;
}

SpectralField sobolev_scale(const SpectralField& f, double s) {
  if (s == 0.0) return f;
  const double fp2 = 4.0 * kPi * kPi;
  return radial_multiplier(
      f, [&](double k2) { return std::pow(1.0 + fp2 * k2, 0.5 * s); });
}

double sobolev_norm(const SpectralField& f, double s) {
  const Grid& g = f.grid();
  const double fp2 = 4.0 * kPi * kPi;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::norm(f[i]);
    if (a == 0.0) continue;
    acc += a * std::pow(1.0 + fp2 * g.k2(i), s);
  }
  return std::sqrt(acc);
}

SpectralField laplacian(const SpectralField& f) {
  const double fp2 = 4.0 * kPi * kPi;
  return radial_multiplier(f, [&](double k2) { return -fp2 * k2; });
}

SpectralField one_minus_laplacian(const SpectralField& f) {
  const double fp2 = 4.0 * kPi * kPi;
  return radial_multiplier(f, [&](double k2) { return 1.0 + fp2 * k2; });
}

SpectralField resolve_helmholtz(const SpectralField& f, double lam) {
  if (!(lam > 0.0))
    throw ConfigError("resolve_helmholtz: shift must be positive");
  const double fp2 = 4.0 * kPi * kPi;
  return radial_multiplier(f, [&](double k2) { return 1.0 / (lam + fp2 * k2); });
}

SpectralField partial(const SpectralField& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim())
    throw ConfigError("partial: axis out of range");
  SpectralField out(g);
  const int nyq = g.n() / 2;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int ka = g.k(i)[axis];
    if (ka == nyq || ka == 0) continue;
    out[i] = cplx(0.0, -2.0 * kPi * ka) * f[i];
  }
  return out;
}

VectorField grad(const SpectralField& f) {
  VectorField v;
  v.reserve(static_cast<std::size_t>(f.grid().dim()));
  for (int a = 0; a < f.grid().dim(); ++a) v.push_back(partial(f, a));
  return v;
}

SpectralField div(const VectorField& v) {
  if (v.empty()) throw ConfigError("div: empty vector field");
  const Grid& g = v[0].grid();
  if (static_cast<int>(v.size()) != g.dim())
    throw ConfigError("div: expected " + std::to_string(g.dim()) +
                      " components, got " + std::to_string(v.size()));
  SpectralField out(g);
  for (int a = 0; a < g.dim(); ++a) out += partial(v[static_cast<std::size_t>(a)], a);
  return out;
}

SpectralField project_frequencies(const SpectralField& f, int L, Side side) {
  if (L < 0) throw ConfigError("project_frequencies: L must be >= 0");
  const Grid& g = f.grid();
  const double r2 = std::ldexp(1.0, 2 * L);
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool high = g.k2(i) > r2;
    if (high == (side == Side::high)) out[i] = f[i];
  }
  return out;
}

SpectralField truncate_box(const SpectralField& f, int K) {
  const Grid& g = f.grid();
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& k = g.k(i);
    bool keep = true;
    for (int a = 0; a < g.dim(); ++a) keep = keep && std::abs(k[a]) <= K;
    if (keep) out[i] = f[i];
  }
  return out;
}

int band_of(const SpectralField& f) {
  const Grid& g = f.grid();
  int band = -1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (f[i] == cplx(0.0, 0.0)) continue;
    const auto& k = g.k(i);
    for (int a = 0; a < g.dim(); ++a) band = std::max(band, std::abs(k[a]));
  }
  return band;
}

SpectralField product_banded(const SpectralField& f, const SpectralField& g,
                             int out_band) {
  require_same_grid(f, g, "pointwise_product");
  const Grid& grid = f.grid();
  const int kf = band_of(f);
  const int kg = band_of(g);
  if (kf < 0 || kg < 0) return SpectralField(grid);
  const int ko = std::min({out_band, grid.n() / 2 - 1, kf + kg});
  if (ko < 0) return SpectralField(grid);
  // A constant factor is an exact scaling; skip the transforms.
  if (kf == 0 || kg == 0) {
    SpectralField out = truncate_box(kf == 0 ? g : f, ko);
    out *= (kf == 0 ? f : g)[0].real();
    return out;
  }
  const int m = good_fft_size(std::max(kf + kg + ko, 2 * std::max(kf, kg)) + 1);
  FftBuffers a(grid.dim(), m);
  FftBuffers b(grid.dim(), m);
  embed(f, kf, a);
  a.backward();
  embed(g, kg, b);
  b.backward();
  double* ra = a.real();
  const double* rb = b.real();
  for (std::size_t i = 0; i < a.nreal(); ++i) ra[i] *= rb[i];
  a.forward();
  return extract(grid, a, ko);
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  return product_banded(f, g, f.grid().n() / 2 - 1);
}

SpectralField dot(const VectorField& f, const VectorField& g) {
  if (f.size() != g.size() || f.empty())
    throw ConfigError("dot: component count mismatch");
  SpectralField out = pointwise_product(f[0], g[0]);
  for (std::size_t i = 1; i < f.size(); ++i) out += pointwise_product(f[i], g[i]);
  return out;
}

VectorField scale(const SpectralField& a, const VectorField& v) {
  VectorField out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(pointwise_product(a, c));
  return out;
}

std::vector<double> to_physical_padded(const SpectralField& f, int m) {
  const Grid& g = f.grid();
  if (m == g.n()) return to_physical(f);
  if (m < g.n()) throw ConfigError("to_physical_padded: m must be >= n");
  FftBuffers buf(g.dim(), m);
  embed(f, g.n() / 2, buf);
  buf.backward();
  return std::vector<double>(buf.real(), buf.real() + buf.nreal());
}

SpectralField exp_field(const SpectralField& f) {
  const Grid& g = f.grid();
  if (band_of(f) <= 0) {
    const double c = f[0].real();
    if (!(c <= 700.0)) throw RangeError("exp_field: constant value exceeds 700");
    return SpectralField::constant(g, std::exp(c));
  }
  const int m = 2 * g.n();
  FftBuffers buf(g.dim(), m);
  embed(f, g.n() / 2, buf);
  buf.backward();
  double* r = buf.real();
  for (std::size_t i = 0; i < buf.nreal(); ++i) {
    if (!(r[i] <= 700.0)) {
      std::ostringstream os;
      os << "exp_field: sample value " << r[i] << " exceeds 700";
      throw RangeError(os.str());
    }
    r[i] = std::exp(r[i]);
  }
  buf.forward();
  return extract(g, buf, g.n() / 2 - 1);
}

double lp_norm_samples(std::span<const double> u, double p) {
  if (u.empty()) return 0.0;
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (double v : u) acc += v * v;
    return std::sqrt(acc / static_cast<double>(u.size()));
  }
  for (double v : u) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(u.size()), 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) {
  if (p == 2.0) return l2_norm(f);
  const auto u = to_physical(f);
  return lp_norm_samples(u, p);
}

double sup_norm(const SpectralField& f) { return lp_norm(f, kInf); }

}  // namespace paradom
