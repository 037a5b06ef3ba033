#include "paradom/random.hpp"

#include <cmath>

#include "paradom/error.hpp"

namespace paradom {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_open(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// -k is canonical when the first nonzero component of k is negative.
bool is_canonical(const std::array<int, 3>& k, int dim) {
  for (int a = 0; a < dim; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return true;
}

template <class Amp>
SpectralField hermitian_gaussian(const Grid& g, std::uint64_t seed,
                                 std::uint64_t stream, Amp&& amp) {
  SpectralField f(g);
  const int dim = g.dim();
  const int half = g.n() / 2;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& k = g.k(i);
    const double a = amp(i);
    if (a == 0.0) continue;
    const std::size_t j = g.conj_index(i);
    if (j == i) {
      f[i] = a * counter_normal(seed, stream, k, 0);
      continue;
    }
    // Nyquist components identify k and k - n e_a; use the representative
    // with entries in [-n/2+1, n/2] that the grid already reports.
    std::array<int, 3> ck = k;
    bool canon = is_canonical(k, dim);
    if (g.is_nyquist(i)) {
      std::array<int, 3> mk{0, 0, 0};
      for (int b = 0; b < dim; ++b) mk[b] = (k[b] == half) ? half : -k[b];
      canon = i < j;
      ck = canon ? k : mk;
    } else if (!canon) {
      ck = {-k[0], -k[1], -k[2]};
    }
    const cplx z(counter_normal(seed, stream, ck, 0),
                 counter_normal(seed, stream, ck, 1));
    const cplx v = a * z / std::sqrt(2.0);
    f[i] = canon ? v : std::conj(v);
  }
  return f;
}

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t stream,
                      const std::array<int, 3>& k, int which) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  for (int a = 0; a < 3; ++a)
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k[a])));
  const double u1 = unit_open(splitmix64(h ^ 0x1ULL));
  const double u2 = unit_open(splitmix64(h ^ 0x2ULL));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * kPi * u2;
  return which == 0 ? r * std::cos(t) : r * std::sin(t);
}

SpectralField random_field(const Grid& g, std::uint64_t seed,
                           const RandomFieldOptions& opt) {
  if (!(opt.kmin <= opt.kmax))
    throw ConfigError("random_field: kmin must not exceed kmax");
  const double e = -opt.alpha - 0.5 * g.dim();
  return hermitian_gaussian(g, seed, opt.stream, [&](std::size_t i) {
    const double k2 = g.k2(i);
    if (k2 == 0.0) return 0.0;
    if (!opt.include_nyquist && g.is_nyquist(i)) return 0.0;
    const double kk = std::sqrt(k2);
    if (kk < opt.kmin || kk > opt.kmax) return 0.0;
    return std::pow(kk, e);
  });
}

SpectralField sample_white_noise(const Grid& g, std::uint64_t seed) {
  if (g.dim() < 2)
    throw ConfigError("sample_white_noise: dimension must be 2 or 3");
  return hermitian_gaussian(g, seed, 0x5745ULL, [&](std::size_t i) {
    return g.k2(i) == 0.0 ? 0.0 : 1.0;
  });
}

}  // namespace paradom
