#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "paradom/error.hpp"
#include "paradom/random.hpp"
#include "paradom/spectral.hpp"

using namespace paradom;

namespace {

// Direct O(N^2) transform with the library's sign convention.
std::vector<cplx> direct_dft(const Grid& g, const std::vector<double>& u) {
  const int n = g.n();
  std::vector<cplx> c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& k = g.k(i);
    cplx s = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      std::size_t rem = x;
      double phase = 0;
      for (int a = g.dim() - 1; a >= 0; --a) {
        phase += static_cast<double>(k[a]) * static_cast<double>(rem % n) / n;
        rem /= n;
      }
      s += std::polar(1.0, 2 * kPi * phase) * u[x];
    }
    c[i] = s / static_cast<double>(g.size());
  }
  return c;
}

std::vector<double> samples(const Grid& g, double (*fn)(double, double)) {
  std::vector<double> u(g.size());
  const int n = g.n();
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double x0 = static_cast<double>(x / n) / n;
    const double x1 = static_cast<double>(x % n) / n;
    u[x] = fn(x0, x1);
  }
  return u;
}

}  // namespace

TEST_CASE("constant and single-mode transforms") {
  Grid g(2, 16);
  std::vector<double> one(g.size(), 1.0);
  auto c = to_spectral(g, one);
  CHECK(std::abs(c[0] - 1.0) < 1e-15);
  CHECK(max_abs_coeff(c - SpectralField::constant(g, 1.0)) < 1e-15);

  auto u = samples(g, [](double x0, double) { return std::cos(2 * kPi * x0); });
  auto f = to_spectral(g, u);
  CHECK(std::abs(f.at({1, 0, 0}) - 0.5) < 1e-15);
  CHECK(std::abs(f.at({-1, 0, 0}) - 0.5) < 1e-15);
  f.set({1, 0, 0}, 0.0);
  f.set({-1, 0, 0}, 0.0);
  CHECK(max_abs_coeff(f) < 1e-15);
}

TEST_CASE("round trip against direct DFT oracle") {
  for (int d = 1; d <= 3; ++d) {
    Grid g(d, 8);
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(1.7 * i + 0.3 * i * i);
    auto f = to_spectral(g, u);
    auto ref = direct_dft(g, u);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(f[i] - ref[i]));
    CHECK(err < 1e-14);
    auto back = to_physical(f);
    double e2 = 0, m = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      e2 = std::max(e2, std::abs(back[i] - u[i]));
      m = std::max(m, std::abs(u[i]));
    }
    CHECK(e2 <= 1e-12 * m);
    CHECK(f.hermitian_residue() < 1e-15);
  }
}

TEST_CASE("size mismatch is a configuration error") {
  Grid g(2, 8);
  std::vector<double> u(10);
  CHECK_THROWS_AS(to_spectral(g, u), ConfigError);
  CHECK_THROWS_AS(Grid(2, 12), ConfigError);
  CHECK_THROWS_AS(Grid(4, 16), ConfigError);
}

TEST_CASE("Parseval") {
  Grid g(2, 32);
  auto f = random_field(g, 3, {.alpha = 0.2, .include_nyquist = true});
  auto u = to_physical(f);
  double m = 0;
  for (double v : u) m += v * v;
  m /= static_cast<double>(u.size());
  CHECK(std::abs(inner(f, f) - m) <= 1e-12 * m);
}

TEST_CASE("multipliers") {
  Grid g(2, 32);
  auto f = random_field(g, 5, {.alpha = 0.0});
  CHECK(max_abs_coeff(fourier_multiplier(f, [](const auto&) { return cplx(1.0); }) - f) == 0.0);
  auto up = fourier_multiplier(f, [](const std::array<int, 3>& k) {
    return cplx(1 + 4 * kPi * kPi * (k[0] * k[0] + k[1] * k[1]));
  });
  auto down = fourier_multiplier(up, [](const std::array<int, 3>& k) {
    return cplx(1 / (1 + 4 * kPi * kPi * (k[0] * k[0] + k[1] * k[1])));
  });
  CHECK(l2_norm(down - f) <= 1e-12 * l2_norm(f));
  CHECK_THROWS_AS(fourier_multiplier(f, [](const std::array<int, 3>& k) {
                    return cplx(1.0 / (k[0] * k[0] + k[1] * k[1]));
                  }),
                  MultiplierError);
  // m1 m2 composition
  auto m1 = [](const std::array<int, 3>& k) { return cplx(1.0 + k[0] * k[0]); };
  auto m2 = [](const std::array<int, 3>& k) { return cplx(2.0 + k[1] * k[1]); };
  auto a = fourier_multiplier(fourier_multiplier(f, m1), m2);
  auto b = fourier_multiplier(f, [&](const std::array<int, 3>& k) { return m1(k) * m2(k); });
  CHECK(max_abs_coeff(a - b) <= 1e-15 * max_abs_coeff(b));
}

TEST_CASE("sobolev scale and norm") {
  Grid g(2, 16);
  auto f = random_field(g, 7, {});
  CHECK(max_abs_coeff(sobolev_scale(f, 0.0) - f) == 0.0);
  CHECK(l2_norm(sobolev_scale(sobolev_scale(f, 2.0), -2.0) - f) <= 1e-12 * l2_norm(f));
  auto c = to_spectral(g, samples(g, [](double x0, double) { return std::cos(2 * kPi * x0); }));
  const double expect = (1 + 4 * kPi * kPi) / 2;
  CHECK(std::abs(sobolev_norm(c, 1.0) * sobolev_norm(c, 1.0) - expect) < 1e-12 * expect);
  // quadrature oracle: mean(u^2) + mean(|grad u|^2)
  auto q = samples(g, [](double x0, double) {
    return std::pow(std::cos(2 * kPi * x0), 2) + std::pow(2 * kPi * std::sin(2 * kPi * x0), 2);
  });
  double mean = 0;
  for (double v : q) mean += v;
  mean /= static_cast<double>(q.size());
  CHECK(std::abs(mean - expect) < 1e-12 * expect);
}

TEST_CASE("derivatives") {
  Grid g(2, 16);
  auto s = to_spectral(g, samples(g, [](double, double x1) { return std::sin(2 * kPi * x1); }));
  auto d = to_physical(partial(s, 1));
  auto ref = samples(g, [](double, double x1) { return 2 * kPi * std::cos(2 * kPi * x1); });
  double err = 0;
  for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(d[i] - ref[i]));
  CHECK(err < 1e-12);
  auto c = to_spectral(g, samples(g, [](double x0, double) { return std::cos(2 * kPi * x0); }));
  auto dc = to_physical(partial(c, 0));
  auto rc = samples(g, [](double x0, double) { return -2 * kPi * std::sin(2 * kPi * x0); });
  err = 0;
  for (std::size_t i = 0; i < dc.size(); ++i) err = std::max(err, std::abs(dc[i] - rc[i]));
  CHECK(err < 1e-12);

  CHECK(l2_norm(grad(SpectralField::constant(g, 3.0))) == 0.0);
  auto f = random_field(g, 11, {});
  CHECK(l2_norm(div(grad(f)) - laplacian(f)) <= 1e-12 * l2_norm(laplacian(f)));
  CHECK_THROWS_AS(div(VectorField{f}), ConfigError);
}

TEST_CASE("frequency projectors") {
  Grid g(2, 32);
  auto f = random_field(g, 2, {.include_nyquist = true});
  for (int L = 0; L < 5; ++L) {
    auto hi = project_frequencies(f, L, Side::high);
    auto lo = project_frequencies(f, L, Side::low);
    CHECK(max_abs_coeff(hi + lo - f) == 0.0);
    CHECK(max_abs_coeff(project_frequencies(hi, L, Side::high) - hi) == 0.0);
  }
  CHECK(project_frequencies(SpectralField::constant(g, 2.0), 0, Side::high).is_zero());
  SpectralField m(g);
  m.set({3, 4, 0}, 1.0);
  m.set({-3, -4, 0}, 1.0);
  CHECK(!project_frequencies(m, 2, Side::high).is_zero());
  CHECK(project_frequencies(m, 3, Side::high).is_zero());
}

TEST_CASE("dealiased product against convolution oracle") {
  Grid g(2, 8);
  SpectralField a(g), b(g);
  a.set({1, 2, 0}, cplx(0.5, 0.25));
  a.set({-1, -2, 0}, cplx(0.5, -0.25));
  b.set({2, -1, 0}, cplx(-0.3, 0.1));
  b.set({-2, 1, 0}, cplx(-0.3, -0.1));
  auto p = pointwise_product(a, b);
  SpectralField ref(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (a[i] == 0.0 || b[j] == 0.0) continue;
      std::array<int, 3> k{g.k(i)[0] + g.k(j)[0], g.k(i)[1] + g.k(j)[1], 0};
      if (std::abs(k[0]) >= 4 || std::abs(k[1]) >= 4) continue;
      ref[g.flat_of_freq(k)] += a[i] * b[j];
    }
  CHECK(max_abs_coeff(p - ref) < 1e-15);

  // random fields band limited below n/4: full convolution oracle
  Grid h(2, 16);
  auto f = random_field(h, 1, {.kmax = 3.9});
  auto q = random_field(h, 2, {.kmax = 3.9});
  SpectralField conv(h);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (f[i] == 0.0 || q[j] == 0.0) continue;
      std::array<int, 3> k{h.k(i)[0] + h.k(j)[0], h.k(i)[1] + h.k(j)[1], 0};
      conv[h.flat_of_freq(k)] += f[i] * q[j];
    }
  CHECK(max_abs_coeff(pointwise_product(f, q) - conv) < 1e-12 * max_abs_coeff(conv));
  CHECK(max_abs_coeff(pointwise_product(f, SpectralField::constant(h, 1.0)) - f) < 1e-15);
  CHECK(max_abs_coeff(pointwise_product(f, q) - pointwise_product(q, f)) < 1e-15);
  CHECK_THROWS_AS(pointwise_product(f, SpectralField(g)), ConfigError);
}

TEST_CASE("exponential") {
  Grid g(2, 32);
  SpectralField zero(g);
  CHECK(max_abs_coeff(exp_field(zero) - SpectralField::constant(g, 1.0)) < 1e-15);
  SpectralField c(g);
  c.set({1, 0, 0}, 0.05);
  c.set({-1, 0, 0}, 0.05);
  auto e = to_physical(exp_field(c));
  const int n = g.n();
  double err = 0;
  for (std::size_t x = 0; x < g.size(); ++x)
    err = std::max(err, std::abs(e[x] - std::exp(0.1 * std::cos(2 * kPi * (x / n) / n))));
  CHECK(err < 1e-10);
  auto f = random_field(g, 4, {.alpha = 2.0, .kmax = 4});
  f *= 0.5 / sup_norm(f);
  auto prod = to_physical(pointwise_product(exp_field(f), exp_field(-f)));
  err = 0;
  for (double v : prod) err = std::max(err, std::abs(v - 1.0));
  CHECK(err < 1e-10);
  for (double v : to_physical(exp_field(f))) CHECK(v > 0.0);
  CHECK_THROWS_AS(exp_field(SpectralField::constant(g, 701.0)), RangeError);
}
