#include <cmath>

#include "doctest.h"
#include "paradom/error.hpp"
#include "paradom/littlewood_paley.hpp"
#include "paradom/random.hpp"

using namespace paradom;

TEST_CASE("profile and partition of unity") {
  CHECK(lp_chi(0.0) == 1.0);
  CHECK(lp_chi(0.75) == 1.0);
  CHECK(lp_chi(4.0 / 3.0) == 0.0);
  CHECK(lp_rho(0.7) == 0.0);
  CHECK(lp_rho(8.0 / 3.0 + 1e-12) == 0.0);
  Grid g(2, 64);
  DyadicPartition P(g);
  CHECK(P.j_max() == 3);
  // direct summation of the analytic profile at every lattice point
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::sqrt(g.k2(i));
    if (r > std::ldexp(1.0, P.j_max())) continue;
    double s = lp_chi(r);
    for (int j = 0; j <= P.j_max(); ++j) s += lp_rho(r * std::ldexp(1.0, -j));
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst <= 1e-12);
  worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0;
    for (int j = -1; j <= P.j_top(); ++j) s += P.block_symbol(j)[i];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("block disjointness is exact") {
  Grid g(2, 128);
  DyadicPartition P(g);
  for (int i = -1; i <= P.j_top(); ++i)
    for (int j = -1; j <= P.j_top(); ++j) {
      if (std::abs(i - j) <= 1) continue;
      const auto& a = P.block_symbol(i);
      const auto& b = P.block_symbol(j);
      bool zero = true;
      for (std::size_t k = 0; k < g.size(); ++k) zero = zero && a[k] * b[k] == 0.0;
      CHECK(zero);
    }
  const auto& chi = P.block_symbol(-1);
  for (int j = 1; j <= P.j_max(); ++j) {
    bool zero = true;
    for (std::size_t k = 0; k < g.size(); ++k)
      zero = zero && chi[k] * P.block_symbol(j)[k] == 0.0;
    CHECK(zero);
  }
}

TEST_CASE("small grids are refused") {
  CHECK_THROWS_AS(DyadicPartition(Grid(2, 16)), ResolutionError);
  CHECK_NOTHROW(DyadicPartition(Grid(1, 32)));
}

TEST_CASE("decompose") {
  Grid g(2, 64);
  DyadicPartition P(g);
  auto c = SpectralField::constant(g, 2.5);
  auto dc = decompose(c, P);
  CHECK(max_abs_coeff(dc.blocks[0] - c) == 0.0);
  for (std::size_t j = 1; j < dc.blocks.size(); ++j) CHECK(dc.blocks[j].is_zero());

  auto f = random_field(g, 9, {.alpha = -0.3, .include_nyquist = true});
  auto d = decompose(f, P);
  SpectralField s(g);
  for (const auto& b : d.blocks) s += b;
  CHECK(max_abs_coeff(s - f) <= 1e-12 * max_abs_coeff(f));
  CHECK(max_abs_coeff(P.low(f, P.j_top() + 1) - f) <= 1e-12 * max_abs_coeff(f));
  for (int j = 0; j <= P.j_top(); ++j) {
    SpectralField partial_sum(g);
    for (int i = -1; i < j; ++i) partial_sum += d.blocks[static_cast<std::size_t>(i + 1)];
    CHECK(max_abs_coeff(partial_sum - d.sums[static_cast<std::size_t>(j + 1)]) <= 1e-13);
  }

  // a mode at |k| = 2^j0 only lives in blocks j0-1, j0, j0+1 (support arithmetic)
  for (int j0 = 1; j0 <= 4; ++j0) {
    SpectralField m(g);
    m.set({1 << j0, 0, 0}, 1.0);
    m.set({-(1 << j0), 0, 0}, 1.0);
    for (int j = -1; j <= P.j_top(); ++j) {
      const bool active = !P.block(m, j).is_zero();
      if (std::abs(j - j0) > 1) CHECK_FALSE(active);
    }
  }
}

TEST_CASE("besov norms") {
  Grid g(2, 64);
  DyadicPartition P(g);
  CHECK(besov_norm(SpectralField(g), {0.5, 2, 2}, P) == 0.0);
  auto f = random_field(g, 1, {.alpha = 0.2});
  const double b = besov_norm(f, {0.3, 3, 2}, P);
  CHECK(std::abs(besov_norm(-2.5 * f, {0.3, 3, 2}, P) - 2.5 * b) <= 1e-12 * b);

  // single mode at |k| = 5 sits in block 2 only (5 * 2^-2 = 1.25, 5 * 2^-1 = 2.5,
  // 5 * 2^-3 = 0.625 outside the annulus) and partially in block 1.
  SpectralField m(g);
  m.set({5, 0, 0}, 0.5);
  m.set({-5, 0, 0}, 0.5);
  const double a = 0.7;
  double expect = 0;
  for (int j = -1; j <= P.j_top(); ++j) {
    const double w = P.block_symbol(j)[g.flat_of_freq({5, 0, 0})];
    expect += std::pow(std::pow(2.0, a * j) * w * std::sqrt(0.5), 2);
  }
  CHECK(std::abs(besov_norm(m, {a, 2, 2}, P) - std::sqrt(expect)) < 1e-13);
  CHECK(besov_norm(m, {a + 0.5, 2, kInf}, P) >= besov_norm(m, {a, 2, kInf}, P));

  // H^s equivalence on 50 random fields
  for (double sv : {-0.5, 0.0, 0.5}) {
    double lo = kInf, hi = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      auto h = random_field(g, 100 + s, {.alpha = 0.4});
      const double r = besov_norm(h, {sv, 2, 2}, P) / sobolev_norm(h, sv);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo >= 0.25);
    CHECK(hi <= 4.0);
  }
}

TEST_CASE("bernstein and embedding reports") {
  Grid g(2, 128);
  DyadicPartition P(g);
  // single mode: ||d u||_2 / (lambda ||u||_2) = 2 pi |k| / lambda
  SpectralField m(g);
  m.set({16, 0, 0}, 0.5);
  m.set({-16, 0, 0}, 0.5);
  CHECK(std::abs(lp_norm(partial(m, 0), 2) / (16 * lp_norm(m, 2)) - 2 * kPi) < 1e-12);

  auto rep = check_bernstein(P, 1, 2, 2, 3, 5);
  CHECK(rep.lambdas.size() == static_cast<std::size_t>(P.j_max() - 2));
  CHECK(std::abs(rep.slope) <= 0.1);
  for (double v : rep.upper_max) CHECK(v <= 2 * kPi + 1e-12);
  for (double v : rep.lower_max) CHECK(std::isfinite(v));

  auto e = check_embedding(P, -0.5, 0.0, 4, 2, 1, 2, 3, 5);
  CHECK(e.ratio_max > 0);
  CHECK(std::isfinite(e.ratio_max));
  CHECK_THROWS_AS(check_embedding(P, -0.5, 0.3, 4, 2, 1, 2, 3, 5), ConfigError);
}
