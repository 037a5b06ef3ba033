#include <chrono>
#include <cmath>

#include "doctest.h"
#include "paradom/error.hpp"
#include "paradom/paraproduct.hpp"
#include "paradom/random.hpp"

using namespace paradom;

TEST_CASE("constant second factor") {
  Grid g(2, 64);
  DyadicPartition P(g);
  auto f = random_field(g, 1, {.alpha = 0.1});
  auto c = SpectralField::constant(g, 3.0);
  auto b = bony_decompose(f, c, P);
  CHECK(b.low_high.is_zero());
  CHECK(max_abs_coeff(b.resonant + b.high_low - 3.0 * f) < 1e-13);
}

TEST_CASE("low-high separated modes land in the paraproduct") {
  Grid g(2, 256);
  DyadicPartition P(g);
  SpectralField f(g), h(g);
  f.set({2, 0, 0}, 0.5);
  f.set({-2, 0, 0}, 0.5);
  h.set({0, 64, 0}, 0.5);
  h.set({0, -64, 0}, 0.5);
  auto b = bony_decompose(f, h, P);
  auto full = pointwise_product(f, h);
  CHECK(max_abs_coeff(b.low_high - full) < 1e-15);
  CHECK(b.resonant.is_zero());
  CHECK(b.high_low.is_zero());
}

TEST_CASE("reconstruction on 256^2") {
  Grid g(2, 256);
  DyadicPartition P(g);
  double worst = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto f = random_field(g, 10 + s, {.alpha = -0.3, .stream = 0});
    auto h = random_field(g, 10 + s, {.alpha = 0.4, .stream = 1});
    auto b = bony_decompose(f, h, P);
    auto p = pointwise_product(f, h);
    worst = std::max(worst, l2_norm(b.low_high + b.resonant + b.high_low - p) / l2_norm(p));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(worst <= 1e-10);
  CHECK(secs <= 10.0);
}

TEST_CASE("para_apply combinations") {
  Grid g(2, 64);
  DyadicPartition P(g);
  auto f1 = random_field(g, 1, {.alpha = 0.2, .stream = 0});
  auto f2 = random_field(g, 1, {.alpha = 0.2, .stream = 1});
  auto h = random_field(g, 1, {.alpha = -0.1, .stream = 2});
  auto fh = pointwise_product(f1, h);
  CHECK(l2_norm(para_apply(f1, h, Para::low_eq, P) + para_apply(f1, h, Para::high_low, P) - fh) <=
        1e-10 * l2_norm(fh));
  CHECK(l2_norm(para_apply(f1, h, Para::high_eq, P) + para_apply(f1, h, Para::low_high, P) - fh) <=
        1e-10 * l2_norm(fh));
  auto lin = paraproduct(2.0 * f1 - 3.0 * f2, h, P);
  auto ref = 2.0 * paraproduct(f1, h, P) - 3.0 * paraproduct(f2, h, P);
  CHECK(l2_norm(lin - ref) <= 1e-12 * l2_norm(ref));
  CHECK(l2_norm(resonant(f1, h, P) - resonant(h, f1, P)) <= 1e-12 * l2_norm(resonant(f1, h, P)));
  CHECK(max_abs_coeff(paraproduct(f1, h, P) - para_apply(h, f1, Para::high_low, P)) == 0.0);
  CHECK_THROWS_AS(paraproduct(f1, SpectralField(Grid(2, 32)), P), ConfigError);
}

TEST_CASE("fixed-factor operators and adjoints") {
  Grid g(2, 64);
  DyadicPartition P(g);
  auto a = random_field(g, 3, {.alpha = 0.3, .stream = 0});
  auto x = random_field(g, 3, {.alpha = 0.0, .stream = 1});
  auto v = random_field(g, 3, {.alpha = 0.0, .stream = 2});
  for (Para w : {Para::low_high, Para::high_low, Para::resonant, Para::low_eq, Para::high_eq}) {
    for (auto side : {ParaOperator::Fixed::left, ParaOperator::Fixed::right}) {
      ParaOperator op(a, w, side, P);
      auto ref = side == ParaOperator::Fixed::left ? para_apply(a, x, w, P) : para_apply(x, a, w, P);
      CHECK(l2_norm(op.apply(x) - ref) <= 1e-13 * l2_norm(ref));
      const double lhs = inner(op.apply(x), v);
      const double rhs = inner(x, op.adjoint(v));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
  }
}

TEST_CASE("frequency localization of the paraproduct") {
  Grid g(2, 128);
  DyadicPartition P(g);
  auto f = random_field(g, 4, {.alpha = 0.0});
  // g = Delta_3 r is active in blocks 2..4, so f < g lives in blocks 0..6.
  auto h = P.block(random_field(g, 5, {.alpha = 0.0}), 3);
  auto p = paraproduct(f, h, P);
  CHECK(l2_norm(P.block(p, -1)) <= 1e-14 * l2_norm(p));
}

TEST_CASE("para-Leibniz under divergence") {
  Grid g(2, 64);
  DyadicPartition P(g);
  auto e = random_field(g, 8, {.alpha = 0.5, .stream = 0});
  auto w = random_field(g, 8, {.alpha = 1.0, .stream = 1});
  auto gw = grad(w);
  VectorField pv;
  for (const auto& c : gw) pv.push_back(paraproduct(e, c, P));
  auto lhs = div(pv);
  SpectralField rhs(g);
  for (int a = 0; a < 2; ++a)
    rhs += paraproduct(partial(e, a), gw[a], P) + paraproduct(e, partial(gw[a], a), P);
  CHECK(l2_norm(lhs - rhs) <= 1e-10 * l2_norm(lhs));
}

TEST_CASE("paraproduct estimates report") {
  Grid g(2, 64);
  DyadicPartition P(g);
  auto r = check_para_estimates(P, -0.5, 1.0, 4, 4, 2, 3, 1);
  CHECK(r.resonant_checked);
  CHECK(r.para_max > 0);
  CHECK(r.res_max > 0);
  CHECK_THROWS_AS(check_para_estimates(P, 0.0, 1.0, 4, 4, 2, 3, 1), ConfigError);
  CHECK_THROWS_AS(check_para_estimates(P, 0.5, 1.0, 1, 1, 2, 3, 1), ConfigError);
}
