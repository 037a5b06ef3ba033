#include "paradom/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"

namespace paradom {
namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

std::vector<std::array<int, 3>> multi_indices(int dim, int order) {
  std::vector<std::array<int, 3>> out;
  std::array<int, 3> mu{0, 0, 0};
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == dim - 1) {
      mu[axis] = left;
      out.push_back(mu);
      return;
    }
    for (int m = 0; m <= left; ++m) {
      mu[axis] = m;
      rec(axis + 1, left - m);
    }
  };
  rec(0, order);
  return out;
}

SpectralField derivative(const SpectralField& f, const std::array<int, 3>& mu) {
  SpectralField out = f;
  for (int a = 0; a < f.grid().dim(); ++a)
    for (int m = 0; m < mu[a]; ++m) out = partial(out, a);
  return out;
}

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::string pname(double p) {
  return std::isinf(p) ? std::string("inf") : fmt17(p);
}

}  // namespace

double lp_theta(double t) {
  const double a = psi(t);
  const double b = psi(1.0 - t);
  return a / (a + b);
}

double lp_chi(double r) {
  return lp_theta((4.0 / 3.0 - r) / (4.0 / 3.0 - 3.0 / 4.0));
}

double lp_rho(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

DyadicPartition::DyadicPartition(const Grid& grid) : grid_(grid) {
  const int half = grid.n() / 2;
  j_max_ = static_cast<int>(std::floor(std::log2(static_cast<double>(half)))) - 2;
  if (j_max_ < 2)
    throw ResolutionError("partition needs j_max >= 2, grid n=" +
                          std::to_string(grid.n()) + " gives j_max=" +
                          std::to_string(j_max_) + " (use n >= 32)");
  const std::size_t N = grid.size();
  std::vector<double> radius(N);
  for (std::size_t i = 0; i < N; ++i) radius[i] = std::sqrt(grid.k2(i));

  const int jt = j_top();
  lows_.assign(static_cast<std::size_t>(jt + 3), std::vector<double>(N, 0.0));
  for (int j = 0; j <= jt + 1; ++j) {
    auto& s = lows_[static_cast<std::size_t>(j + 1)];
    if (j == jt + 1) {
      std::fill(s.begin(), s.end(), 1.0);
      continue;
    }
    const double scale = std::ldexp(1.0, -j);
    for (std::size_t i = 0; i < N; ++i) s[i] = lp_chi(radius[i] * scale);
  }
  blocks_.assign(static_cast<std::size_t>(jt + 2), std::vector<double>(N, 0.0));
  for (int j = -1; j <= jt; ++j) {
    auto& b = blocks_[static_cast<std::size_t>(j + 1)];
    if (j == -1) {
      b = lows_[1];
    } else if (j == jt) {
      const auto& s = lows_[static_cast<std::size_t>(jt + 1)];
      for (std::size_t i = 0; i < N; ++i) b[i] = 1.0 - s[i];
    } else {
      const double scale = std::ldexp(1.0, -j);
      for (std::size_t i = 0; i < N; ++i) b[i] = lp_rho(radius[i] * scale);
    }
  }
}

void DyadicPartition::check_grid(const SpectralField& f) const {
  if (f.grid() != grid_)
    throw ConfigError("field grid n=" + std::to_string(f.grid().n()) +
                      " does not match partition grid n=" +
                      std::to_string(grid_.n()));
}

const std::vector<double>& DyadicPartition::block_symbol(int j) const {
  if (j < -1 || j > j_top())
    throw ConfigError("block index " + std::to_string(j) + " outside [-1, " +
                      std::to_string(j_top()) + "]");
  return blocks_[static_cast<std::size_t>(j + 1)];
}

const std::vector<double>& DyadicPartition::low_symbol(int j) const {
  if (j < -1 || j > j_top() + 1)
    throw ConfigError("partial sum index " + std::to_string(j) + " outside [-1, " +
                      std::to_string(j_top() + 1) + "]");
  return lows_[static_cast<std::size_t>(j + 1)];
}

SpectralField DyadicPartition::block(const SpectralField& f, int j) const {
  check_grid(f);
  return apply_symbol(f, block_symbol(j));
}

SpectralField DyadicPartition::low(const SpectralField& f, int j) const {
  if (j < -1) return SpectralField(f.grid());
  check_grid(f);
  return apply_symbol(f, low_symbol(std::min(j, j_top() + 1)));
}

Decomposition decompose(const SpectralField& f, const DyadicPartition& P) {
  Decomposition d;
  for (int j = -1; j <= P.j_top(); ++j) {
    d.blocks.push_back(P.block(f, j));
    d.sums.push_back(P.low(f, j));
  }
  return d;
}

double besov_norm(const SpectralField& f, const BesovIndex& idx,
                  const DyadicPartition& P) {
  if (!(idx.p >= 1.0) || !(idx.q >= 1.0))
    throw ConfigError("besov_norm: p and q must be >= 1");
  double acc = 0.0;
  for (int j = -1; j <= P.j_top(); ++j) {
    const SpectralField b = P.block(f, j);
    if (b.is_zero()) continue;
    const double t = std::pow(2.0, idx.alpha * j) * lp_norm(b, idx.p);
    if (std::isinf(idx.q))
      acc = std::max(acc, t);
    else
      acc += std::pow(t, idx.q);
  }
  return std::isinf(idx.q) ? acc : std::pow(acc, 1.0 / idx.q);
}

std::string csv_header() {
  return "check,params,measured_ratio_max,measured_ratio_min,n,seed";
}

std::string to_csv(const CheckRow& r) {
  std::ostringstream os;
  os << r.check << ",\"" << r.params << "\"," << fmt17(r.ratio_max) << ","
     << fmt17(r.ratio_min) << "," << r.n << "," << r.seed;
  return os.str();
}

BernsteinReport check_bernstein(const DyadicPartition& P, int k, double p,
                                double q, int trials, std::uint64_t seed) {
  if (!(1.0 <= p && p <= q))
    throw ConfigError("check_bernstein: need 1 <= p <= q");
  if (k < 0) throw ConfigError("check_bernstein: derivative order must be >= 0");
  const Grid& g = P.grid();
  const int d = g.dim();
  const auto mus = multi_indices(d, k);
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double expo = k + d * (1.0 / p - inv_q);
  BernsteinReport rep;
  for (int j = 3; j <= P.j_max(); ++j) {
    const double lam = std::ldexp(1.0, j);
    double umax = 0.0, umin = kInf, lmax = 0.0, lmin = kInf;
    for (int t = 0; t < trials; ++t) {
      RandomFieldOptions ball;
      ball.alpha = -0.5 * d;
      ball.kmin = 1.0;
      ball.kmax = lam;
      ball.stream = static_cast<std::uint64_t>(t);
      const SpectralField u = random_field(g, seed, ball);
      double top = 0.0;
      for (const auto& mu : mus) top = std::max(top, lp_norm(derivative(u, mu), q));
      const double r = top / (std::pow(lam, expo) * lp_norm(u, p));
      umax = std::max(umax, r);
      umin = std::min(umin, r);

      RandomFieldOptions ann = ball;
      ann.kmin = 0.75 * lam;
      ann.kmax = std::min(8.0 / 3.0 * lam, g.n() / 2.0 - 1.0);
      ann.stream = 0x1000ULL + static_cast<std::uint64_t>(t);
      const SpectralField v = random_field(g, seed, ann);
      double dv = 0.0;
      for (const auto& mu : mus) dv = std::max(dv, lp_norm(derivative(v, mu), p));
      const double rr = std::pow(lam, k) * lp_norm(v, p) / dv;
      lmax = std::max(lmax, rr);
      lmin = std::min(lmin, rr);
    }
    rep.lambdas.push_back(lam);
    rep.upper_max.push_back(umax);
    rep.upper_min.push_back(umin);
    rep.lower_max.push_back(lmax);
    rep.lower_min.push_back(lmin);
    std::ostringstream ps;
    ps << "k=" << k << " p=" << pname(p) << " q=" << pname(q) << " lambda=" << lam;
    rep.rows.push_back({"bernstein_upper", ps.str(), umax, umin, g.n(), seed});
    rep.rows.push_back({"bernstein_lower", ps.str(), lmax, lmin, g.n(), seed});
  }
  rep.slope = slope_of(rep.lambdas, rep.upper_max);
  return rep;
}

EmbeddingReport check_embedding(const DyadicPartition& P, double alpha,
                                double beta, double p, double r, double q1,
                                double q2, int trials, std::uint64_t seed) {
  const Grid& g = P.grid();
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  if (!(r <= p) || !(q1 <= q2) || !(r >= 1.0) || !(q1 >= 1.0))
    throw ConfigError("check_embedding: need 1 <= r <= p and 1 <= q1 <= q2");
  if (std::abs(beta - (alpha + g.dim() * (inv_r - inv_p))) > 1e-12) {
    std::ostringstream os;
    os << "check_embedding: beta=" << beta << " but alpha + d(1/r - 1/p) = "
       << alpha + g.dim() * (inv_r - inv_p);
    throw ConfigError(os.str());
  }
  EmbeddingReport rep;
  rep.ratio_min = kInf;
  for (int t = 0; t < trials; ++t) {
    RandomFieldOptions o;
    o.alpha = beta;
    o.stream = static_cast<std::uint64_t>(t);
    const SpectralField f = random_field(g, seed, o);
    const double num = besov_norm(f, {alpha, p, q2}, P);
    const double den = besov_norm(f, {beta, r, q1}, P);
    const double ratio = den == 0.0 ? 0.0 : num / den;
    rep.ratio_max = std::max(rep.ratio_max, ratio);
    rep.ratio_min = std::min(rep.ratio_min, ratio);
  }
  if (trials == 0) rep.ratio_min = 0.0;
  std::ostringstream ps;
  ps << "alpha=" << alpha << " beta=" << beta << " p=" << pname(p)
     << " r=" << pname(r) << " q1=" << pname(q1) << " q2=" << pname(q2);
  rep.rows.push_back({"embedding", ps.str(), rep.ratio_max, rep.ratio_min, g.n(), seed});
  return rep;
}

}  // namespace paradom
