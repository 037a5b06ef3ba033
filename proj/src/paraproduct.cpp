#include "paradom/paraproduct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"

namespace paradom {
namespace {

int radius_band(double r, int n) {
  return std::min(static_cast<int>(std::floor(r)), n / 2);
}

std::size_t ix(int j) { return static_cast<std::size_t>(j + 1); }

}  // namespace

ParaOperator::ParaOperator(const SpectralField& a, Para which, Fixed fixed,
                           const DyadicPartition& P)
    : P_(&P) {
  if (a.grid() != P.grid())
    throw ConfigError("ParaOperator: field and partition grids differ");
  const bool left = fixed == Fixed::left;
  switch (which) {
    case Para::low_high: (left ? use_low_ : use_high_) = true; break;
    case Para::high_low: (left ? use_high_ : use_low_) = true; break;
    case Para::resonant: use_res_ = true; break;
    case Para::low_eq:
      (left ? use_low_ : use_high_) = true;
      use_res_ = true;
      break;
    case Para::high_eq:
      (left ? use_high_ : use_low_) = true;
      use_res_ = true;
      break;
  }
  const int jt = P.j_top();
  const int n = P.grid().n();
  for (int j = -1; j <= jt; ++j) {
    block_a_.push_back(P.block(a, j));
    low_a_.push_back(P.low(a, j - 1));
    if (j == -1)
      block_band_.push_back(1);
    else if (j == jt)
      block_band_.push_back(n / 2);
    else
      block_band_.push_back(radius_band(8.0 / 3.0 * std::ldexp(1.0, j), n));
    low_band_.push_back(j - 1 < 0 ? -1
                                  : radius_band(4.0 / 3.0 * std::ldexp(1.0, j - 1), n));
  }
  for (int j = -1; j <= jt; ++j) {
    SpectralField s = block_a_[ix(j)];
    if (j - 1 >= -1) s += block_a_[ix(j - 1)];
    if (j + 1 <= jt) s += block_a_[ix(j + 1)];
    near_a_.push_back(std::move(s));
  }
}

SpectralField ParaOperator::lowfix(const SpectralField& x) const {
  SpectralField out(x.grid());
  for (int j = 1; j <= P_->j_top(); ++j) {
    const SpectralField& s = low_a_[ix(j)];
    if (s.is_zero()) continue;
    const SpectralField b = P_->block(x, j);
    if (b.is_zero()) continue;
    out += pointwise_product(s, b);
  }
  return out;
}

SpectralField ParaOperator::lowfix_adj(const SpectralField& v) const {
  SpectralField out(v.grid());
  for (int j = 1; j <= P_->j_top(); ++j) {
    const SpectralField& s = low_a_[ix(j)];
    if (s.is_zero()) continue;
    out += P_->block(product_banded(s, v, block_band_[ix(j)]), j);
  }
  return out;
}

SpectralField ParaOperator::highfix(const SpectralField& x) const {
  SpectralField out(x.grid());
  for (int j = 1; j <= P_->j_top(); ++j) {
    const SpectralField& b = block_a_[ix(j)];
    if (b.is_zero()) continue;
    const SpectralField s = P_->low(x, j - 1);
    if (s.is_zero()) continue;
    out += pointwise_product(s, b);
  }
  return out;
}

SpectralField ParaOperator::highfix_adj(const SpectralField& v) const {
  SpectralField out(v.grid());
  for (int j = 1; j <= P_->j_top(); ++j) {
    const SpectralField& b = block_a_[ix(j)];
    if (b.is_zero()) continue;
    out += P_->low(product_banded(b, v, low_band_[ix(j)]), j - 1);
  }
  return out;
}

SpectralField ParaOperator::res(const SpectralField& x) const {
  SpectralField out(x.grid());
  for (int j = -1; j <= P_->j_top(); ++j) {
    const SpectralField& s = near_a_[ix(j)];
    if (s.is_zero()) continue;
    const SpectralField b = P_->block(x, j);
    if (b.is_zero()) continue;
    out += pointwise_product(s, b);
  }
  return out;
}

SpectralField ParaOperator::res_adj(const SpectralField& v) const {
  SpectralField out(v.grid());
  for (int j = -1; j <= P_->j_top(); ++j) {
    const SpectralField& s = near_a_[ix(j)];
    if (s.is_zero()) continue;
    out += P_->block(product_banded(s, v, block_band_[ix(j)]), j);
  }
  return out;
}

SpectralField ParaOperator::apply(const SpectralField& x) const {
  if (x.grid() != P_->grid())
    throw ConfigError("ParaOperator::apply: grid mismatch");
  SpectralField out(x.grid());
  if (use_low_) out += lowfix(x);
  if (use_high_) out += highfix(x);
  if (use_res_) out += res(x);
  return out;
}

SpectralField ParaOperator::adjoint(const SpectralField& v) const {
  if (v.grid() != P_->grid())
    throw ConfigError("ParaOperator::adjoint: grid mismatch");
  SpectralField out(v.grid());
  if (use_low_) out += lowfix_adj(v);
  if (use_high_) out += highfix_adj(v);
  if (use_res_) out += res_adj(v);
  return out;
}

VectorField ParaOperator::apply(const VectorField& x) const {
  VectorField out;
  for (const auto& c : x) out.push_back(apply(c));
  return out;
}

VectorField ParaOperator::adjoint(const VectorField& v) const {
  VectorField out;
  for (const auto& c : v) out.push_back(adjoint(c));
  return out;
}

SpectralField para_apply(const SpectralField& f, const SpectralField& g, Para which,
                         const DyadicPartition& P) {
  require_same_grid(f, g, "para_apply");
  return ParaOperator(f, which, ParaOperator::Fixed::left, P).apply(g);
}

SpectralField paraproduct(const SpectralField& f, const SpectralField& g,
                          const DyadicPartition& P) {
  return para_apply(f, g, Para::low_high, P);
}

SpectralField resonant(const SpectralField& f, const SpectralField& g,
                       const DyadicPartition& P) {
  return para_apply(f, g, Para::resonant, P);
}

Bony bony_decompose(const SpectralField& f, const SpectralField& g,
                    const DyadicPartition& P) {
  require_same_grid(f, g, "bony_decompose");
  return {para_apply(f, g, Para::low_high, P), para_apply(f, g, Para::resonant, P),
          para_apply(f, g, Para::high_low, P)};
}

ParaReport check_para_estimates(const DyadicPartition& P, double a1, double a2,
                                double p1, double p2, double q, int trials,
                                std::uint64_t seed, bool correlated) {
  if (a1 == 0.0) throw ConfigError("check_para_estimates: alpha1 must be nonzero");
  if (!(p1 >= 1.0 && p2 >= 1.0 && q >= 1.0))
    throw ConfigError("check_para_estimates: indices must be >= 1");
  const double inv = (std::isinf(p1) ? 0.0 : 1.0 / p1) + (std::isinf(p2) ? 0.0 : 1.0 / p2);
  if (inv > 1.0) {
    std::ostringstream os;
    os << "check_para_estimates: 1/p1 + 1/p2 = " << inv << " exceeds 1";
    throw ConfigError(os.str());
  }
  const double p = inv == 0.0 ? kInf : 1.0 / inv;
  const double alpha = std::min(a1, 0.0) + a2;
  const bool do_res = correlated || a1 + a2 > 0.0;
  const Grid& g = P.grid();

  ParaReport rep;
  rep.para_min = kInf;
  rep.res_min = kInf;
  rep.resonant_checked = do_res;
  for (int t = 0; t < trials; ++t) {
    RandomFieldOptions of;
    of.alpha = a1;
    of.stream = 2 * static_cast<std::uint64_t>(t);
    const SpectralField f = random_field(g, seed, of);
    SpectralField h(g);
    if (correlated) {
      h = radial_multiplier(f, [&](double k2) { return std::pow(k2, 0.5 * (a1 - a2)); });
    } else {
      RandomFieldOptions og;
      og.alpha = a2;
      og.stream = 2 * static_cast<std::uint64_t>(t) + 1;
      h = random_field(g, seed, og);
    }
    const double den = besov_norm(f, {a1, p1, kInf}, P) * besov_norm(h, {a2, p2, q}, P);
    if (den == 0.0) {
      rep.para_min = std::min(rep.para_min, 0.0);
      continue;
    }
    const double rp = besov_norm(paraproduct(f, h, P), {alpha, p, q}, P) / den;
    rep.para_max = std::max(rep.para_max, rp);
    rep.para_min = std::min(rep.para_min, rp);
    if (do_res) {
      const double rr = besov_norm(resonant(f, h, P), {a1 + a2, p, q}, P) / den;
      rep.res_max = std::max(rep.res_max, rr);
      rep.res_min = std::min(rep.res_min, rr);
    }
  }
  if (trials == 0) rep.para_min = 0.0;
  if (!do_res || trials == 0) rep.res_min = 0.0;
  auto pn = [](double x) { return std::isinf(x) ? std::string("inf") : fmt17(x); };
  std::ostringstream ps;
  ps << "a1=" << a1 << " a2=" << a2 << " p1=" << pn(p1) << " p2=" << pn(p2)
     << " q=" << pn(q) << (correlated ? " correlated" : "");
  rep.rows.push_back({"paraproduct", ps.str(), rep.para_max, rep.para_min, g.n(), seed});
  if (do_res)
    rep.rows.push_back({"resonant", ps.str(), rep.res_max, rep.res_min, g.n(), seed});
  return rep;
}

}  // namespace paradom
