#include "paradom/operator_lab.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/random.hpp"
#include "paradom/spectral.hpp"

namespace paradom {
namespace {

bool is_trivial(const EnhancedData& d) {
  return d.xi.is_zero() && d.V.is_zero() && !d.has_rho() && d.c_eps == 0.0;
}

SpectralField zeroth_order(const SpectralField& u, const EnhancedData& d) {
  SpectralField out = pointwise_product(d.xi, u);
  if (d.c_eps != 0.0) out.axpy(d.c_eps, u);
  return out;
}

ResolventResult solve(const SpectralField& f, const EnhancedData& d, double lam0, double tol,
                      int max_iter, bool adjoint) {
  if (!(lam0 > -1.0)) throw ConfigError("resolvent: lam0 must exceed -1");
  if (is_trivial(d)) return {resolve_helmholtz(f, lam0 + 1.0), 0, 0.0};
  auto op = [&](const SpectralField& x) {
    SpectralField y = adjoint ? apply_A_adjoint(x, d) : apply_A(x, d);
    y.axpy(lam0, x);
    return y;
  };
  auto pre = [&](const SpectralField& x) { return resolve_helmholtz(x, lam0 + 1.0); };
  GmresResult g = gmres(op, pre, f, tol, max_iter);
  if (!g.converged) {
    std::ostringstream os;
    os << "resolvent: GMRES reached relative residual " << g.relative_residual << " > " << tol
       << " after " << g.iterations << " iterations at lam0 = " << lam0
       << "; use a larger shift";
    throw ShiftTooSmallError(os.str());
  }
  return {std::move(g.x), g.iterations, g.relative_residual};
}

void orthonormalize(std::vector<SpectralField>& Q) {
  for (std::size_t i = 0; i < Q.size(); ++i) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < i; ++j) Q[i].axpy(-inner(Q[j], Q[i]), Q[j]);
    const double nrm = l2_norm(Q[i]);
    if (nrm == 0.0) throw NumericalError("spectrum: subspace collapsed");
    Q[i] *= 1.0 / nrm;
  }
}

}  // namespace

SpectralField apply_A(const SpectralField& u, const EnhancedData& d) {
  SpectralField out = one_minus_laplacian(u);
  if (!d.V.is_zero()) out += dot(grad(d.V), grad(u));
  out += zeroth_order(u, d);
  if (d.has_rho()) out += div(scale(u, d.rho));
  return out;
}

SpectralField apply_A_adjoint(const SpectralField& v, const EnhancedData& d) {
  SpectralField out = one_minus_laplacian(v);
  if (!d.V.is_zero()) out -= div(scale(v, grad(d.V)));
  out += zeroth_order(v, d);
  if (d.has_rho()) out -= dot(d.rho, grad(v));
  return out;
}

TildeResult apply_A_tilde(const SpectralField& v, const TransformStack& s) {
  const EnhancedData& d = s.data();
  TildeResult r{pointwise_product(s.exp_G(), apply_A(pointwise_product(s.exp_W(), v), d)),
                SpectralField(v.grid()), 0.0};
  const ParaOperator a_res(s.a(), Para::resonant, ParaOperator::Fixed::left, s.partition());
  const ParaOperator a_high(s.a(), Para::low_high, ParaOperator::Fixed::right, s.partition());
  const VectorField gv = grad(v);
  SpectralField e = s.Lambda(v) - div(a_res.apply(gv)) - div(a_high.apply(gv));
  e += dot(s.V_tilde(), gv);
  e += pointwise_product(s.Z_tilde_M(), v);
  if (s.has_rho()) e += s.rho_term(v);
  const double nv = l2_norm(r.value);
  r.discrepancy = nv == 0.0 ? l2_norm(e) : l2_norm(r.value - e) / nv;
  r.expanded = std::move(e);
  return r;
}

SpectralField lower_part(const SpectralField& v, const TransformStack& s) {
  return apply_A(s.Theta(v), s.data()) - one_minus_laplacian(v);
}

SpectralField lower_part_adjoint(const SpectralField& w, const TransformStack& s) {
  return s.Theta_adj(apply_A_adjoint(w, s.data())) - one_minus_laplacian(w);
}

SpectralField random_h2(const Grid& g, std::uint64_t seed, std::uint64_t stream) {
  RandomFieldOptions o;
  o.alpha = 2.0;
  o.kmax = g.n() / 4;
  o.stream = stream;
  return random_field(g, seed, o);
}

FactorizationReport factorization_remainder(const TransformStack& s,
                                            const FactorizationOptions& opt) {
  const Grid& g = s.grid();
  FactorizationReport rep;
  rep.eps = s.data().eps;
  if (opt.estimate_lower)
    rep.lower_l2 = operator_norm([&](const SpectralField& v) { return lower_part(v, s); },
                                 [&](const SpectralField& w) { return lower_part_adjoint(w, s); },
                                 g, 2.0, 0.0, opt.power)
                       .value;
  rep.c_lo = kInf;
  rep.c_hi = 0.0;
  for (int t = 0; t < opt.trials; ++t) {
    const SpectralField u = random_h2(g, opt.seed, 0x4800 + static_cast<std::uint64_t>(t));
    const SpectralField tu = s.Theta(u);
    const SpectralField atu = apply_A(tu, s.data());
    const SpectralField lw = one_minus_laplacian(u);
    const double ratio = (l2_norm(atu) + l2_norm(tu)) / (l2_norm(lw) + l2_norm(u));
    rep.c_lo = std::min(rep.c_lo, ratio);
    rep.c_hi = std::max(rep.c_hi, ratio);
    const SpectralField low = atu - lw;
    rep.lower_proxy = std::max(rep.lower_proxy, sobolev_norm(low, opt.delta1) / l2_norm(lw));
    rep.theta_proxy = std::max(
        rep.theta_proxy, besov_norm(tu, {opt.delta, 2.0, 2.0}, s.partition()) / l2_norm(lw));
    if (t == 0) {
      const SpectralField lam = s.Lambda(u);
      const SpectralField lam_bar = s.LambdaBar(u);
      rep.resid_lambda = l2_norm(lam - one_minus_laplacian(s.Upsilon(u))) / l2_norm(lam);
      rep.resid_lambda_bar =
          l2_norm(lam_bar - one_minus_laplacian(s.UpsilonBar(u))) / l2_norm(lam_bar);
      rep.resid_theta = l2_norm(s.Theta(s.Theta_inv(u)) - u) / l2_norm(u);
    }
  }
  if (opt.trials == 0) rep.c_lo = 0.0;
  return rep;
}

ResolventResult resolvent(const SpectralField& f, const EnhancedData& d, double lam0,
                          double tol, int max_iter) {
  return solve(f, d, lam0, tol, max_iter, false);
}

ResolventResult resolvent_adjoint(const SpectralField& f, const EnhancedData& d, double lam0,
                                  double tol, int max_iter) {
  return solve(f, d, lam0, tol, max_iter, true);
}

SpectrumResult spectrum(const EnhancedData& d, double lam0, int k, const SpectrumOptions& opt) {
  if (k < 1) throw ConfigError("spectrum: k must be >= 1");
  const Grid& g = d.grid();
  const int p = k + 4;
  SpectrumResult out;
  out.symmetric = d.V.is_zero() && !d.has_rho();
  if (!out.symmetric)
    out.warning =
        "operator is not L2-symmetric (V or rho nonzero); values are Ritz values of a "
        "non-self-adjoint operator";

  std::vector<SpectralField> Q;
  RandomFieldOptions ro;
  ro.alpha = 1.0;
  for (int i = 0; i < p; ++i) {
    ro.stream = 0x5300 + static_cast<std::uint64_t>(i);
    Q.push_back(random_field(g, opt.seed, ro));
    // random_field has zero mean; the ground state of 1 - Delta does not
    Q.back().set({0, 0, 0}, counter_normal(opt.seed, ro.stream, {0, 0, 0}, 0));
  }
  orthonormalize(Q);

  for (int it = 1; it <= opt.max_iter; ++it) {
    for (auto& q : Q) q = resolvent(q, d, lam0).u;
    orthonormalize(Q);
    std::vector<SpectralField> AQ;
    AQ.reserve(Q.size());
    for (const auto& q : Q) AQ.push_back(apply_A(q, d));
    Eigen::MatrixXd H(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) H(i, j) = inner(Q[i], AQ[j]);

    Eigen::MatrixXd V(p, p);
    std::vector<double> lam(p), lam_im(p, 0.0);
    if (out.symmetric) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
      V = es.eigenvectors();
      for (int i = 0; i < p; ++i) lam[i] = es.eigenvalues()(i);
    } else {
      Eigen::EigenSolver<Eigen::MatrixXd> es(H);
      std::vector<int> order(p);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int x, int y) {
        return es.eigenvalues()(x).real() < es.eigenvalues()(y).real();
      });
      for (int i = 0; i < p; ++i) {
        lam[i] = es.eigenvalues()(order[i]).real();
        lam_im[i] = es.eigenvalues()(order[i]).imag();
        V.col(i) = es.eigenvectors().col(order[i]).real();
      }
    }

    std::vector<SpectralField> Qn(p, SpectralField(g)), AQn(p, SpectralField(g));
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        Qn[i].axpy(V(j, i), Q[j]);
        AQn[i].axpy(V(j, i), AQ[j]);
      }
    std::vector<double> res(k);
    bool done = true;
    for (int i = 0; i < k; ++i) {
      SpectralField r = AQn[i];
      r.axpy(-lam[i], Qn[i]);
      res[i] = l2_norm(r) / l2_norm(Qn[i]);
      if (!(res[i] <= opt.tol)) done = false;
    }
    Q = std::move(Qn);
    if (!out.symmetric) orthonormalize(Q);
    if (done) {
      out.eigenvalues.assign(lam.begin(), lam.begin() + k);
      out.imag_parts.assign(lam_im.begin(), lam_im.begin() + k);
      out.residuals = std::move(res);
      out.iterations = it;
      return out;
    }
  }
  std::ostringstream os;
  os << "spectrum: residual tolerance " << opt.tol << " not reached in " << opt.max_iter
     << " subspace iterations";
  throw ConvergenceError(os.str());
}

}  // namespace paradom
