#include "paradom/linear_map.hpp"

#include <cmath>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"
#include "paradom/spectral.hpp"

namespace paradom {

NormEstimate operator_norm(const LinearOp& T, const LinearOp& T_adj, const Grid& grid,
                           double a, double b, const PowerOptions& opt) {
  auto B = [&](const SpectralField& x) { return sobolev_scale(T(sobolev_scale(x, -a)), b); };
  auto Bt = [&](const SpectralField& y) {
    return sobolev_scale(T_adj(sobolev_scale(y, b)), -a);
  };
  NormEstimate est;
  for (int r = 0; r < opt.restarts; ++r) {
    RandomFieldOptions o;
    o.alpha = -0.5 * grid.dim();
    o.stream = 0x7000ULL + static_cast<std::uint64_t>(r);
    SpectralField x = random_field(grid, opt.seed, o);
    x *= 1.0 / l2_norm(x);
    double sigma = 0.0;
    for (int it = 0; it < opt.iterations; ++it) {
      const SpectralField y = B(x);
      sigma = std::max(sigma, l2_norm(y));
      SpectralField z = Bt(y);
      const double nz = l2_norm(z);
      ++est.iterations;
      if (nz == 0.0) break;
      z *= 1.0 / nz;
      x = std::move(z);
    }
    est.per_restart.push_back(sigma);
    est.value = std::max(est.value, sigma);
  }
  return est;
}

NeumannResult neumann_inverse(const LinearOp& F, const SpectralField& x, double sigma,
                              const std::string& name, double tol, int max_terms) {
  NeumannResult res{x, 1, 0.0};
  SpectralField term = x;
  for (int m = 1; m <= max_terms; ++m) {
    const double ny = sobolev_norm(res.value, sigma);
    const double nt = sobolev_norm(term, sigma);
    res.last_increment = ny == 0.0 ? 0.0 : nt / ny;
    if (nt <= tol * ny || nt == 0.0) return res;
    SpectralField next = term - F(term);
    res.value += next;
    term = std::move(next);
    res.terms = m + 1;
  }
  std::ostringstream os;
  os << name << " inverse: Neumann series did not reach relative increment " << tol
     << " within " << max_terms << " terms (last increment " << res.last_increment
     << "); the contraction certificate does not hold for this input";
  throw CertificateError(os.str());
}

GmresResult gmres(const LinearOp& A, const LinearOp& Minv, const SpectralField& b,
                  double tol, int max_iter, int restart) {
  const Grid& g = b.grid();
  GmresResult out{SpectralField(g), 0, 0.0, false};
  const double nb = l2_norm(b);
  if (nb == 0.0) {
    out.converged = true;
    return out;
  }
  SpectralField x(g);
  SpectralField r = b;
  double beta = nb;
  while (out.iterations < max_iter) {
    const int m = std::min(restart, max_iter - out.iterations);
    std::vector<SpectralField> V;
    V.reserve(static_cast<std::size_t>(m + 1));
    V.push_back((1.0 / beta) * r);
    std::vector<std::vector<double>> H(static_cast<std::size_t>(m + 1),
                                       std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
    std::vector<double> s(static_cast<std::size_t>(m + 1), 0.0);
    s[0] = beta;
    int k = 0;
    double rel = beta / nb;
    for (; k < m; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      SpectralField w = A(Minv(V[uk]));
      for (int i = 0; i <= k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        H[ui][uk] = inner(w, V[ui]);
        w.axpy(-H[ui][uk], V[ui]);
      }
      // second Gram-Schmidt pass for stability
      for (int i = 0; i <= k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double c = inner(w, V[ui]);
        H[ui][uk] += c;
        w.axpy(-c, V[ui]);
      }
      const double hn = l2_norm(w);
      H[uk + 1][uk] = hn;
      for (int i = 0; i < k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double t = cs[ui] * H[ui][uk] + sn[ui] * H[ui + 1][uk];
        H[ui + 1][uk] = -sn[ui] * H[ui][uk] + cs[ui] * H[ui + 1][uk];
        H[ui][uk] = t;
      }
      const double den = std::hypot(H[uk][uk], H[uk + 1][uk]);
      cs[uk] = den == 0.0 ? 1.0 : H[uk][uk] / den;
      sn[uk] = den == 0.0 ? 0.0 : H[uk + 1][uk] / den;
      H[uk][uk] = den;
      H[uk + 1][uk] = 0.0;
      s[uk + 1] = -sn[uk] * s[uk];
      s[uk] = cs[uk] * s[uk];
      ++out.iterations;
      rel = std::abs(s[uk + 1]) / nb;
      if (hn != 0.0) V.push_back((1.0 / hn) * w);
      if (rel <= tol || hn == 0.0) {
        ++k;
        break;
      }
    }
    // back substitution
    std::vector<double> y(static_cast<std::size_t>(k), 0.0);
    for (int i = k - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      double t = s[ui];
      for (int j = i + 1; j < k; ++j) t -= H[ui][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
      y[ui] = t / H[ui][ui];
    }
    SpectralField dy(g);
    for (int i = 0; i < k; ++i) dy.axpy(y[static_cast<std::size_t>(i)], V[static_cast<std::size_t>(i)]);
    x += Minv(dy);
    r = b - A(x);
    beta = l2_norm(r);
    out.relative_residual = beta / nb;
    if (out.relative_residual <= tol) {
      out.converged = true;
      break;
    }
    if (beta == 0.0) break;
  }
  out.x = std::move(x);
  return out;
}

}  // namespace paradom
