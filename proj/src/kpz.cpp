#include "paradom/kpz.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"

namespace paradom {
namespace {

constexpr double kBlowUp = 1e8;

SpectralField nonlinearity(const SpectralField& W, const KpzProblem& prob) {
  const VectorField gw = grad(W);
  SpectralField out = dot(gw, gw);
  if (!prob.V.is_zero()) out -= dot(gw, grad(prob.V));
  return out;
}

}  // namespace

SpectralField kpz_map(const SpectralField& W, const KpzProblem& prob) {
  require_same_grid(W, prob.xi, "kpz_map");
  SpectralField rhs = nonlinearity(W, prob);
  rhs -= prob.xi;
  return resolve_helmholtz(rhs, prob.lam);
}

double kpz_equation_residual(const SpectralField& W, const KpzProblem& prob) {
  const double fp2 = 4.0 * kPi * kPi;
  SpectralField r = radial_multiplier(W, [&](double k2) { return prob.lam + fp2 * k2; });
  r -= nonlinearity(W, prob);
  r += prob.xi;
  return l2_norm(r);
}

KpzSolution solve_kpz(const KpzProblem& prob, const SpectralField* W0) {
  if (!(prob.lam > 0.0)) throw ConfigError("solve_kpz: lambda must be positive");
  if (!(prob.tol > 0.0)) throw ConfigError("solve_kpz: tol must be positive");
  KpzSolution sol{W0 ? *W0 : SpectralField(prob.xi.grid()), 0, 0.0, {}};
  sol.residual = kpz_equation_residual(sol.W, prob);
  sol.trace.emplace_back(0, sol.residual);
  while (sol.residual > prob.tol) {
    if (sol.iterations >= prob.max_iter) {
      std::ostringstream os;
      os << "KPZ Picard iteration did not reach residual " << prob.tol << " in "
         << prob.max_iter << " iterations (residual " << sol.residual << " at lambda "
         << prob.lam << "); try a larger lambda";
      throw ConvergenceError(os.str());
    }
    sol.W = kpz_map(sol.W, prob);
    ++sol.iterations;
    const double size = max_abs_coeff(sol.W);
    if (!std::isfinite(size) || size > kBlowUp) {
      std::ostringstream os;
      os << "KPZ Picard iteration diverged at iterate " << sol.iterations
         << " (max coefficient " << size << " > " << kBlowUp << ", lambda " << prob.lam
         << ")";
      throw DivergenceError(os.str());
    }
    sol.residual = kpz_equation_residual(sol.W, prob);
    sol.trace.emplace_back(sol.iterations, sol.residual);
  }
  return sol;
}

void write_trace_csv(const std::filesystem::path& path, const KpzSolution& sol) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  os << "iteration,residual\n";
  for (const auto& [it, r] : sol.trace) os << it << "," << fmt17(r) << "\n";
}

KpzProblem auto_lambda(const SpectralField& xi, const SpectralField& V, double tol) {
  constexpr int kSteps = 20;
  constexpr int kWindow = 5;
  constexpr double kRatio = 0.9;
  double last_ratio = 0.0;
  for (double lam = 1.0; lam <= 1048576.0; lam *= 2.0) {
    KpzProblem prob(xi, V, lam);
    prob.tol = tol;
    SpectralField W(xi.grid());
    double prev = -1.0;
    int run = 0;
    bool ok = false;
    for (int s = 0; s < kSteps; ++s) {
      SpectralField next = kpz_map(W, prob);
      const double size = max_abs_coeff(next);
      if (!std::isfinite(size) || size > kBlowUp) break;
      const double step = sobolev_norm(next - W, 1.0);
      W = std::move(next);
      if (step <= 1e-15 * std::max(1.0, sobolev_norm(W, 1.0))) {
        ok = true;
        break;
      }
      if (prev > 0.0) {
        last_ratio = step / prev;
        run = last_ratio <= kRatio ? run + 1 : 0;
        if (run >= kWindow) {
          ok = true;
          break;
        }
      }
      prev = step;
    }
    if (ok) return prob;
  }
  std::ostringstream os;
  os << "no lambda <= 2^20 makes the KPZ Picard map contract (last step ratio "
     << last_ratio << " > 0.9); data too rough for this resolution";
  throw DataTooRoughError(os.str());
}

SmoothingReport check_smoothing(const DyadicPartition& P, const std::vector<double>& lams,
                                double beta, double kappa, double mu, int trials,
                                std::uint64_t seed) {
  if (!(kappa < beta)) throw ConfigError("check_smoothing: need kappa < beta");
  const Grid& g = P.grid();
  SmoothingReport rep;
  for (double lam : lams) {
    double rmax = 0.0;
    for (int t = 0; t < trials; ++t) {
      RandomFieldOptions o;
      o.alpha = beta - 2.0 + kappa;
      o.stream = static_cast<std::uint64_t>(t);
      const SpectralField f = random_field(g, seed, o);
      const double den = std::pow(lam, -kappa) * besov_norm(f, {beta - 2.0 + kappa, mu, kInf}, P);
      if (den == 0.0) continue;
      const double num = besov_norm(resolve_helmholtz(f, lam), {beta, mu, kInf}, P);
      rmax = std::max(rmax, num / den);
    }
    rep.lams.push_back(lam);
    rep.ratio_max.push_back(rmax);
    std::ostringstream ps;
    ps << "beta=" << beta << " kappa=" << kappa << " mu=" << (std::isinf(mu) ? std::string("inf") : fmt17(mu))
       << " lambda=" << lam;
    rep.rows.push_back({"smoothing", ps.str(), rmax, rmax, g.n(), seed});
  }
  if (rep.lams.size() >= 2) {
    double mx = 0, my = 0;
    const double n = static_cast<double>(rep.lams.size());
    for (std::size_t i = 0; i < rep.lams.size(); ++i) {
      mx += std::log(rep.lams[i]);
      my += std::log(rep.ratio_max[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < rep.lams.size(); ++i) {
      const double dx = std::log(rep.lams[i]) - mx;
      sxy += dx * (std::log(rep.ratio_max[i]) - my);
      sxx += dx * dx;
    }
    rep.slope = sxy / sxx;
  }
  return rep;
}

}  // namespace paradom
