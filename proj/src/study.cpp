#include "paradom/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"
#include "paradom/spectral.hpp"

namespace paradom {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string eps_tag(double eps, std::uint64_t seed) {
  std::ostringstream os;
  const double k = -std::log2(eps);
  if (k == std::round(k))
    os << "eps=2^-" << static_cast<int>(k);
  else
    os << "eps=" << eps;
  os << " seed=" << seed << ": ";
  return os.str();
}

template <class F>
auto tagged(double eps, std::uint64_t seed, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), eps_tag(eps, seed) + e.what());
  }
}

EnhancedData make_data(const StudyConfig& cfg, const Grid& g, double eps, std::uint64_t seed) {
  if (cfg.data_factory) return cfg.data_factory(g, eps, seed);
  NoiseSpec spec = cfg.noise;
  spec.seed = seed;
  return enhance(spec, g, eps, cfg.kpz_tol);
}

double choose_shift(const StudyConfig& cfg,
                    const std::vector<std::shared_ptr<const EnhancedData>>& data) {
  constexpr double kMaxShift = 10.0 * 1048576.0;
  double lam = cfg.lam0 > 0.0 ? cfg.lam0 : 10.0;
  while (true) {
    bool ok = true;
    for (const auto& d : data) {
      RandomFieldOptions o;
      o.alpha = -1.0;
      o.stream = 0x4c30;
      const SpectralField f = random_field(d->grid(), d->seed, o);
      try {
        resolvent(f, *d, lam);
      } catch (const ShiftTooSmallError&) {
        if (cfg.lam0 > 0.0 || lam >= kMaxShift) throw;
        ok = false;
        break;
      }
    }
    if (ok) return lam;
    lam *= 2.0;
  }
}

}  // namespace

void validate(const StudyConfig& cfg) {
  if (cfg.eps.size() < 2) throw ConfigError("study: the eps schedule needs at least two entries");
  for (std::size_t j = 0; j < cfg.eps.size(); ++j) {
    if (!(cfg.eps[j] > 0.0)) throw ConfigError("study: eps must be positive");
    if (j > 0 && !(cfg.eps[j] < cfg.eps[j - 1]))
      throw ConfigError("study: the eps schedule must be strictly decreasing");
  }
  if (cfg.seeds.empty()) throw ConfigError("study: no seeds");
  if (cfg.k_eigs < 1) throw ConfigError("study: k_eigs must be >= 1");
  if (cfg.norm_trials < 1) throw ConfigError("study: norm_trials must be >= 1");
  if (cfg.dim != 2 && cfg.noise.kind == NoiseKind::anderson2d && !cfg.data_factory)
    throw ConfigError("study: anderson2d requires dim = 2");
}

StudyReport convergence_study(const StudyConfig& cfg) {
  validate(cfg);
  const Grid g(cfg.dim, cfg.n);
  auto P = std::make_shared<const DyadicPartition>(g);
  const std::size_t ne = cfg.eps.size();

  std::vector<std::vector<std::shared_ptr<const EnhancedData>>> data(cfg.seeds.size());
  std::vector<std::shared_ptr<const EnhancedData>> all;
  StudyReport rep;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
    for (std::size_t j = 0; j < ne; ++j) {
      const auto t0 = Clock::now();
      const double eps = cfg.eps[j];
      const std::uint64_t seed = cfg.seeds[s];
      auto d = tagged(eps, seed, [&] {
        return std::make_shared<const EnhancedData>(make_data(cfg, g, eps, seed));
      });
      data[s].push_back(d);
      all.push_back(d);
      StudyRow row;
      row.seed = seed;
      row.eps = eps;
      row.c_eps = d->c_eps;
      row.t_data = seconds_since(t0);
      rep.rows.push_back(row);
    }
  rep.lam0 = choose_shift(cfg, all);
  const double lam0 = rep.lam0;

  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    const std::uint64_t seed = cfg.seeds[s];
    StudyRow* rows = &rep.rows[s * ne];

    std::vector<CutoffChoice> cc(ne);
    int Mc = 0, Nc = 0;
    for (std::size_t j = 0; j < ne; ++j) {
      const auto t0 = Clock::now();
      cc[j] = tagged(cfg.eps[j], seed, [&] { return choose_cutoffs(data[s][j], P, cfg.stack); });
      Mc = std::max(Mc, cc[j].M);
      Nc = std::max(Nc, cc[j].N);
      rows[j].t_stack += seconds_since(t0);
    }
    std::vector<std::unique_ptr<TransformStack>> stacks(ne);
    for (std::size_t j = 0; j < ne; ++j) {
      const auto t0 = Clock::now();
      tagged(cfg.eps[j], seed, [&] {
        stacks[j] = std::make_unique<TransformStack>(data[s][j], Mc, Nc, P, cfg.stack);
        const Certificates c =
            (cc[j].M == Mc && cc[j].N == Nc) ? cc[j].cert : stacks[j]->measure();
        require_certified(c);
        rows[j].cert_exp = c.cert_exp();
        rows[j].cert_ups = c.cert_ups();
        rows[j].cert_phi = c.phi;
        return 0;
      });
      rows[j].M = Mc;
      rows[j].N = Nc;
      rows[j].t_stack += seconds_since(t0);
    }

    for (std::size_t j = 0; j < ne; ++j) {
      const auto t0 = Clock::now();
      const EnhancedData& d = *data[s][j];
      tagged(cfg.eps[j], seed, [&] {
        rows[j].lambdas = spectrum(d, lam0, cfg.k_eigs).eigenvalues;
        if (cfg.control) {
          EnhancedData bare = d;
          bare.c_eps = 0.0;
          rows[j].lambda_control = spectrum(bare, lam0, 1).eigenvalues.front();
        }
        return 0;
      });
      rows[j].t_spectrum = seconds_since(t0);

      const auto t1 = Clock::now();
      FactorizationOptions fo;
      fo.trials = cfg.norm_trials;
      fo.delta = cfg.delta;
      fo.delta1 = cfg.delta1;
      fo.estimate_lower = false;
      const FactorizationReport fr =
          tagged(cfg.eps[j], seed, [&] { return factorization_remainder(*stacks[j], fo); });
      rows[j].c_lo = fr.c_lo;
      rows[j].c_hi = fr.c_hi;
      rows[j].lower_proxy = fr.lower_proxy;
      rows[j].theta_proxy = fr.theta_proxy;
      rows[j].t_norms = seconds_since(t1);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    rows[ne - 1].d_res = nan;
    rows[ne - 1].d_fac = nan;
    for (std::size_t j = 0; j + 1 < ne; ++j) {
      const auto t0 = Clock::now();
      const EnhancedData& d0 = *data[s][j];
      const EnhancedData& d1 = *data[s][j + 1];
      const TransformStack& s0 = *stacks[j];
      const TransformStack& s1 = *stacks[j + 1];
      tagged(cfg.eps[j + 1], seed, [&] {
        rows[j].d_res =
            operator_norm(
                [&](const SpectralField& f) {
                  return resolvent(f, d0, lam0).u - resolvent(f, d1, lam0).u;
                },
                [&](const SpectralField& f) {
                  return resolvent_adjoint(f, d0, lam0).u - resolvent_adjoint(f, d1, lam0).u;
                },
                g, 0.0, 0.0, cfg.power)
                .value;
        rows[j].d_fac =
            operator_norm(
                [&](const SpectralField& v) {
                  return apply_A(s0.Theta(v), d0) - apply_A(s1.Theta(v), d1);
                },
                [&](const SpectralField& w) {
                  return s0.Theta_adj(apply_A_adjoint(w, d0)) -
                         s1.Theta_adj(apply_A_adjoint(w, d1));
                },
                g, 2.0, 0.0, cfg.power)
                .value;
        return 0;
      });
      rows[j].t_diff = seconds_since(t0);
    }
  }
  return rep;
}

std::string study_csv_header(int k_eigs) {
  std::string h = "seed,eps,M,N,c_eps,d_res,d_fac";
  for (int i = 1; i <= k_eigs; ++i) h += ",lambda_" + std::to_string(i);
  h += ",lambda_control_1,c_lo,c_hi,lower_proxy,theta_proxy,cert_exp,cert_ups,cert_phi";
  return h;
}

std::string study_csv_row(const StudyRow& r) {
  std::ostringstream os;
  os << r.seed << ',' << fmt17(r.eps) << ',' << r.M << ',' << r.N << ',' << fmt17(r.c_eps) << ','
     << fmt17(r.d_res) << ',' << fmt17(r.d_fac);
  for (double l : r.lambdas) os << ',' << fmt17(l);
  os << ',' << fmt17(r.lambda_control) << ',' << fmt17(r.c_lo) << ',' << fmt17(r.c_hi) << ','
     << fmt17(r.lower_proxy) << ',' << fmt17(r.theta_proxy) << ',' << fmt17(r.cert_exp) << ','
     << fmt17(r.cert_ups) << ',' << fmt17(r.cert_phi);
  return os.str();
}

void write_study(const StudyReport& rep, const StudyConfig& cfg,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw DataError(std::string("cannot write ") + (dir / name).string());
    return f;
  };
  {
    auto f = open("study.csv");
    f << study_csv_header(cfg.k_eigs) << '\n';
    for (const auto& r : rep.rows) f << study_csv_row(r) << '\n';
  }
  {
    auto f = open("runtimes.csv");
    f << "seed,eps,t_data,t_stack,t_spectrum,t_norms,t_diff\n";
    for (const auto& r : rep.rows)
      f << r.seed << ',' << fmt17(r.eps) << ',' << r.t_data << ',' << r.t_stack << ','
        << r.t_spectrum << ',' << r.t_norms << ',' << r.t_diff << '\n';
  }
  const std::size_t ne = cfg.eps.size();
  {
    auto fr = open("d_res.dat");
    auto ff = open("d_fac.dat");
    fr << "# seed eps_j eps_j+1 d_res  (lam0 = " << fmt17(rep.lam0) << ")\n";
    ff << "# seed eps_j eps_j+1 d_fac\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      if (i % ne == ne - 1) continue;
      const auto& r = rep.rows[i];
      const auto& q = rep.rows[i + 1];
      fr << r.seed << ' ' << fmt17(r.eps) << ' ' << fmt17(q.eps) << ' ' << fmt17(r.d_res) << '\n';
      ff << r.seed << ' ' << fmt17(r.eps) << ' ' << fmt17(q.eps) << ' ' << fmt17(r.d_fac) << '\n';
    }
  }
  {
    auto f = open("eigenvalues.dat");
    f << "# seed eps lambda_1 .. lambda_" << cfg.k_eigs << '\n';
    for (const auto& r : rep.rows) {
      f << r.seed << ' ' << fmt17(r.eps);
      for (double l : r.lambdas) f << ' ' << fmt17(l);
      f << '\n';
    }
  }
  {
    auto f = open("control.dat");
    f << "# seed eps c_eps lambda_1 lambda_1_without_c\n";
    for (const auto& r : rep.rows)
      f << r.seed << ' ' << fmt17(r.eps) << ' ' << fmt17(r.c_eps) << ' '
        << fmt17(r.lambdas.empty() ? 0.0 : r.lambdas.front()) << ' ' << fmt17(r.lambda_control)
        << '\n';
  }
}

}  // namespace paradom
