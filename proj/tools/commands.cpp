#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "paradom/checks.hpp"
#include "paradom/error.hpp"
#include "paradom/kpz.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"
#include "paradom/spectral.hpp"
#include "paradom/study.hpp"
#include "paradom/transform_stack.hpp"

#ifndef PARADOM_VERSION
#define PARADOM_VERSION "dev"
#endif

namespace fs = std::filesystem;

namespace paradom::cli {
namespace {

double parse_eps(const std::string& tok) {
  if (tok.rfind("2^", 0) == 0) {
    const std::string e = tok.substr(2);
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(e, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != e.size() || e.empty()) throw ConfigError("bad eps entry '" + tok + "'");
    return std::ldexp(1.0, k);
  }
  return parse_double(tok, "eps");
}

std::string eps_dir(double eps) {
  const double k = -std::log2(eps);
  if (k == std::round(k)) return "eps_2^-" + std::to_string(static_cast<int>(k));
  return "eps_" + fmt17(eps);
}

std::uint64_t fnv1a(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot read " + p.string());
  std::uint64_t h = 1469598103934665603ULL;
  for (std::istreambuf_iterator<char> it(f), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Grid make_grid(const Args& a) {
  if (a.dim < 1 || a.dim > 3) throw ConfigError("--dim must be 1, 2 or 3");
  if (a.grid < 4 || a.grid % 2 != 0) throw ConfigError("--grid must be even and >= 4");
  return Grid(a.dim, a.grid);
}

std::uint64_t single_seed(const Args& a) {
  const auto s = parse_seed_list(a.seed);
  if (s.size() != 1) throw ConfigError("this command takes a single --seed");
  return s.front();
}

void snapshot(Meta& m, const Args& a) {
  m["grid"] = std::to_string(a.grid);
  m["dim"] = std::to_string(a.dim);
  m["eps"] = a.eps;
  m["seed"] = a.seed;
  m["kind"] = a.kind;
  m["tol"] = fmt17(a.tol);
  m["amplitude"] = fmt17(a.amplitude);
  m["delta"] = fmt17(a.delta);
  m["delta1"] = fmt17(a.delta1);
  m["delta2"] = fmt17(a.delta2);
  m["p"] = fmt17(a.p);
  m["q"] = fmt17(a.q);
  m["r"] = fmt17(a.r);
  m["version"] = PARADOM_VERSION;
}

}  // namespace

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const double a = parse_eps(s.substr(0, dots));
    const double b = parse_eps(s.substr(dots + 2));
    if (!(a > b)) throw ConfigError("eps range must decrease: " + s);
    const double ka = std::log2(a), kb = std::log2(b);
    if (ka != std::round(ka) || kb != std::round(kb))
      throw ConfigError("eps ranges need dyadic endpoints: " + s);
    for (int k = static_cast<int>(ka); k >= static_cast<int>(kb); --k)
      out.push_back(std::ldexp(1.0, k));
    return out;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(parse_eps(tok));
  if (out.empty()) throw ConfigError("empty --eps list");
  for (double e : out)
    if (!(e > 0.0)) throw ConfigError("eps must be positive");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ConfigError("bad seed '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty --seed");
  return out;
}

NoiseSpec noise_spec(const Args& a) {
  NoiseSpec s;
  s.kind = parse_noise_kind(a.kind);
  s.seed = parse_seed_list(a.seed).front();
  s.amplitude = a.amplitude;
  s.delta = a.delta;
  s.delta1 = a.delta1;
  s.delta2 = a.delta2;
  s.p = a.p;
  s.q = a.q;
  s.r = a.r;
  if (s.kind != NoiseKind::anderson2d && s.kind != NoiseKind::smooth_manufactured)
    validate(s, a.dim);
  return s;
}

int cmd_noise(const Args& a) {
  const Grid g = make_grid(a);
  NoiseSpec spec = noise_spec(a);
  spec.seed = single_seed(a);
  for (double eps : parse_eps_list(a.eps)) {
    const fs::path dir = fs::path(a.out) / eps_dir(eps);
    fs::create_directories(dir);
    Meta m;
    snapshot(m, a);
    m["eps"] = fmt17(eps);
    if (spec.kind == NoiseKind::anderson2d) {
      if (g.dim() < 2) throw ConfigError("white noise needs dim >= 2");
      require_resolved(g, eps);
      write_pcf(dir / "xi.pcf", mollify(sample_white_noise(g, spec.seed), eps));
    } else {
      const EnhancedData d = enhance(spec, g, eps, a.tol);
      write_pcf(dir / "xi.pcf", d.xi);
      write_pcf(dir / "V.pcf", d.V);
      for (std::size_t i = 0; i < d.rho.size(); ++i)
        write_pcf(dir / ("rho_" + std::to_string(i) + ".pcf"), d.rho[i]);
    }
    write_meta(dir / "noise.meta", m);
    std::cout << "noise " << eps_dir(eps) << " -> " << dir.string() << '\n';
  }
  return 0;
}

int cmd_enhance(const Args& a) {
  const Grid g = make_grid(a);
  NoiseSpec spec = noise_spec(a);
  spec.seed = single_seed(a);
  std::cout << "eps,c_eps,lam,kpz_residual\n";
  for (double eps : parse_eps_list(a.eps)) {
    const EnhancedData d = enhance(spec, g, eps, a.tol);
    save_enhanced(d, fs::path(a.out) / eps_dir(eps));
    std::cout << fmt17(eps) << ',' << fmt17(d.c_eps) << ',' << fmt17(d.lam) << ','
              << fmt17(kpz_residual(d)) << '\n';
  }
  return 0;
}

int cmd_kpz(const Args& a) {
  const Grid g = make_grid(a);
  NoiseSpec spec = noise_spec(a);
  spec.seed = single_seed(a);
  const double eps = parse_eps_list(a.eps).front();
  SpectralField xi(g), V(g);
  if (spec.kind == NoiseKind::anderson2d) {
    require_resolved(g, eps);
    xi = mollify(sample_white_noise(g, spec.seed), eps);
  } else {
    const EnhancedData d = enhance(spec, g, eps, a.tol);
    xi = d.xi;
    V = d.V;
  }
  const KpzProblem prob = [&] {
    KpzProblem p = auto_lambda(xi, V, a.tol);
    p.tol = a.tol;
    return p;
  }();
  const KpzSolution sol = solve_kpz(prob);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_pcf(dir / "W.pcf", sol.W);
  Meta m;
  snapshot(m, a);
  m["eps"] = fmt17(eps);
  m["lam"] = fmt17(prob.lam);
  m["iterations"] = std::to_string(sol.iterations);
  m["residual"] = fmt17(sol.residual);
  write_meta(dir / "kpz.meta", m);
  if (a.trace) write_trace_csv(dir / "trace.csv", sol);
  std::cout << "lam=" << fmt17(prob.lam) << " iterations=" << sol.iterations
            << " residual=" << fmt17(sol.residual) << '\n';
  return 0;
}

int cmd_stack(const Args& a) {
  const Grid g = make_grid(a);
  NoiseSpec spec = noise_spec(a);
  spec.seed = single_seed(a);
  const double eps = parse_eps_list(a.eps).front();
  auto data = std::make_shared<const EnhancedData>(enhance(spec, g, eps, a.tol));
  auto P = std::make_shared<const DyadicPartition>(g);
  const CutoffChoice cc = choose_cutoffs(data, P);
  const TransformStack s(data, cc.M, cc.N, P);
  require_certified(cc.cert);
  save_enhanced(*data, fs::path(a.out) / "data");
  save_stack(s, cc.cert, fs::path(a.out) / "stack");
  std::cout << "M=" << cc.M << " N=" << cc.N << " cert_exp=" << fmt17(cc.cert.cert_exp())
            << " cert_ups=" << fmt17(cc.cert.cert_ups()) << " cert_phi=" << fmt17(cc.cert.phi)
            << '\n';
  return 0;
}

int cmd_verify(const Args& a) {
  const fs::path dir(a.out);
  auto data = std::make_shared<const EnhancedData>(load_enhanced(dir / "data"));
  auto P = std::make_shared<const DyadicPartition>(data->grid());
  const VerifyResult r = verify_stack(data, P, dir / "stack");
  if (r.ok) {
    std::cout << "verify: all certificates and cached fields match\n";
    return 0;
  }
  for (const auto& m : r.mismatches) std::cerr << "verify: mismatch " << m << '\n';
  return static_cast<int>(ExitCode::certificate);
}

int cmd_study(const Args& a) {
  const auto t0 = std::chrono::steady_clock::now();
  StudyConfig cfg;
  cfg.noise = noise_spec(a);
  cfg.seeds = parse_seed_list(a.seed);
  cfg.n = a.grid;
  cfg.dim = a.dim;
  cfg.eps = parse_eps_list(a.eps);
  cfg.lam0 = a.lam0;
  cfg.k_eigs = a.k_eigs;
  cfg.norm_trials = a.trials;
  cfg.power.iterations = a.power_iterations;
  cfg.power.restarts = a.power_restarts;
  cfg.kpz_tol = a.tol;
  make_grid(a);
  const StudyReport rep = convergence_study(cfg);
  const fs::path dir(a.out);
  write_study(rep, cfg, dir);

  Meta m;
  snapshot(m, a);
  m["k_eigs"] = std::to_string(a.k_eigs);
  m["lam0"] = fmt17(rep.lam0);
  m["trials"] = std::to_string(a.trials);
  m["power_iterations"] = std::to_string(a.power_iterations);
  m["power_restarts"] = std::to_string(a.power_restarts);
  double t_data = 0, t_stack = 0, t_spec = 0, t_norms = 0, t_diff = 0;
  for (const auto& r : rep.rows) {
    t_data += r.t_data;
    t_stack += r.t_stack;
    t_spec += r.t_spectrum;
    t_norms += r.t_norms;
    t_diff += r.t_diff;
  }
  m["seconds_data"] = fmt17(t_data);
  m["seconds_stack"] = fmt17(t_stack);
  m["seconds_spectrum"] = fmt17(t_spec);
  m["seconds_norms"] = fmt17(t_norms);
  m["seconds_differences"] = fmt17(t_diff);
  m["seconds_total"] =
      fmt17(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  for (const char* f : {"study.csv", "d_res.dat", "d_fac.dat", "eigenvalues.dat", "control.dat"})
    m[std::string("fnv1a64_") + f] = hex(fnv1a(dir / f));
  write_meta(dir / "manifest.txt", m);

  if (a.trace)
    for (const auto& r : rep.rows) std::cerr << study_csv_row(r) << '\n';
  std::cout << "study: " << rep.rows.size() << " rows, lam0=" << fmt17(rep.lam0) << " -> "
            << (dir / "study.csv").string() << '\n';
  return 0;
}

int cmd_check(const Args& a) {
  CheckOptions o;
  o.n = a.grid;
  o.dim = a.dim;
  o.seed = single_seed(a);
  o.trials = a.check_trials;
  make_grid(a);
  const auto rows = run_property_checks(o);
  std::cout << csv_header() << '\n';
  for (const auto& r : rows) std::cout << to_csv(r) << '\n';
  return 0;
}

}  // namespace paradom::cli
