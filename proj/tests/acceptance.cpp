// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "paradom/checks.hpp"
#include "paradom/error.hpp"
#include "paradom/kpz.hpp"
#include "paradom/noise.hpp"
#include "paradom/operator_lab.hpp"
#include "paradom/paraproduct.hpp"
#include "paradom/random.hpp"
#include "paradom/transform_stack.hpp"

namespace fs = std::filesystem;
using namespace paradom;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double rel(const SpectralField& a, const SpectralField& b) {
  const double nb = l2_norm(b);
  return nb == 0.0 ? l2_norm(a) : l2_norm(a - b) / nb;
}

SpectralField grad_sq(const SpectralField& W) {
  const VectorField gw = grad(W);
  return dot(gw, gw);
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PARADOM_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("study.csv has no column " + name);
    return static_cast<std::size_t>(it - header.begin());
  }
  std::vector<double> column(const std::string& name) const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[col(name)]);
    return out;
  }
};

Csv read_csv(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  Csv c;
  std::string line, cell;
  std::getline(f, line);
  std::stringstream hs(line);
  while (std::getline(hs, cell, ',')) c.header.push_back(cell);
  while (std::getline(f, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    c.rows.push_back(std::move(row));
  }
  return c;
}

double geomean_ratio(const std::vector<double>& v) {
  return std::pow(v.back() / v.front(), 1.0 / static_cast<double>(v.size() - 1));
}

const fs::path& workdir() {
  static const fs::path p = [] {
    fs::path d = fs::current_path() / "acceptance_out";
    fs::create_directories(d);
    return d;
  }();
  return p;
}

// Shared Anderson stack for criteria 5 and 6: d = 2, n = 256, eps = 2^-4, seed 7.
struct AndersonStack {
  std::shared_ptr<const DyadicPartition> P;
  std::shared_ptr<const EnhancedData> data;
  CutoffChoice cc;
  std::unique_ptr<TransformStack> stack;
};

const AndersonStack& anderson256() {
  static const AndersonStack a = [] {
    AndersonStack x;
    const Grid g(2, 256);
    x.P = std::make_shared<const DyadicPartition>(g);
    x.data = std::make_shared<const EnhancedData>(enhance_anderson2d(g, 0.0625, 7));
    x.cc = choose_cutoffs(x.data, x.P);
    x.stack = std::make_unique<TransformStack>(x.data, x.cc.M, x.cc.N, x.P);
    return x;
  }();
  return a;
}

// ---------------------------------------------------------------------------

void c1(Verdict& v) {
  const Grid g(2, 256);
  const DyadicPartition P(g);
  const auto t0 = Clock::now();
  double worst = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto f = random_field(g, 1000 + s, {.alpha = -0.3, .kmax = 100, .stream = 0});
    auto h = random_field(g, 1000 + s, {.alpha = 0.4, .kmax = 100, .stream = 1});
    auto b = bony_decompose(f, h, P);
    auto p = pointwise_product(f, h);
    worst = std::max(worst, rel(b.low_high + b.resonant + b.high_low, p));
  }
  const double secs = since(t0);
  v.detail << "max rel error " << worst << ", " << secs << " s ";
  v.require(worst <= 1e-10, "error <= 1e-10");
  v.require(secs <= 10.0, "runtime <= 10 s");
}

void c2(Verdict& v) {
  double worst = 0;
  bool disjoint = true;
  for (int n : {64, 128, 256}) {
    const Grid g(2, n);
    const DyadicPartition P(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0;
      for (int j = -1; j <= P.j_top(); ++j) s += P.block_symbol(j)[i];
      worst = std::max(worst, std::abs(s - 1.0));
    }
    for (int i = -1; i <= P.j_top(); ++i)
      for (int j = i + 2; j <= P.j_top(); ++j) {
        const auto& a = P.block_symbol(i);
        const auto& b = P.block_symbol(j);
        for (std::size_t k = 0; k < g.size(); ++k) disjoint = disjoint && a[k] * b[k] == 0.0;
      }
    // and on fields: Delta_j Delta_i f == 0
    auto f = random_field(g, 5, {.alpha = 0.0});
    for (int i = -1; i <= P.j_top(); ++i)
      for (int j = i + 2; j <= P.j_top(); ++j)
        disjoint = disjoint && P.block(P.block(f, i), j).is_zero();
  }
  v.detail << "partition residual " << worst << ", disjoint " << (disjoint ? "yes" : "no") << ' ';
  v.require(worst <= 1e-12, "partition residual <= 1e-12");
  v.require(disjoint, "Delta_j Delta_i = 0 for |i - j| > 1");
}

void c3(Verdict& v) {
  // group key: check name + params with the Bernstein lambda stripped
  auto key = [](const CheckRow& r) {
    std::string p = r.params;
    const auto at = p.find(" lambda=");
    if (r.check.rfind("bernstein", 0) == 0 && at != std::string::npos) p = p.substr(0, at);
    return r.check + " " + p;
  };
  std::map<std::string, std::vector<double>> by;
  for (int n : {64, 128, 256}) {
    CheckOptions o;
    o.n = n;
    o.seed = 1;
    std::map<std::string, double> mx;
    for (const auto& r : run_property_checks(o))
      if (r.check != "bernstein_lower" && r.check != "smoothing")
        mx[key(r)] = std::max(mx[key(r)], r.ratio_max);
    for (const auto& [k, x] : mx) by[k].push_back(x);
  }
  double worst_growth = 0, control_min = kInf;
  for (const auto& [k, x] : by) {
    const bool control = k.find("correlated") != std::string::npos && k.rfind("resonant", 0) == 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double g = x[i] / x[i - 1];
      if (control)
        control_min = std::min(control_min, g);
      else
        worst_growth = std::max(worst_growth, g);
    }
  }
  v.detail << "worst constant growth per doubling " << worst_growth
           << ", negative control growth per doubling " << control_min << ' ';
  v.require(worst_growth <= 1.10, "constants grow <= 10% per doubling");
  v.require(control_min >= 5.0, "negative control grows >= 5x per doubling");
}

void c4(Verdict& v) {
  const auto t0 = Clock::now();
  const Grid g(2, 128);
  // manufactured W*, V and xi := -(lam - Delta)W* + |grad W*|^2 - grad W* . grad V
  SpectralField W(g), V(g);
  W.set({1, 0, 0}, 0.05);
  W.set({-1, 0, 0}, 0.05);
  W.set({2, -3, 0}, cplx(0.01, 0.02));
  W.set({-2, 3, 0}, cplx(0.01, -0.02));
  V.set({0, 1, 0}, 0.15);
  V.set({0, -1, 0}, 0.15);
  const double lam = 4.0, fp2 = 4 * kPi * kPi;
  const VectorField gw = grad(W);
  SpectralField xi = -radial_multiplier(W, [&](double k2) { return lam + fp2 * k2; });
  xi += dot(gw, gw);
  xi -= dot(gw, grad(V));
  KpzProblem prob(xi, V, lam);
  prob.tol = 1e-12;
  auto sol = solve_kpz(prob);
  const double err = sobolev_norm(sol.W - W, 1.0);

  NoiseSpec s;
  s.kind = NoiseKind::generic_I;
  s.seed = 4;
  auto d = enhance_generic(s, g, 0.0625);
  KpzProblem p2 = auto_lambda(d.xi, d.V, 1e-12);
  auto a = solve_kpz(p2);
  auto w0 = random_field(g, 77, {.alpha = 2.0, .kmax = 10});
  w0 *= 0.01 / sobolev_norm(w0, 1.0);
  auto b = solve_kpz(p2, &w0);
  const double uniq = sobolev_norm(a.W - b.W, 1.0);
  const double secs = since(t0);
  v.detail << "recovery " << err << ", residual " << sol.residual << " / " << a.residual
           << ", two starts " << uniq << ", " << secs << " s ";
  v.require(err <= 1e-8, "recovery <= 1e-8 in H^1");
  v.require(sol.residual <= prob.tol && a.residual <= p2.tol && b.residual <= p2.tol,
            "residual <= tol");
  v.require(uniq <= 1e-8, "two starts agree to 1e-8");
  v.require(secs <= 30.0, "runtime <= 30 s");
}

void c5(Verdict& v) {
  const auto& a = anderson256();
  const Certificates& c = a.cc.cert;
  v.detail << "M=" << a.cc.M << " N=" << a.cc.N << " exp " << c.cert_exp() << " ups "
           << c.cert_ups() << " phi " << c.phi << "; ";
  v.require(c.cert_exp() <= 0.25, "exponential smallness <= 1/4");
  v.require(c.cert_ups() <= 0.5, "||Upsilon - I|| <= 1/2");
  v.require(c.phi <= 0.5, "||Phi - I|| <= 1/2");
  for (double eps : {0.03125, 0.015625}) {
    auto d = std::make_shared<const EnhancedData>(enhance_anderson2d(a.data->grid(), eps, 7));
    const Certificates ce = TransformStack(d, a.cc.M, a.cc.N, a.P).measure();
    v.detail << "eps=" << eps << ": exp " << ce.cert_exp() << " ups " << ce.cert_ups() << " phi "
             << ce.phi << "; ";
    bool ok = true;
    try {
      require_certified(ce);
    } catch (const CertificateError&) {
      ok = false;
    }
    v.require(ok, "re-certification at finer eps");
  }
}

void c6(Verdict& v) {
  const auto& s = *anderson256().stack;
  double l = 0, lb = 0, th = 0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto w = random_h2(s.grid(), 2000 + t, 0);
    l = std::max(l, rel(one_minus_laplacian(s.Upsilon(w)), s.Lambda(w)));
    lb = std::max(lb, rel(one_minus_laplacian(s.UpsilonBar(w)), s.LambdaBar(w)));
    if (t < 3) th = std::max(th, rel(s.Theta(s.Theta_inv(w)), w));
  }
  v.detail << "Lambda " << l << ", LambdaBar " << lb << ", Theta round trip " << th << ' ';
  v.require(l <= 1e-11, "Lambda = (1 - Delta) Upsilon");
  v.require(lb <= 1e-11, "LambdaBar = (1 - Delta) UpsilonBar");
  v.require(th <= 1e-9, "Theta(Theta^-1 u) = u");
}

void c7(Verdict& v) {
  const Grid g(2, 64);
  NoiseSpec s;
  s.kind = NoiseKind::generic_I;
  s.amplitude = 0.0;
  auto d = std::make_shared<const EnhancedData>(enhance_generic(s, g, 0.125));
  auto P = std::make_shared<const DyadicPartition>(g);
  const auto cc = choose_cutoffs(d, P);
  TransformStack st(d, cc.M, cc.N, P);
  FactorizationOptions fo;
  fo.trials = 5;
  const auto fr = factorization_remainder(st, fo);
  double theta = 0, A = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    auto u = random_h2(g, 3000 + t, 0);
    theta = std::max(theta, rel(st.Theta(u), u));
    A = std::max(A, rel(apply_A(u, *d), one_minus_laplacian(u)));
  }
  const double tiny = 1e-13;
  v.detail << "W " << l2_norm(d->W) << ", c " << d->c_eps << ", M=" << cc.M << " N=" << cc.N
           << ", Theta " << theta << ", A " << A << ", remainder " << fr.lower_l2 << ' ';
  v.require(d->xi.is_zero() && d->V.is_zero() && !d->has_rho(), "data zero");
  v.require(l2_norm(d->W) <= tiny && d->c_eps == 0.0, "W = 0, c = 0");
  v.require(cc.M == 0 && cc.N == 0, "M = N = 0");
  v.require(theta <= tiny, "Theta = identity");
  v.require(A <= tiny, "A = 1 - Delta");
  v.require(fr.lower_l2 <= tiny && fr.lower_proxy <= tiny, "remainder = 0");
}

void c8(Verdict& v) {
  const Grid g(2, 128);
  auto P = std::make_shared<const DyadicPartition>(g);
  auto d = std::make_shared<const EnhancedData>(enhance_anderson2d(g, 0.0625, 7));
  const auto cc = choose_cutoffs(d, P);
  TransformStack s(d, cc.M, cc.N, P);
  double worst = 0;
  for (std::uint64_t t = 0; t < 5; ++t)
    worst = std::max(worst, apply_A_tilde(random_h2(g, 4000 + t, 0), s).discrepancy);
  v.detail << "max discrepancy " << worst << ' ';
  v.require(worst <= 1e-7, "discrepancy <= 1e-7");
}

void c9(Verdict& v) {
  {
    const Grid g(2, 128);
    const double eps = 0.0625;
    double mean = 0;
    for (int s = 0; s < 200; ++s)
      mean += grad_sq(inv_one_minus_laplacian(mollify(sample_white_noise(g, 5000 + s), eps)))[0]
                  .real();
    mean /= 200;
    const double c = wick_constant(g, eps);
    v.detail << "MC/lattice " << mean / c << "; ";
    v.require(std::abs(mean / c - 1.0) <= 0.05, "Monte Carlo within 5%");
  }
  {
    // eps = 2^-5 .. 2^-8 at n = 512: three increments in the log regime
    const Grid g(2, 512);
    std::vector<double> c;
    for (int k = 5; k <= 8; ++k) c.push_back(wick_constant(g, std::ldexp(1.0, -k)));
    std::vector<double> inc;
    for (std::size_t i = 1; i < c.size(); ++i) inc.push_back(c[i] - c[i - 1]);
    const double r1 = inc[1] / inc[0], r2 = inc[2] / inc[1];
    v.detail << "increments " << inc[0] << ' ' << inc[1] << ' ' << inc[2] << "; ";
    v.require(std::abs(r1 - 1.0) <= 0.05 && std::abs(r2 - 1.0) <= 0.05,
              "increments stable within 5%");
  }
  {
    const Grid g(2, 256);
    std::vector<double> raw, wick;
    for (double eps : {0.125, 0.0625, 0.03125, 0.015625}) {
      double r = 0, w = 0;
      for (int s = 0; s < 20; ++s) {
        const auto d = enhance_anderson2d(g, eps, 100 + s);
        const auto sq = grad_sq(d.W);
        r += l2_norm(sq);
        w += l2_norm(sq - SpectralField::constant(g, d.c_eps));
      }
      raw.push_back(r / 20);
      wick.push_back(w / 20);
    }
    const double gr = raw.back() / raw.front(), gw = wick.back() / wick.front();
    v.detail << "raw growth " << gr << ", Wick growth " << gw << ' ';
    v.require(gr > 2.0, "un-renormalized grows > 2x");
    v.require(gw < 1.5, "Wick-ordered grows < 1.5x");
  }
}

void c10_11(Verdict& v10, Verdict& v11) {
  const fs::path out = workdir() / "study256";
  fs::remove_all(out);
  const auto t0 = Clock::now();
  const int code = run_cli("study --kind anderson2d --grid 256 --eps 2^-3,2^-4,2^-5,2^-6 --seed 7 --out " +
                               out.string(),
                           workdir() / "study256.log");
  const double secs = since(t0);
  if (code != 0) {
    v10.require(false, "study exit code " + std::to_string(code));
    v11.require(false, "study did not run");
    return;
  }
  const Csv c = read_csv(out / "study.csv");
  const std::size_t ne = c.rows.size();

  auto dres = c.column("d_res"), dfac = c.column("d_fac");
  dres.pop_back();
  dfac.pop_back();
  bool dec = true;
  for (std::size_t j = 1; j < dres.size(); ++j) dec = dec && dres[j] < dres[j - 1] && dfac[j] < dfac[j - 1];
  const double gr = geomean_ratio(dres), gf = geomean_ratio(dfac);
  v10.detail << "d_res ratio " << gr << ", d_fac ratio " << gf << "; ";
  v10.require(dec, "d_res and d_fac decreasing");
  v10.require(gr <= 0.9 && gf <= 0.9, "geometric-mean ratio <= 0.9");

  int shrink = 0, pairs = 0;
  for (int i = 1; i <= 5; ++i) {
    const auto l = c.column("lambda_" + std::to_string(i));
    for (std::size_t j = 0; j + 2 < ne; ++j) {
      ++pairs;
      if (std::abs(l[j + 2] - l[j + 1]) < std::abs(l[j + 1] - l[j])) ++shrink;
    }
  }
  const double frac = static_cast<double>(shrink) / pairs;
  v10.detail << "eigenvalue gaps shrinking on " << shrink << "/" << pairs << "; ";
  v10.require(frac >= 0.8, "gaps shrink on >= 80% of pairs");

  const auto l1 = c.column("lambda_1"), lc = c.column("lambda_control_1");
  double drift = 0, drift_c = 0;
  for (std::size_t j = 1; j < ne; ++j) {
    drift += std::abs(l1[j] - l1[j - 1]);
    drift_c += std::abs(lc[j] - lc[j - 1]);
  }
  v10.detail << "control drift " << drift_c << " vs " << drift << "; " << secs << " s ";
  v10.require(drift_c >= 5.0 * drift, "control drift >= 5x");
  v10.require(secs <= 1800.0, "runtime <= 30 min");

  const auto lo = c.column("c_lo"), hi = c.column("c_hi");
  double qmin = kInf, qmax = 0;
  bool pos = true;
  for (std::size_t j = 0; j < ne; ++j) {
    pos = pos && lo[j] > 0.0;
    qmin = std::min(qmin, hi[j] / lo[j]);
    qmax = std::max(qmax, hi[j] / lo[j]);
  }
  v11.detail << "c_lo min " << *std::min_element(lo.begin(), lo.end()) << ", c_hi/c_lo in ["
             << qmin << ", " << qmax << "] ";
  v11.require(pos, "c_lo > 0");
  v11.require(qmax / qmin <= 2.0, "c_hi/c_lo stable within 2x");
}

void c12(Verdict& v) {
  const std::string args = "study --kind anderson2d --grid 64 --eps 2^-2..2^-5 --seed 3 --k-eigs 2 --trials 5 --out ";
  std::vector<fs::path> dirs{workdir() / "det_a", workdir() / "det_b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    const int code = run_cli(args + d.string(), d.string() + ".log");
    v.require(code == 0, "study exit code 0");
  }
  if (!v.pass) return;
  int same = 0, total = 0;
  for (const char* f : {"study.csv", "d_res.dat", "d_fac.dat", "eigenvalues.dat", "control.dat"}) {
    ++total;
    if (slurp(dirs[0] / f) == slurp(dirs[1] / f)) ++same;
  }
  v.detail << same << "/" << total << " outputs bit-identical ";
  v.require(same == total, "bit-identical outputs");
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
  };
  std::vector<Verdict> verdicts(13);
  std::vector<std::pair<Entry, std::function<void()>>> plan = {
      {{1, "Bony reconstruction"}, [&] { c1(verdicts[1]); }},
      {{2, "partition of unity"}, [&] { c2(verdicts[2]); }},
      {{3, "Bernstein/embedding/paraproduct constants"}, [&] { c3(verdicts[3]); }},
      {{4, "KPZ solver"}, [&] { c4(verdicts[4]); }},
      {{5, "transform certificates"}, [&] { c5(verdicts[5]); }},
      {{6, "exact factorizations"}, [&] { c6(verdicts[6]); }},
      {{7, "zero-data degeneracy"}, [&] { c7(verdicts[7]); }},
      {{8, "two-way conjugation identity"}, [&] { c8(verdicts[8]); }},
      {{9, "Wick constant"}, [&] { c9(verdicts[9]); }},
      {{10, "convergence study"}, [&] { c10_11(verdicts[10], verdicts[11]); }},
      {{12, "determinism"}, [&] { c12(verdicts[12]); }},
  };
  auto report = [&](int id, const char* name) {
    const Verdict& v = verdicts[id];
    std::cout << "criterion " << (id < 10 ? " " : "") << id << ' ' << (v.pass ? "PASS" : "FAIL")
              << "  " << name << ": " << v.detail.str() << std::endl;
  };
  for (auto& [e, fn] : plan) {
    try {
      fn();
    } catch (const std::exception& ex) {
      verdicts[e.id].require(false, std::string("exception: ") + ex.what());
      if (e.id == 10) verdicts[11].require(false, "study did not run");
    }
    report(e.id, e.name);
    if (e.id == 10) report(11, "norm equivalence");
  }
  int failed = 0;
  for (int i = 1; i <= 12; ++i) failed += verdicts[i].pass ? 0 : 1;
  std::cout << "acceptance: " << 12 - failed << "/12 criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
