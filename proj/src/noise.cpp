#include "paradom/noise.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/kpz.hpp"
#include "paradom/pcf.hpp"
#include "paradom/random.hpp"
#include "paradom/spectral.hpp"

namespace paradom {
namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

SpectralField scaled_random(const Grid& g, std::uint64_t seed, std::uint64_t stream,
                            double alpha, double kmax = kInf) {
  RandomFieldOptions o;
  o.alpha = alpha;
  o.stream = stream;
  o.kmax = kmax;
  return random_field(g, seed, o);
}

VectorField random_vector(const Grid& g, std::uint64_t seed, std::uint64_t stream,
                          double alpha, double kmax = kInf) {
  VectorField v;
  for (int a = 0; a < g.dim(); ++a)
    v.push_back(scaled_random(g, seed, stream + static_cast<std::uint64_t>(a), alpha, kmax));
  return v;
}

}  // namespace

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::anderson2d: return "anderson2d";
    case NoiseKind::generic_I: return "generic_I";
    case NoiseKind::generic_II: return "generic_II";
    case NoiseKind::smooth_manufactured: return "smooth_manufactured";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "anderson2d") return NoiseKind::anderson2d;
  if (s == "generic_I") return NoiseKind::generic_I;
  if (s == "generic_II") return NoiseKind::generic_II;
  if (s == "smooth" || s == "smooth_manufactured") return NoiseKind::smooth_manufactured;
  throw ConfigError("unknown noise kind '" + s +
                    "' (expected anderson2d, generic_I, generic_II or smooth)");
}

void validate(const NoiseSpec& s, int d) {
  auto fail = [](const std::string& m) { throw ConfigError("noise spec: " + m); };
  if (s.kind == NoiseKind::generic_I) {
    if (!(0 < s.delta1 && s.delta1 < s.delta && s.delta < 1))
      fail("assumption (I) needs 0 < delta' < delta < 1");
    if (!(s.p > d && s.r > d)) fail("assumption (I) needs p, r > d");
    const double bound = (1 - s.delta - s.delta1) / d;
    if (!(inv(s.q) < bound)) {
      std::ostringstream os;
      os << "assumption (I) needs 1/q < (1 - delta - delta')/d = " << bound << ", got 1/q = "
         << inv(s.q);
      fail(os.str());
    }
    if (!(inv(s.p) + inv(s.r) < 1.0 / d)) fail("assumption (I) needs 1/p + 1/r < 1/d");
    if (!(inv(s.q) + inv(s.r) < 1.0 / d)) fail("assumption (I) needs 1/q + 1/r < 1/d");
  } else if (s.kind == NoiseKind::generic_II) {
    if (!(0 < s.delta2 && s.delta2 < s.delta1 && s.delta1 < s.delta && s.delta < 1))
      fail("assumption (II) needs 0 < delta'' < delta' < delta < 1");
    const double want = 0.5 - s.delta1 - s.delta2;
    if (std::abs(d * inv(s.r) - want) > 1e-12) {
      std::ostringstream os;
      os << "assumption (II) needs d/r = 1/2 - delta' - delta'' = " << want << ", got d/r = "
         << d * inv(s.r);
      fail(os.str());
    }
  }
}

EnhancedData::EnhancedData(const Grid& g)
    : xi(g), V(g), rho(zero_vector(g)), W(g), Z(g), Z_tilde(g), rho_exp(zero_vector(g)),
      sp_V(g), sp_W(g) {}

bool EnhancedData::has_rho() const {
  for (const auto& c : rho)
    if (!c.is_zero()) return true;
  return false;
}

EnhancedData zero_data(const Grid& g) { return EnhancedData(g); }

double mollifier_symbol(double eps, double k2) {
  return std::exp(-4.0 * kPi * kPi * eps * eps * k2);
}

SpectralField mollify(const SpectralField& f, double eps) {
  if (!(eps > 0.0)) throw ConfigError("mollify: eps must be positive");
  return radial_multiplier(f, [&](double k2) { return mollifier_symbol(eps, k2); });
}

VectorField mollify(const VectorField& f, double eps) {
  VectorField out;
  for (const auto& c : f) out.push_back(mollify(c, eps));
  return out;
}

void require_resolved(const Grid& g, double eps) {
  const double h = g.n() / 2.0;
  const double m = mollifier_symbol(eps, h * h);
  if (!(m <= 1e-8)) {
    std::ostringstream os;
    os << "noise not resolved: mollifier at the Nyquist shell is " << m
       << " > 1e-8 for eps=" << eps << " on n=" << g.n() << " (need eps >= "
       << std::sqrt(std::log(1e8) / (4.0 * kPi * kPi)) / h << ")";
    throw ResolutionError(os.str());
  }
}

double wick_constant(const Grid& g, double eps) {
  if (g.dim() != 2) throw ConfigError("wick_constant: dimension must be 2");
  if (!(eps > 0.0)) throw ConfigError("wick_constant: eps must be positive");
  require_resolved(g, eps);
  const double fp2 = 4.0 * kPi * kPi;
  double c = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k2 = g.k2(i);
    if (k2 == 0.0) continue;
    const double m = mollifier_symbol(eps, k2);
    const double den = 1.0 + fp2 * k2;
    c += fp2 * k2 * m * m / (den * den);
  }
  return c;
}

VectorField helmholtz_project(const VectorField& v) {
  if (v.empty()) throw ConfigError("helmholtz_project: empty vector field");
  const Grid& g = v[0].grid();
  const int d = g.dim();
  if (static_cast<int>(v.size()) != d)
    throw ConfigError("helmholtz_project: expected " + std::to_string(d) + " components");
  VectorField out = v;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k2 = g.k2(i);
    if (k2 == 0.0) continue;
    const auto& k = g.k(i);
    cplx kv = 0.0;
    for (int a = 0; a < d; ++a) kv += static_cast<double>(k[a]) * v[static_cast<std::size_t>(a)][i];
    for (int a = 0; a < d; ++a)
      out[static_cast<std::size_t>(a)][i] -= kv * (static_cast<double>(k[a]) / k2);
  }
  // grad has a zero Nyquist symbol; drop Nyquist so div is zero on every mode.
  for (auto& c : out)
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.is_nyquist(i)) c[i] = 0.0;
  return out;
}

void build_products(EnhancedData& d) {
  const SpectralField E = exp_field(2.0 * d.W - d.V);
  d.Z_tilde = pointwise_product(E, d.Z);
  d.rho_exp = scale(E, d.rho);
  d.sp_V = pointwise_product(E, dot(grad(d.V), d.rho));
  d.sp_W = pointwise_product(E, dot(grad(d.W), d.rho));
}

double kpz_residual(const EnhancedData& d) {
  const VectorField gw = grad(d.W);
  SpectralField r = one_minus_laplacian(d.W);
  r -= dot(gw, gw);
  r += dot(gw, grad(d.V));
  r += d.xi;
  r += SpectralField::constant(d.grid(), d.c_eps);
  r -= d.Z;
  return l2_norm(r);
}

EnhancedData enhance_anderson2d(const Grid& g, double eps, std::uint64_t seed) {
  if (g.dim() != 2) throw ConfigError("enhance_anderson2d: dimension must be 2");
  EnhancedData d(g);
  d.eps = eps;
  d.seed = seed;
  d.kind = NoiseKind::anderson2d;
  d.lam = 1.0;
  d.c_eps = wick_constant(g, eps);
  d.xi = mollify(sample_white_noise(g, seed), eps);
  d.W = -1.0 * inv_one_minus_laplacian(d.xi);
  const VectorField gw = grad(d.W);
  d.Z = dot(gw, gw);
  d.Z -= SpectralField::constant(g, d.c_eps);
  d.Z *= -1.0;
  build_products(d);
  return d;
}

EnhancedData enhance_generic(const NoiseSpec& spec, const Grid& g, double eps, double lam,
                             double tol) {
  if (spec.kind == NoiseKind::anderson2d)
    throw ConfigError("enhance_generic: use enhance_anderson2d for anderson2d");
  validate(spec, g.dim());
  EnhancedData d(g);
  d.eps = eps;
  d.seed = spec.seed;
  d.kind = spec.kind;
  const double amp = spec.amplitude;

  if (spec.kind == NoiseKind::smooth_manufactured) {
    d.lam = 1.0;
    if (amp == 0.0) return d;
    auto unit = [](SpectralField f) {
      const double s = sup_norm(f);
      if (s > 0.0) f *= 1.0 / s;
      return f;
    };
    d.W = (0.3 * amp) * unit(scaled_random(g, spec.seed, 1, 2.0, 3.0));
    d.V = (0.3 * amp) * unit(scaled_random(g, spec.seed, 2, 2.0, 3.0));
    VectorField r = helmholtz_project(random_vector(g, spec.seed, 3, 2.0, 3.0));
    double s = 0.0;
    for (auto& c : r) {
      c[0] = 0.1;
      s = std::max(s, sup_norm(c));
    }
    for (auto& c : r) c *= 0.3 * amp / s;
    d.rho = std::move(r);
    const VectorField gw = grad(d.W);
    d.xi = -1.0 * one_minus_laplacian(d.W);
    d.xi += dot(gw, gw);
    d.xi -= dot(gw, grad(d.V));
    build_products(d);
    return d;
  }

  require_resolved(g, eps);
  const bool one = spec.kind == NoiseKind::generic_I;
  const double a_xi = one ? -1.0 + spec.delta : -0.5 + spec.delta;
  const double a_V = one ? 1.0 - spec.delta1 : 0.5 + spec.delta1;
  const double a_rho = one ? -spec.delta1 : -0.5 - spec.delta2;
  d.xi = amp * mollify(scaled_random(g, spec.seed, 11, a_xi), eps);
  d.V = amp * mollify(scaled_random(g, spec.seed, 12, a_V), eps);
  d.rho = mollify(helmholtz_project(random_vector(g, spec.seed, 13, a_rho)), eps);
  for (auto& c : d.rho) c *= amp;

  KpzProblem prob = lam > 0.0 ? KpzProblem(d.xi, d.V, lam) : auto_lambda(d.xi, d.V, tol);
  prob.tol = tol;
  // The 20-step contraction probe can accept a shift whose iteration later
  // stalls or blows up; keep doubling in that case.
  std::optional<KpzSolution> found;
  while (!found) {
    try {
      found = solve_kpz(prob);
    } catch (const Error& e) {
      if (lam > 0.0 || (e.code() != ExitCode::no_convergence && e.code() != ExitCode::divergence))
        throw;
      if (prob.lam >= 1048576.0)
        throw DataTooRoughError(std::string("no lambda <= 2^20 solves the KPZ equation: ") +
                                e.what());
      prob.lam *= 2.0;
    }
  }
  KpzSolution sol = std::move(*found);
  d.lam = prob.lam;
  d.W = std::move(sol.W);
  d.Z = (1.0 - d.lam) * d.W;
  d.c_eps = 0.0;
  build_products(d);
  return d;
}

void save_enhanced(const EnhancedData& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_pcf(dir / "xi.pcf", d.xi);
  write_pcf(dir / "V.pcf", d.V);
  write_pcf(dir / "W.pcf", d.W);
  write_pcf(dir / "Z.pcf", d.Z);
  write_pcf(dir / "Z_tilde.pcf", d.Z_tilde);
  write_pcf(dir / "sp_V.pcf", d.sp_V);
  write_pcf(dir / "sp_W.pcf", d.sp_W);
  for (std::size_t a = 0; a < d.rho.size(); ++a) {
    write_pcf(dir / ("rho_" + std::to_string(a) + ".pcf"), d.rho[a]);
    write_pcf(dir / ("rho_exp_" + std::to_string(a) + ".pcf"), d.rho_exp[a]);
  }
  write_meta(dir / "meta", {{"eps", fmt17(d.eps)},
                            {"c_eps", fmt17(d.c_eps)},
                            {"seed", std::to_string(d.seed)},
                            {"kind", to_string(d.kind)},
                            {"lam", fmt17(d.lam)}});
}

EnhancedData load_enhanced(const std::filesystem::path& dir) {
  const Meta m = read_meta(dir / "meta");
  SpectralField xi = read_pcf(dir / "xi.pcf");
  EnhancedData d(xi.grid());
  d.xi = std::move(xi);
  auto load = [&](const char* name) {
    SpectralField f = read_pcf(dir / name);
    if (f.grid() != d.grid())
      throw DataError(std::string(name) + " is on a different grid than xi.pcf");
    return f;
  };
  d.V = load("V.pcf");
  d.W = load("W.pcf");
  d.Z = load("Z.pcf");
  d.Z_tilde = load("Z_tilde.pcf");
  d.sp_V = load("sp_V.pcf");
  d.sp_W = load("sp_W.pcf");
  for (int a = 0; a < d.grid().dim(); ++a) {
    d.rho[static_cast<std::size_t>(a)] = load(("rho_" + std::to_string(a) + ".pcf").c_str());
    d.rho_exp[static_cast<std::size_t>(a)] =
        load(("rho_exp_" + std::to_string(a) + ".pcf").c_str());
  }
  d.eps = parse_double(meta_get(m, "eps"), "eps");
  d.c_eps = parse_double(meta_get(m, "c_eps"), "c_eps");
  d.seed = std::stoull(meta_get(m, "seed"));
  d.kind = parse_noise_kind(meta_get(m, "kind"));
  d.lam = parse_double(meta_get(m, "lam"), "lam");
  return d;
}

EnhancedData enhance(const NoiseSpec& spec, const Grid& g, double eps, double tol) {
  if (spec.kind == NoiseKind::anderson2d) return enhance_anderson2d(g, eps, spec.seed);
  return enhance_generic(spec, g, eps, 0.0, tol);
}

}  // namespace paradom
