#include "paradom/transform_stack.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paradom/error.hpp"
#include "paradom/pcf.hpp"
#include "paradom/spectral.hpp"

namespace paradom {
namespace {

constexpr double kExpThreshold = 0.25;
constexpr double kOpThreshold = 0.5;

SpectralField minus_one(SpectralField f) {
  f[0] -= 1.0;
  return f;
}

int cutoff_cap(const Grid& g) {
  int c = 0;
  while ((2 << c) <= g.n() / 2) ++c;
  return c;  // floor(log2(n/2))
}

}  // namespace

double Certificates::cert_exp() const { return std::max(exp_E, exp_G); }

double Certificates::cert_ups() const {
  double m = 0.0;
  for (double v : ups) m = std::max(m, v);
  for (double v : upsbar) m = std::max(m, v);
  return m;
}

TransformStack::TransformStack(std::shared_ptr<const EnhancedData> data, int M, int N,
                               std::shared_ptr<const DyadicPartition> P, StackOptions opt)
    : data_(std::move(data)), P_(std::move(P)), M_(M), N_(N), opt_(std::move(opt)),
      E_(data_->grid()), a_(data_->grid()), b_(data_->grid()), Ew_(data_->grid()),
      Emw_(data_->grid()), Eg_(data_->grid()), Zt_(data_->grid()), sW_(data_->grid()),
      div_rt_(data_->grid()) {
  const EnhancedData& d = *data_;
  const Grid& g = d.grid();
  if (P_->grid() != g) throw ConfigError("TransformStack: partition grid differs from data grid");
  if (M < 0 || N < 0) throw ConfigError("TransformStack: cutoffs must be >= 0");
  for (double s : opt_.sigma_list)
    if (!(s >= -2.0 && s <= 2.0)) throw ConfigError("TransformStack: sigma outside [-2, 2]");
  if (d.has_rho() && static_cast<int>(d.rho.size()) != g.dim())
    throw DataError("TransformStack: rho has the wrong number of components");

  const SpectralField WM = project_frequencies(d.W, M, Side::high);
  const SpectralField VM = project_frequencies(d.V, M, Side::high);
  const SpectralField WL = d.W - WM;
  const SpectralField VL = d.V - VM;
  const SpectralField G = WM - VM;

  E_ = exp_field(2.0 * WM - VM);
  a_ = minus_one(E_);
  Eg_ = exp_field(G);
  b_ = minus_one(exp_field(-G));
  Ew_ = exp_field(WM);
  Emw_ = exp_field(-WM);

  Vt_ = scale(E_, grad(VL));
  const VectorField gW = grad(d.W);
  const VectorField gWM = grad(WM);
  SpectralField Q = d.Z - d.W + laplacian(WL) + dot(gW, gW) - dot(gWM, gWM) -
                    dot(grad(WL), grad(d.V));
  Zt_ = pointwise_product(E_, Q) + a_;

  has_rho_ = d.has_rho();
  if (has_rho_) {
    rt_ = scale(E_, d.rho);
    sW_ = pointwise_product(E_, dot(d.rho, gWM));
    div_rt_ = div(rt_);
  } else {
    rt_ = zero_vector(g);
  }

  using F = ParaOperator::Fixed;
  a_low_ = std::make_unique<ParaOperator>(a_, Para::low_high, F::left, *P_);
  b_low_ = std::make_unique<ParaOperator>(b_, Para::low_high, F::left, *P_);
  a_high_ = std::make_unique<ParaOperator>(a_, Para::low_high, F::right, *P_);
  z_high_ = std::make_unique<ParaOperator>(Zt_, Para::low_high, F::right, *P_);
  if (has_rho_) {
    for (const auto& r : rt_) {
      rt_low_.emplace_back(r, Para::low_high, F::left, *P_);
      rt_ge_.emplace_back(r, Para::high_eq, F::left, *P_);
    }
    drt_ge_ = std::make_unique<ParaOperator>(div_rt_, Para::high_eq, F::left, *P_);
  }
}

SpectralField TransformStack::Lambda(const SpectralField& w) const {
  return one_minus_laplacian(w) - div(a_low_->apply(grad(w)));
}

SpectralField TransformStack::LambdaBar(const SpectralField& w) const {
  const SpectralField lw = one_minus_laplacian(w);
  return lw + b_low_->apply(lw);
}

SpectralField TransformStack::Upsilon(const SpectralField& w) const {
  return w - inv_one_minus_laplacian(div(a_low_->apply(grad(w))));
}

SpectralField TransformStack::UpsilonBar(const SpectralField& w) const {
  return w + inv_one_minus_laplacian(b_low_->apply(one_minus_laplacian(w)));
}

SpectralField TransformStack::Upsilon_adj(const SpectralField& v) const {
  return v - div(a_low_->adjoint(grad(inv_one_minus_laplacian(v))));
}

SpectralField TransformStack::UpsilonBar_adj(const SpectralField& v) const {
  return v + one_minus_laplacian(b_low_->adjoint(inv_one_minus_laplacian(v)));
}

SpectralField TransformStack::Upsilon_inv(const SpectralField& w) const {
  return neumann_inverse([this](const SpectralField& x) { return Upsilon(x); }, w, 0.0,
                         "Upsilon", opt_.neumann_tol, opt_.neumann_terms)
      .value;
}

SpectralField TransformStack::UpsilonBar_inv(const SpectralField& w) const {
  return neumann_inverse([this](const SpectralField& x) { return UpsilonBar(x); }, w, 0.0,
                         "UpsilonBar", opt_.neumann_tol, opt_.neumann_terms)
      .value;
}

SpectralField TransformStack::Upsilon_inv_adj(const SpectralField& v) const {
  return neumann_inverse([this](const SpectralField& x) { return Upsilon_adj(x); }, v, 0.0,
                         "Upsilon*", opt_.neumann_tol, opt_.neumann_terms)
      .value;
}

SpectralField TransformStack::UpsilonBar_inv_adj(const SpectralField& v) const {
  return neumann_inverse([this](const SpectralField& x) { return UpsilonBar_adj(x); }, v,
                         0.0, "UpsilonBar*", opt_.neumann_tol, opt_.neumann_terms)
      .value;
}

SpectralField TransformStack::Lambda_inv(const SpectralField& f) const {
  return Upsilon_inv(inv_one_minus_laplacian(f));
}

SpectralField TransformStack::rho_term(const SpectralField& w) const {
  SpectralField out = pointwise_product(sW_, w);
  const VectorField gw = grad(w);
  VectorField ge(rt_.size(), SpectralField(w.grid()));
  for (std::size_t i = 0; i < rt_.size(); ++i) {
    out += rt_low_[i].apply(gw[i]);
    ge[i] = rt_ge_[i].apply(w);
  }
  out += div(ge);
  out -= drt_ge_->apply(w);
  return out;
}

SpectralField TransformStack::singular_part(const SpectralField& w) const {
  SpectralField out = z_high_->apply(w) - div(a_high_->apply(grad(w)));
  if (has_rho_) out += rho_term(w);
  return out;
}

SpectralField TransformStack::singular_part_adj(const SpectralField& v) const {
  SpectralField out = z_high_->adjoint(v) - div(a_high_->adjoint(grad(v)));
  if (has_rho_) {
    out += pointwise_product(sW_, v);
    const VectorField gv = grad(v);
    for (std::size_t i = 0; i < rt_.size(); ++i) {
      out -= partial(rt_low_[i].adjoint(v), static_cast<int>(i));
      out -= rt_ge_[i].adjoint(gv[i]);
    }
    out -= drt_ge_->adjoint(v);
  }
  return out;
}

SpectralField TransformStack::Phi(const SpectralField& w) const {
  return w + Lambda_inv(project_frequencies(singular_part(w), N_, Side::high));
}

SpectralField TransformStack::Phi_adj(const SpectralField& v) const {
  const SpectralField y = inv_one_minus_laplacian(Upsilon_inv_adj(v));
  return v + singular_part_adj(project_frequencies(y, N_, Side::high));
}

SpectralField TransformStack::Gamma(const SpectralField& w) const {
  return neumann_inverse([this](const SpectralField& x) { return Phi(x); }, w, 1.0, "Phi",
                         opt_.neumann_tol, opt_.neumann_terms)
      .value;
}

SpectralField TransformStack::Gamma_adj(const SpectralField& v) const {
  return neumann_inverse([this](const SpectralField& x) { return Phi_adj(x); }, v, -1.0,
                         "Phi*", opt_.neumann_tol, opt_.neumann_terms)
      .value;
}

SpectralField TransformStack::Theta(const SpectralField& v) const {
  return pointwise_product(Ew_, Gamma(Upsilon_inv(UpsilonBar_inv(v))));
}

SpectralField TransformStack::Theta_inv(const SpectralField& u) const {
  return UpsilonBar(Upsilon(Phi(pointwise_product(Emw_, u))));
}

SpectralField TransformStack::Theta_adj(const SpectralField& v) const {
  return UpsilonBar_inv_adj(Upsilon_inv_adj(Gamma_adj(pointwise_product(Ew_, v))));
}

Certificates TransformStack::measure() const {
  Certificates c;
  c.exp_E = sup_norm(a_);
  c.exp_G = sup_norm(b_);
  c.sigma_list = opt_.sigma_list;
  const Grid& g = grid();
  auto ups_m = [this](const SpectralField& w) { return Upsilon(w) - w; };
  auto ups_a = [this](const SpectralField& v) { return Upsilon_adj(v) - v; };
  auto bar_m = [this](const SpectralField& w) { return UpsilonBar(w) - w; };
  auto bar_a = [this](const SpectralField& v) { return UpsilonBar_adj(v) - v; };
  for (double s : opt_.sigma_list) {
    c.ups.push_back(operator_norm(ups_m, ups_a, g, s, s, opt_.power).value);
    c.upsbar.push_back(operator_norm(bar_m, bar_a, g, s, s, opt_.power).value);
  }
  auto phi_m = [this](const SpectralField& w) { return Phi(w) - w; };
  auto phi_a = [this](const SpectralField& v) { return Phi_adj(v) - v; };
  c.phi = operator_norm(phi_m, phi_a, g, 1.0, 1.0, opt_.power).value;
  return c;
}

CutoffChoice choose_cutoffs(std::shared_ptr<const EnhancedData> data,
                            std::shared_ptr<const DyadicPartition> P,
                            const StackOptions& opt) {
  const Grid& g = data->grid();
  const int cap = cutoff_cap(g);
  CutoffChoice out;
  bool found = false;
  std::ostringstream why;
  for (int M = 0; M <= cap && !found; ++M) {
    TransformStack s(data, M, 0, P, opt);
    Certificates c;
    c.exp_E = sup_norm(s.a());
    c.exp_G = sup_norm(s.b());
    c.sigma_list = opt.sigma_list;
    if (c.cert_exp() > kExpThreshold) {
      why.str("");
      why << "sup|exp - 1| = " << c.cert_exp() << " > " << kExpThreshold;
      continue;
    }
    bool ok = true;
    for (double sg : opt.sigma_list) {
      c.ups.push_back(operator_norm([&](const SpectralField& w) { return s.Upsilon(w) - w; },
                                    [&](const SpectralField& v) { return s.Upsilon_adj(v) - v; },
                                    g, sg, sg, opt.power)
                          .value);
      c.upsbar.push_back(
          operator_norm([&](const SpectralField& w) { return s.UpsilonBar(w) - w; },
                        [&](const SpectralField& v) { return s.UpsilonBar_adj(v) - v; }, g, sg,
                        sg, opt.power)
              .value);
      if (c.ups.back() > kOpThreshold || c.upsbar.back() > kOpThreshold) {
        ok = false;
        why.str("");
        why << "||Upsilon - I|| = " << std::max(c.ups.back(), c.upsbar.back()) << " > "
            << kOpThreshold << " at sigma " << sg;
        break;
      }
    }
    if (!ok) continue;
    out.M = M;
    out.cert = c;
    found = true;
  }
  if (!found) {
    std::ostringstream os;
    os << "choose_cutoffs: no M <= " << cap << " certifies the exponential transform ("
       << why.str() << ")";
    throw ResolutionError(os.str());
  }
  for (int N = 0; N <= cap; ++N) {
    TransformStack s(data, out.M, N, P, opt);
    const double phi =
        operator_norm([&](const SpectralField& w) { return s.Phi(w) - w; },
                      [&](const SpectralField& v) { return s.Phi_adj(v) - v; }, g, 1.0, 1.0,
                      opt.power)
            .value;
    if (phi <= kOpThreshold) {
      out.N = N;
      out.cert.phi = phi;
      return out;
    }
    why.str("");
    why << "||Phi - I||_{H^1} = " << phi << " > " << kOpThreshold;
  }
  std::ostringstream os;
  os << "choose_cutoffs: no N <= " << cap << " certifies Phi (" << why.str() << ")";
  throw ResolutionError(os.str());
}

void require_certified(const Certificates& c) {
  std::ostringstream os;
  if (c.cert_exp() > kExpThreshold)
    os << "exponential smallness " << c.cert_exp() << " > " << kExpThreshold << "; ";
  if (c.cert_ups() > kOpThreshold)
    os << "||Upsilon - I|| " << c.cert_ups() << " > " << kOpThreshold << "; ";
  if (c.phi > kOpThreshold) os << "||Phi - I||_{H^1} " << c.phi << " > " << kOpThreshold;
  if (!os.str().empty()) throw CertificateError("certificate violated: " + os.str());
}

SpectralField apply_Lambda(const SpectralField& w, const TransformStack& s, LambdaKind which) {
  return which == LambdaKind::plain ? s.Lambda(w) : s.LambdaBar(w);
}

SpectralField apply_Upsilon(const SpectralField& w, const TransformStack& s, LambdaKind which,
                            bool inverse) {
  if (which == LambdaKind::plain) return inverse ? s.Upsilon_inv(w) : s.Upsilon(w);
  return inverse ? s.UpsilonBar_inv(w) : s.UpsilonBar(w);
}

SpectralField apply_Phi(const SpectralField& w, const TransformStack& s) { return s.Phi(w); }
SpectralField apply_Gamma(const SpectralField& w, const TransformStack& s) {
  return s.Gamma(w);
}

ThetaHandle assemble_theta(const TransformStack& s) {
  return {[&s](const SpectralField& v) { return s.Theta(v); },
          [&s](const SpectralField& u) { return s.Theta_inv(u); }};
}

namespace {

std::string join17(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
  return s;
}

std::vector<double> split_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(parse_double(tok, what));
  return out;
}

struct CachedField {
  const char* file;
  const SpectralField& (TransformStack::*get)() const;
};

const CachedField kCached[] = {
    {"exp_E.pcf", &TransformStack::E},        {"exp_W.pcf", &TransformStack::exp_W},
    {"exp_mW.pcf", &TransformStack::exp_mW},  {"exp_G.pcf", &TransformStack::exp_G},
    {"exp_mG_minus1.pcf", &TransformStack::b}, {"Z_tilde_M.pcf", &TransformStack::Z_tilde_M},
};

}  // namespace

void save_stack(const TransformStack& s, const Certificates& c,
                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Meta m;
  m["M"] = std::to_string(s.M());
  m["N"] = std::to_string(s.N());
  m["cert_exp"] = fmt17(c.cert_exp());
  m["cert_ups"] = fmt17(c.cert_ups());
  m["cert_phi"] = fmt17(c.phi);
  m["exp_E"] = fmt17(c.exp_E);
  m["exp_G"] = fmt17(c.exp_G);
  m["sigma_list"] = join17(c.sigma_list);
  m["ups"] = join17(c.ups);
  m["upsbar"] = join17(c.upsbar);
  m["power_iterations"] = std::to_string(s.options().power.iterations);
  m["power_restarts"] = std::to_string(s.options().power.restarts);
  m["power_seed"] = std::to_string(s.options().power.seed);
  write_meta(dir / "stack.meta", m);
  for (const auto& f : kCached) write_pcf(dir / f.file, (s.*f.get)());
}

VerifyResult verify_stack(std::shared_ptr<const EnhancedData> data,
                          std::shared_ptr<const DyadicPartition> P,
                          const std::filesystem::path& dir) {
  const Meta m = read_meta(dir / "stack.meta");
  StackOptions opt;
  opt.sigma_list = split_doubles(meta_get(m, "sigma_list"), "sigma_list");
  opt.power.iterations = std::stoi(meta_get(m, "power_iterations"));
  opt.power.restarts = std::stoi(meta_get(m, "power_restarts"));
  opt.power.seed = std::stoull(meta_get(m, "power_seed"));
  const int M = std::stoi(meta_get(m, "M"));
  const int N = std::stoi(meta_get(m, "N"));
  TransformStack s(data, M, N, P, opt);
  const Certificates c = s.measure();

  VerifyResult r;
  auto cmp = [&](const std::string& key, double now) {
    const double stored = parse_double(meta_get(m, key), key);
    if (stored != now) r.mismatches.push_back(key + ": stored " + meta_get(m, key) +
                                              ", recomputed " + fmt17(now));
  };
  cmp("cert_exp", c.cert_exp());
  cmp("cert_ups", c.cert_ups());
  cmp("cert_phi", c.phi);
  cmp("exp_E", c.exp_E);
  cmp("exp_G", c.exp_G);
  if (meta_get(m, "ups") != join17(c.ups)) r.mismatches.push_back("ups");
  if (meta_get(m, "upsbar") != join17(c.upsbar)) r.mismatches.push_back("upsbar");
  for (const auto& f : kCached) {
    const SpectralField stored = read_pcf(dir / f.file);
    const SpectralField& now = (s.*f.get)();
    if (stored.grid() != now.grid() || !std::ranges::equal(stored.coeffs(), now.coeffs()))
      r.mismatches.push_back(f.file);
  }
  try {
    require_certified(c);
  } catch (const CertificateError& e) {
    r.mismatches.push_back(e.what());
  }
  r.ok = r.mismatches.empty();
  return r;
}

}  // namespace paradom
