#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "paradom/linear_map.hpp"
#include "paradom/noise.hpp"
#include "paradom/paraproduct.hpp"

namespace paradom {

struct Certificates {
  double exp_E = 0.0;   // sup |exp(2 W_M - V_M) - 1|
  double exp_G = 0.0;   // sup |exp(-(W_M - V_M)) - 1|
  std::vector<double> sigma_list;
  std::vector<double> ups;     // ||Upsilon - I||_{H^s}, per sigma
  std::vector<double> upsbar;  // ||UpsilonBar - I||_{H^s}, per sigma
  double phi = 0.0;            // ||Phi - I||_{H^1}

  double cert_exp() const;
  double cert_ups() const;
};

struct StackOptions {
  std::vector<double> sigma_list{0.0, 1.0};
  PowerOptions power{};
  double neumann_tol = 1e-12;
  int neumann_terms = 60;
};

/// Transforms built from enhanced data and cutoffs M, N. With
/// W_M = P_{>M}W, V_M = P_{>M}V and G = W_M - V_M:
///   E = exp(2 W_M - V_M), a = E - 1, b = exp(-G) - 1,
///   Lambda w    = (1 - Delta)w - div(a < grad w)
///   Upsilon w   = w - J div(a < grad w),         J = (1 - Delta)^{-1}
///   LambdaBar w = (1 - Delta)w + b < (1 - Delta)w
///   UpsBar w    = w + J(b < (1 - Delta)w)
///   Phi w       = w + Lambda^{-1} P_{>N}(w < Zt - div(grad w < a) + rho_term(w))
///   Gamma = Phi^{-1},  Lambda^{-1} = Upsilon^{-1} J
///   Theta       = exp(W_M) Gamma Upsilon^{-1} UpsBar^{-1}
/// where Zt is the cut-off potential and rho_term(w) = sW w + rt . grad w.
class TransformStack {
 public:
  TransformStack(std::shared_ptr<const EnhancedData> data, int M, int N,
                 std::shared_ptr<const DyadicPartition> P, StackOptions opt = {});

  const EnhancedData& data() const { return *data_; }
  std::shared_ptr<const EnhancedData> data_ptr() const { return data_; }
  const DyadicPartition& partition() const { return *P_; }
  const Grid& grid() const { return data_->grid(); }
  int M() const { return M_; }
  int N() const { return N_; }
  const StackOptions& options() const { return opt_; }

  // cached fields
  const SpectralField& E() const { return E_; }
  const SpectralField& a() const { return a_; }
  const SpectralField& b() const { return b_; }
  const SpectralField& exp_W() const { return Ew_; }
  const SpectralField& exp_mW() const { return Emw_; }
  const SpectralField& exp_G() const { return Eg_; }
  const SpectralField& Z_tilde_M() const { return Zt_; }
  const VectorField& V_tilde() const { return Vt_; }
  const VectorField& rho_tilde() const { return rt_; }
  const SpectralField& s_W() const { return sW_; }
  bool has_rho() const { return has_rho_; }

  SpectralField Lambda(const SpectralField& w) const;
  SpectralField LambdaBar(const SpectralField& w) const;
  SpectralField Upsilon(const SpectralField& w) const;
  SpectralField UpsilonBar(const SpectralField& w) const;
  SpectralField Upsilon_inv(const SpectralField& w) const;
  SpectralField UpsilonBar_inv(const SpectralField& w) const;
  SpectralField Lambda_inv(const SpectralField& f) const;
  SpectralField Phi(const SpectralField& w) const;
  SpectralField Gamma(const SpectralField& w) const;
  SpectralField Theta(const SpectralField& v) const;
  SpectralField Theta_inv(const SpectralField& u) const;

  // L2 adjoints
  SpectralField Upsilon_adj(const SpectralField& v) const;
  SpectralField UpsilonBar_adj(const SpectralField& v) const;
  SpectralField Upsilon_inv_adj(const SpectralField& v) const;
  SpectralField UpsilonBar_inv_adj(const SpectralField& v) const;
  SpectralField Phi_adj(const SpectralField& v) const;
  SpectralField Gamma_adj(const SpectralField& v) const;
  SpectralField Theta_adj(const SpectralField& v) const;

  /// w < Zt - div(grad w < a) + rho_term(w), before P_{>N}.
  SpectralField singular_part(const SpectralField& w) const;
  SpectralField singular_part_adj(const SpectralField& v) const;
  /// rho_term(w) = sW w + rt . grad w through the expansion
  /// rt < grad w + div(rt >= w) - (div rt) >= w.
  SpectralField rho_term(const SpectralField& w) const;

  /// Re-measures all certificates for this (M, N).
  Certificates measure() const;

 private:
  std::shared_ptr<const EnhancedData> data_;
  std::shared_ptr<const DyadicPartition> P_;
  int M_, N_;
  StackOptions opt_;
  SpectralField E_, a_, b_, Ew_, Emw_, Eg_, Zt_, sW_, div_rt_;
  VectorField Vt_, rt_;
  bool has_rho_ = false;
  std::unique_ptr<ParaOperator> a_low_;    // x -> a < x
  std::unique_ptr<ParaOperator> b_low_;    // x -> b < x
  std::unique_ptr<ParaOperator> a_high_;   // x -> x < a
  std::unique_ptr<ParaOperator> z_high_;   // x -> x < Zt
  std::vector<ParaOperator> rt_low_;       // x -> rt_i < x
  std::vector<ParaOperator> rt_ge_;        // x -> rt_i >= x
  std::unique_ptr<ParaOperator> drt_ge_;   // x -> (div rt) >= x
};

/// Smallest M with both exponential certificates <= 1/4 and
/// ||Upsilon - I||, ||UpsilonBar - I|| <= 1/2 on sigma_list; then smallest N
/// with ||Phi - I||_{H^1} <= 1/2. Both capped at log2(n/2); ResolutionError
/// at the cap.
struct CutoffChoice {
  int M = 0;
  int N = 0;
  Certificates cert;
};
CutoffChoice choose_cutoffs(std::shared_ptr<const EnhancedData> data,
                            std::shared_ptr<const DyadicPartition> P,
                            const StackOptions& opt = {});

/// Throws CertificateError if any certificate exceeds its threshold.
void require_certified(const Certificates& c);

enum class LambdaKind { plain, bar };
SpectralField apply_Lambda(const SpectralField& w, const TransformStack& s, LambdaKind which);
SpectralField apply_Upsilon(const SpectralField& w, const TransformStack& s, LambdaKind which,
                            bool inverse);
SpectralField apply_Phi(const SpectralField& w, const TransformStack& s);
SpectralField apply_Gamma(const SpectralField& w, const TransformStack& s);

struct ThetaHandle {
  LinearOp theta;
  LinearOp theta_inv;
};
ThetaHandle assemble_theta(const TransformStack& s);

/// Meta file (M, N, certificates) and cached exponentials under dir.
void save_stack(const TransformStack& s, const Certificates& c, const std::filesystem::path& dir);

struct VerifyResult {
  bool ok = false;
  std::vector<std::string> mismatches;
};
/// Rebuilds the stack from data and the stored cutoffs, re-measures every
/// certificate and compares with the stored values and cached fields bit for bit.
VerifyResult verify_stack(std::shared_ptr<const EnhancedData> data,
                          std::shared_ptr<const DyadicPartition> P,
                          const std::filesystem::path& dir);

}  // namespace paradom
