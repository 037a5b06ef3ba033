#pragma once

#include <cstdint>
#include <vector>

#include "paradom/littlewood_paley.hpp"

namespace paradom {

/// low_high: f < g, high_low: f > g, resonant: f o g,
/// low_eq: f <= g (= < + o), high_eq: f >= g (= o + >).
enum class Para { low_high, high_low, resonant, low_eq, high_eq };

struct Bony {
  SpectralField low_high;
  SpectralField resonant;
  SpectralField high_low;
};

Bony bony_decompose(const SpectralField& f, const SpectralField& g,
                    const DyadicPartition& P);
SpectralField para_apply(const SpectralField& f, const SpectralField& g, Para which,
                         const DyadicPartition& P);

/// f < g = sum_j S_{j-1} f Delta_j g
SpectralField paraproduct(const SpectralField& f, const SpectralField& g,
                          const DyadicPartition& P);
/// f o g = sum_{|i-j|<=1} Delta_i f Delta_j g
SpectralField resonant(const SpectralField& f, const SpectralField& g,
                       const DyadicPartition& P);

/// Linear map x -> a (op) x (fixed_left) or x -> x (op) a (fixed right) for
/// a fixed factor a, with its L2 adjoint. Blocks of a are precomputed.
class ParaOperator {
 public:
  enum class Fixed { left, right };

  ParaOperator(const SpectralField& a, Para which, Fixed fixed,
               const DyadicPartition& P);

  SpectralField apply(const SpectralField& x) const;
  SpectralField adjoint(const SpectralField& v) const;

  VectorField apply(const VectorField& x) const;
  VectorField adjoint(const VectorField& v) const;

  const DyadicPartition& partition() const { return *P_; }

 private:
  // Of the three elementary shapes every combination decomposes into:
  //   lowfix:  x -> sum_j S_{j-1}a Delta_j x       (a < x)
  //   highfix: x -> sum_j S_{j-1}x Delta_j a       (x < a)
  //   res:     x -> sum_j (sum_{|i-j|<=1} Delta_i a) Delta_j x
  SpectralField lowfix(const SpectralField& x) const;
  SpectralField lowfix_adj(const SpectralField& v) const;
  SpectralField highfix(const SpectralField& x) const;
  SpectralField highfix_adj(const SpectralField& v) const;
  SpectralField res(const SpectralField& x) const;
  SpectralField res_adj(const SpectralField& v) const;

  const DyadicPartition* P_;
  bool use_low_ = false, use_high_ = false, use_res_ = false;
  std::vector<SpectralField> low_a_;    // S_{j-1} a, index j + 1
  std::vector<SpectralField> block_a_;  // Delta_j a
  std::vector<SpectralField> near_a_;   // sum_{|i-j|<=1} Delta_i a
  std::vector<int> block_band_;         // band of Delta_j, index j + 1
  std::vector<int> low_band_;           // band of S_{j-1}
};

struct ParaReport {
  double para_max = 0.0;
  double para_min = 0.0;
  double res_max = 0.0;
  double res_min = 0.0;
  bool resonant_checked = false;
  std::vector<CheckRow> rows;
};

/// Ratios ||f < g||_{B^alpha_{p,q}} / (||f||_{B^a1_{p1,inf}} ||g||_{B^a2_{p2,q}})
/// with alpha = min(a1, 0) + a2 and 1/p = 1/p1 + 1/p2, and the resonant
/// analogue at regularity a1 + a2. Inputs are random fields with spectral
/// decay of regularity a1, a2. With `correlated`, g shares the phases of f
/// (g = |D|^{a1-a2} f), which aligns every resonant block; the resonant
/// ratio is then computed even for a1 + a2 <= 0.
ParaReport check_para_estimates(const DyadicPartition& P, double a1, double a2,
                                double p1, double p2, double q, int trials,
                                std::uint64_t seed, bool correlated = false);

}  // namespace paradom
