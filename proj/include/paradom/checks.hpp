#pragma once

#include <cstdint>
#include <vector>

#include "paradom/littlewood_paley.hpp"

namespace paradom {

struct CheckOptions {
  int n = 128;
  int dim = 2;
  std::uint64_t seed = 1;
  int trials = 4;
};

/// Bernstein, embedding, paraproduct, resonant (including the correlated
/// negative control at a1 + a2 = -0.5) and resolvent-smoothing reports,
/// flattened to rows in that order.
std::vector<CheckRow> run_property_checks(const CheckOptions& opt);

}  // namespace paradom
