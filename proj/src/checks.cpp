#include "paradom/checks.hpp"

#include "paradom/kpz.hpp"
#include "paradom/paraproduct.hpp"

namespace paradom {

std::vector<CheckRow> run_property_checks(const CheckOptions& opt) {
  const Grid g(opt.dim, opt.n);
  const DyadicPartition P(g);
  std::vector<CheckRow> rows;
  auto append = [&rows](const std::vector<CheckRow>& r) { rows.insert(rows.end(), r.begin(), r.end()); };
  const double d = opt.dim;

  append(check_bernstein(P, 1, 2.0, 2.0, opt.trials, opt.seed).rows);
  append(check_bernstein(P, 1, 2.0, kInf, opt.trials, opt.seed).rows);
  append(check_embedding(P, -0.5, -0.5 + d / 2.0, kInf, 2.0, 2.0, kInf, opt.trials, opt.seed).rows);
  append(check_para_estimates(P, -0.5, 1.0, 4.0, 4.0, 2.0, opt.trials, opt.seed).rows);
  append(check_para_estimates(P, 0.5, 0.25, kInf, 2.0, 2.0, opt.trials, opt.seed).rows);
  append(check_para_estimates(P, -0.75, 0.25, kInf, 2.0, 2.0, opt.trials, opt.seed, true).rows);
  append(check_smoothing(P, {1.0, 4.0, 16.0, 64.0}, 1.0, 0.5, 2.0, opt.trials, opt.seed).rows);
  return rows;
}

}  // namespace paradom
