// Deviation sequences and critical scalings. Natural logarithms throughout.
//
//   p l(r) = (log n + alpha) / n                       circle / zero law
//   p l(r) = (2 (log n - log log n) + alpha') / n      interval one law
#pragma once

#include <cstdint>
#include <optional>

#include "rig/graph.hpp"

namespace rig::scaling {

/// Which critical scaling a deviation is measured against.
enum class Law {
  Zero,         // log n / n (circle zero and one laws, interval zero law)
  OneInterval,  // 2 (log n - log log n) / n
};

struct DeviationReport {
  std::int64_t n;
  ModelParams params;
  double alpha;
  std::optional<double> alpha_prime;  // needs n >= 3
  double p_ell;
};

/// n p l(r) - log n.
double deviation_alpha(std::int64_t n, const ModelParams& params);
/// n p l(r) - 2 (log n - log log n); n >= 3.
double deviation_alpha_prime(std::int64_t n, const ModelParams& params);
DeviationReport deviation(std::int64_t n, const ModelParams& params);

/// The value of p l(r) at which the given law has deviation `offset`.
double critical_p_ell(std::int64_t n, Law law, double offset);

/// p with p l(r) on the chosen scaling; empty when it would leave [0,1].
std::optional<double> solve_p(std::int64_t n, double r, double offset,
                              Law law = Law::Zero);
/// r with p l(r) on the chosen scaling; empty when l(r) would exceed 1 or
/// the target is negative. A target of exactly l = 1 reports r = 0.5.
std::optional<double> solve_r(std::int64_t n, double p, double offset,
                              Law law = Law::Zero);

inline std::optional<double> solve_p_for_alpha(std::int64_t n, double r,
                                               double alpha) {
  return solve_p(n, r, alpha, Law::Zero);
}
inline std::optional<double> solve_r_for_alpha(std::int64_t n, double p,
                                               double alpha) {
  return solve_r(n, p, alpha, Law::Zero);
}

/// log n / n.
double classical_critical_er(std::int64_t n);
/// log n / (2n).
double classical_critical_geo(std::int64_t n);
/// n l(r) - log n.
double deviation_beta_geo(std::int64_t n, double r);

}  // namespace rig::scaling
