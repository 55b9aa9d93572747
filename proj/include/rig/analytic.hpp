// Closed-form moments of the isolated-node count I_n for the intersection
// graph, together with the first/second moment bounds on P{I_n = 0}.
//
// Notation: chi_i is the indicator that node i is isolated, so
//   E[I_n]   = n E[chi_1]
//   E[I_n^2] = n E[chi_1] + n(n-1) E[chi_1 chi_2].
#pragma once

#include <cstdint>
#include <optional>

#include "rig/graph.hpp"

namespace rig::analytic {

/// min(1, 2r): probability that a uniform point on the circle falls within
/// range r of a fixed point.
double ell(double r);

/// P{d(x, Y) <= r} for Y uniform; circle version does not depend on x.
double a_circle(double x, double r);
double a_interval(double x, double r);

/// E[chi_1] on the circle: (1 - p ell(r))^(n-1).
double first_moment_circle(std::int64_t n, const ModelParams& params);
/// E[chi_1] on the interval, exact.
double first_moment_interval(std::int64_t n, const ModelParams& params);
/// Upper bound on first_moment_interval; requires p > 0.
double first_moment_interval_upper(std::int64_t n, const ModelParams& params);
double first_moment(Metric metric, std::int64_t n, const ModelParams& params);

/// P{||Z|| <= r, ||Z - z|| <= r} on the circle, z in [0, 0.5].
double u_tilde_circle(double z, double r);
/// Probability that a third node links to neither of two circle nodes at arc
/// distance z.
double b_tilde_circle(double z, const ModelParams& params);

/// E[chi_1 chi_2] on the circle, exact.
double pair_moment_circle_exact(std::int64_t n, const ModelParams& params);
/// Case-wise upper bound on E[chi_1 chi_2] (circle). Exact in
/// the r >= 0.5 and p = 0 cases.
double pair_moment_circle_upper(std::int64_t n, const ModelParams& params);
/// E[chi_1 chi_2] on the interval by nested adaptive quadrature (relative
/// tolerance 1e-10).
double pair_moment_interval_quadrature(std::int64_t n,
                                       const ModelParams& params);

/// E[chi_1 chi_2] / E[chi_1]^2 on the circle, exact. Empty when E[chi_1] = 0.
std::optional<double> ratio_exact(std::int64_t n, const ModelParams& params);
/// Case-wise upper bound on that ratio. Empty (undefined) for r >= 0.5 and
/// p = 1, where the first moment vanishes.
std::optional<double> ratio_upper(std::int64_t n, const ModelParams& params);

struct ProbabilityBounds {
  double lower_raw;  // 1 - E[I_n]; may be negative
  std::optional<double> upper;  // 1 - E[I_n]^2 / E[I_n^2]
  double lower() const { return lower_raw < 0.0 ? 0.0 : lower_raw; }
};

/// First and second moment bounds on P{I_n = 0}. The upper bound is
/// available on the circle only, where E[chi_1 chi_2] is known exactly.
ProbabilityBounds probability_bounds(std::int64_t n, const ModelParams& params,
                                     Metric metric);

enum class PairMomentKind { Exact, Quadrature, None };

struct MomentReport {
  Metric metric;
  std::int64_t n;
  ModelParams params;
  double first_moment_per_node;
  double expected_isolated;
  std::optional<double> pair_moment;
  PairMomentKind pair_kind;
  std::optional<double> second_moment_In;
  std::optional<double> ratio_upper;  // circle only
  double prob_lower_raw;
  std::optional<double> prob_upper;
  double prob_lower() const {
    return prob_lower_raw < 0.0 ? 0.0 : prob_lower_raw;
  }
};

/// All moment quantities for one configuration. With
/// interval_quadrature=true the interval pair moment (and hence a probability
/// upper bound) is filled in by quadrature.
MomentReport moments(Metric metric, std::int64_t n, const ModelParams& params,
                     bool interval_quadrature = false);

namespace detail {
/// (1 - x)^k for x in [0,1], evaluated as exp(k log1p(-x)).
double pow1m(double x, double k);
/// (base + gap)^k - base^k for base >= 0, gap >= 0, without cancellation.
double power_difference(double base, double gap, double k);
/// (1 - x)^k - (1 - x - gap)^k; the leading power comes from log1p(-x), so a
/// rounded 1 - x is never raised to a large k.
double pow1m_difference(double x, double gap, double k);
}  // namespace detail

}  // namespace rig::analytic
