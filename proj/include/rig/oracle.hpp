// Independent checks of the closed forms: quadrature of the defining
// integrals, Monte Carlo frequencies and exhaustive enumeration.
//
// Nothing here reuses the case analysis of rig::analytic. Coverage
// probabilities are computed as overlap lengths of [x - r, x + r] with the
// domain (and, on the circle, with its translates by +-1).
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rig/graph.hpp"

namespace rig::oracle {

struct OracleReport {
  std::string name;
  double closed_form = 0.0;
  double oracle_value = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// pass = abs_err <= tolerance || rel_err <= tolerance.
OracleReport make_report(std::string name, double closed_form,
                         double oracle_value, double tolerance);

/// The closed forms under test. Swappable so the suite can be checked for
/// sensitivity.
struct ClosedForms {
  std::function<double(Metric, std::int64_t, const ModelParams&)> first_moment;
  std::function<double(std::int64_t, const ModelParams&)> pair_moment_circle;
  std::function<double(std::int64_t, const ModelParams&)> pair_moment_interval;
  std::function<double(double, double)> u_tilde_circle;

  static ClosedForms library();
};

/// Probability that a uniform point lies within r of x.
double coverage(Metric metric, double x, double r);
/// Probability that a uniform point lies within r of both x and y.
double joint_coverage(Metric metric, double x, double y, double r);

/// Integral over x of (1 - p coverage(x))^(n-1); relative tolerance 1e-11.
double first_moment_by_quadrature(Metric metric, std::int64_t n,
                                  const ModelParams& params);
/// Double integral of (1 - p 1{d(x,y) <= r}) b(x,y)^(n-2) over the unit
/// square, b = 1 - p c(x) - p c(y) + p^2 c(x,y).
double pair_moment_by_quadrature(Metric metric, std::int64_t n,
                                 const ModelParams& params,
                                 double rel_tol = 1e-12);

OracleReport quad_first_moment(Metric metric, std::int64_t n,
                               const ModelParams& params,
                               const ClosedForms& forms = ClosedForms::library());
OracleReport quad_pair_moment(Metric metric, std::int64_t n,
                              const ModelParams& params,
                              const ClosedForms& forms = ClosedForms::library());

/// Frequency of {||Z|| <= r, ||Z - z|| <= r} over `samples` uniforms,
/// compared with u_tilde_circle at 5 standard errors.
OracleReport mc_utilde(double z, double r, std::int64_t samples,
                       std::uint64_t seed,
                       const ClosedForms& forms = ClosedForms::library());

struct ErEnumeration {
  double prob_no_isolated;
  double expected_isolated;
};

/// Exact law of the isolated-node count of ER(n, p) by summing over all
/// 2^(n(n-1)/2) edge configurations; n in {2, 3, 4}.
ErEnumeration enumerate_small_er(std::int64_t n, double p);

/// Enumeration against n (1-p)^(n-1) and against a Monte Carlo estimate of
/// P{I = 0} (5 standard errors).
std::vector<OracleReport> exhaustive_small_er(std::int64_t n, double p,
                                              std::int64_t trials,
                                              std::uint64_t seed);

struct SuiteOptions {
  bool full = false;
  std::uint64_t seed = 20240601;
};

std::vector<OracleReport> run_suite(
    const SuiteOptions& options,
    const ClosedForms& forms = ClosedForms::library());

}  // namespace rig::oracle
