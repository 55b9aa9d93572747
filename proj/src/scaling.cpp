#include "rig/scaling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rig/analytic.hpp"

namespace rig::scaling {

namespace {

void require_n(std::int64_t n, std::int64_t min) {
  if (n < min) {
    throw std::invalid_argument("scaling needs n >= " + std::to_string(min));
  }
}

double log_n(std::int64_t n) { return std::log(static_cast<double>(n)); }

}  // namespace

double deviation_alpha(std::int64_t n, const ModelParams& params) {
  require_n(n, 2);
  return static_cast<double>(n) * params.p() * analytic::ell(params.r()) -
         log_n(n);
}

double deviation_alpha_prime(std::int64_t n, const ModelParams& params) {
  require_n(n, 3);
  const double ln = log_n(n);
  return static_cast<double>(n) * params.p() * analytic::ell(params.r()) -
         2.0 * (ln - std::log(ln));
}

DeviationReport deviation(std::int64_t n, const ModelParams& params) {
  DeviationReport rep{n, params, deviation_alpha(n, params), std::nullopt,
                      params.p() * analytic::ell(params.r())};
  if (n >= 3) rep.alpha_prime = deviation_alpha_prime(n, params);
  return rep;
}

double critical_p_ell(std::int64_t n, Law law, double offset) {
  require_n(n, law == Law::Zero ? 2 : 3);
  const double ln = log_n(n);
  const double base = law == Law::Zero ? ln : 2.0 * (ln - std::log(ln));
  return (base + offset) / static_cast<double>(n);
}

std::optional<double> solve_p(std::int64_t n, double r, double offset,
                              Law law) {
  require_n(n, law == Law::Zero ? 2 : 3);
  if (!(r > 0.0)) throw std::invalid_argument("solve_p needs r > 0");
  const double target = critical_p_ell(n, law, offset);
  const double p = target / analytic::ell(r);
  if (!(p >= 0.0 && p <= 1.0)) return std::nullopt;
  return p;
}

std::optional<double> solve_r(std::int64_t n, double p, double offset,
                              Law law) {
  require_n(n, law == Law::Zero ? 2 : 3);
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("solve_r needs p in (0,1]");
  const double ell = critical_p_ell(n, law, offset) / p;
  if (!(ell >= 0.0 && ell <= 1.0)) return std::nullopt;
  return 0.5 * ell;
}

double classical_critical_er(std::int64_t n) {
  require_n(n, 2);
  return log_n(n) / static_cast<double>(n);
}

double classical_critical_geo(std::int64_t n) {
  require_n(n, 2);
  return log_n(n) / (2.0 * static_cast<double>(n));
}

double deviation_beta_geo(std::int64_t n, double r) {
  require_n(n, 2);
  return static_cast<double>(n) * analytic::ell(r) - log_n(n);
}

}  // namespace rig::scaling
