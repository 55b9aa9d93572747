#include "rig/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rig/quadrature.hpp"

namespace rig::analytic {

namespace detail {

double pow1m(double x, double k) {
  if (k == 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return std::exp(k * std::log1p(-x));
}

double power_difference(double base, double gap, double k) {
  base = std::max(base, 0.0);
  if (gap <= 0.0) return 0.0;
  if (base == 0.0) return std::pow(gap, k);
  // (base + gap)^k (1 - (base / (base + gap))^k): the leading factor only
  // underflows when the difference itself does.
  const double growth = k * std::log1p(gap / base);
  return std::exp(k * std::log(base) + growth) * -std::expm1(-growth);
}

double pow1m_difference(double x, double gap, double k) {
  if (gap <= 0.0) return 0.0;
  const double lead = pow1m(x, k);
  if (x + gap >= 1.0) return lead;
  return lead * -std::expm1(k * std::log1p(-gap / (1.0 - x)));
}

}  // namespace detail

using detail::pow1m;
using detail::pow1m_difference;
using detail::power_difference;

namespace {

void require_n(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("moment formulas need n >= 2");
}

double pair_moment_circle_integrand(double z, std::int64_t n,
                                    const ModelParams& params) {
  const double w = z <= params.r() ? 1.0 - params.p() : 1.0;
  return w * std::pow(b_tilde_circle(z, params), static_cast<double>(n - 2));
}

}  // namespace

double ell(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("ell needs r >= 0");
  return std::min(1.0, 2.0 * r);
}

double a_circle(double x, double r) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x must lie in [0,1]");
  return ell(r);
}

double a_interval(double x, double r) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x must lie in [0,1]");
  if (!(r >= 0.0)) throw std::invalid_argument("a_interval needs r >= 0");
  if (r >= 1.0) return 1.0;
  if (r == 0.0) return 0.0;
  const double lo = std::min(r, 1.0 - r);
  const double hi = std::max(r, 1.0 - r);
  if (x <= lo) return x + r;
  if (x < hi) return ell(r);
  return 1.0 - x + r;
}

double first_moment_circle(std::int64_t n, const ModelParams& params) {
  require_n(n);
  return pow1m(params.p() * ell(params.r()), static_cast<double>(n - 1));
}

double first_moment_interval(std::int64_t n, const ModelParams& params) {
  require_n(n);
  const double r = params.r();
  const double p = params.p();
  const double nn = static_cast<double>(n);
  if (p == 0.0 || r == 0.0) return 1.0;
  if (r >= 1.0) return pow1m(p, nn - 1.0);
  if (r <= 0.5) {
    return (1.0 - 2.0 * r) * pow1m(2.0 * p * r, nn - 1.0) +
           2.0 / (nn * p) * pow1m_difference(p * r, p * r, nn);
  }
  return (2.0 * r - 1.0) * pow1m(p, nn - 1.0) +
         2.0 / (nn * p) * pow1m_difference(p * r, p * (1.0 - r), nn);
}

double first_moment_interval_upper(std::int64_t n, const ModelParams& params) {
  require_n(n);
  const double p = params.p();
  if (p <= 0.0) throw std::invalid_argument("interval first-moment bound needs p > 0");
  const double nn = static_cast<double>(n);
  const double pl = p * ell(params.r());
  return pow1m(pl, nn - 1.0) + 2.0 / (nn * p) * pow1m(0.5 * pl, nn);
}

double first_moment(Metric metric, std::int64_t n, const ModelParams& params) {
  return metric == Metric::Circle ? first_moment_circle(n, params)
                                  : first_moment_interval(n, params);
}

double u_tilde_circle(double z, double r) {
  if (!(z >= 0.0 && z <= 0.5)) throw std::invalid_argument("z must lie in [0,0.5]");
  if (!(r >= 0.0)) throw std::invalid_argument("u_tilde_circle needs r >= 0");
  if (r >= 0.5) return 1.0;
  if (r < 0.25) return z <= 2.0 * r ? 2.0 * r - z : 0.0;
  return z <= 1.0 - 2.0 * r ? 2.0 * r - z : 4.0 * r - 1.0;
}

double b_tilde_circle(double z, const ModelParams& params) {
  const double p = params.p();
  const double r = params.r();
  const double v = 1.0 - 2.0 * p * ell(r) + p * p * u_tilde_circle(z, r);
  return std::clamp(v, 0.0, 1.0);
}

double pair_moment_circle_exact(std::int64_t n, const ModelParams& params) {
  require_n(n);
  const double p = params.p();
  const double r = params.r();
  const double nn = static_cast<double>(n);
  if (p == 0.0) return 1.0;
  if (r >= 0.5) return pow1m(p, 2.0 * nn - 3.0);

  // b~ is affine in z between the kink of u~ and the indicator cut at r.
  const double kink = r < 0.25 ? 2.0 * r : 1.0 - 2.0 * r;
  const auto pts = quad::partition(0.0, 0.5, {kink, r});
  const double slope = p * p;
  const double m = nn - 2.0;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double z0 = pts[k];
    const double z1 = pts[k + 1];
    const double mid = 0.5 * (z0 + z1);
    const double weight = mid <= r ? 1.0 - p : 1.0;
    if (mid <= kink) {
      sum += weight *
             power_difference(b_tilde_circle(z1, params), slope * (z1 - z0),
                              m + 1.0) /
             (slope * (m + 1.0));
    } else {
      sum += weight * (z1 - z0) * std::pow(b_tilde_circle(mid, params), m);
    }
  }
  double result = 2.0 * sum;
  if (!std::isfinite(result) || result < 0.0 || result > 1.0) {
    result = 2.0 * quad::integrate_pieces(
                       [&](double z) {
                         return pair_moment_circle_integrand(z, n, params);
                       },
                       pts, 1e-12);
  }
  return result;
}

double pair_moment_circle_upper(std::int64_t n, const ModelParams& params) {
  require_n(n);
  const double p = params.p();
  const double r = params.r();
  const double nn = static_cast<double>(n);
  if (p == 0.0) return 1.0;
  if (r >= 0.5) return pow1m(p, 2.0 * nn - 3.0);
  if (r < 0.25) {
    const double base = 1.0 - 4.0 * p * r;
    return (1.0 - 4.0 * r) * std::pow(base, nn - 2.0) +
           2.0 / ((nn - 1.0) * p * p) *
               power_difference(base, 2.0 * p * p * r, nn - 1.0);
  }
  return (4.0 * r - 1.0) * pow1m(2.0 * p * r, 2.0 * (nn - 2.0)) +
         (2.0 - 4.0 * r) *
             std::pow(1.0 - 4.0 * p * r + 2.0 * p * p * r, nn - 2.0);
}

std::optional<double> ratio_exact(std::int64_t n, const ModelParams& params) {
  const double first = first_moment_circle(n, params);
  if (first <= 0.0) return std::nullopt;
  const double pair = pair_moment_circle_exact(n, params);
  if (pair <= 0.0) return 0.0;
  return std::exp(std::log(pair) - 2.0 * std::log(first));
}

std::optional<double> ratio_upper(std::int64_t n, const ModelParams& params) {
  require_n(n);
  const double p = params.p();
  const double r = params.r();
  const double nn = static_cast<double>(n);
  if (p == 0.0) return 1.0;
  if (r >= 0.5) {
    if (p >= 1.0) return std::nullopt;
    return 1.0 / (1.0 - p);
  }
  if (r < 0.25) {
    const double base = 1.0 - 4.0 * p * r;
    return (1.0 - 4.0 * r) / base +
           2.0 / ((nn - 1.0) * p * p) *
               std::expm1((nn - 1.0) * std::log1p(2.0 * p * p * r / base));
  }
  const double q = 1.0 - 2.0 * p * r;
  const double c = 1.0 - 4.0 * p * r + 2.0 * p * p * r;
  return (4.0 * r - 1.0) / (q * q) +
         (2.0 - 4.0 * r) *
             std::exp((nn - 2.0) * std::log(c) - 2.0 * (nn - 1.0) * std::log(q));
}

ProbabilityBounds probability_bounds(std::int64_t n, const ModelParams& params,
                                     Metric metric) {
  const double nn = static_cast<double>(n);
  const double expected = nn * first_moment(metric, n, params);
  ProbabilityBounds out{1.0 - expected, std::nullopt};
  if (metric == Metric::Circle) {
    const double second = expected + nn * (nn - 1.0) *
                                         pair_moment_circle_exact(n, params);
    out.upper = second > 0.0 ? 1.0 - expected * (expected / second) : 1.0;
  }
  return out;
}

double pair_moment_interval_quadrature(std::int64_t n,
                                       const ModelParams& params) {
  require_n(n);
  const double p = params.p();
  const double r = params.r();
  if (p == 0.0) return 1.0;
  const double m = static_cast<double>(n - 2);

  const auto overlap = [r](double x, double y) {
    const double lo = std::max(std::max(x, y) - r, 0.0);
    const double hi = std::min(std::min(x, y) + r, 1.0);
    return std::max(0.0, hi - lo);
  };
  const auto inner = [&](double x) {
    const double ax = a_interval(x, r);
    const auto f = [&](double y) {
      const double b = 1.0 - p * ax - p * a_interval(y, r) +
                       p * p * overlap(x, y);
      const double w = std::abs(x - y) <= r ? 1.0 - p : 1.0;
      return w * std::pow(std::clamp(b, 0.0, 1.0), m);
    };
    return quad::integrate(
        f, 0.0, 1.0, {x, x - r, x + r, x - 2 * r, x + 2 * r, r, 1.0 - r},
        1e-11);
  };
  return quad::integrate(inner, 0.0, 1.0,
                         {r, 2 * r, 3 * r, 1.0 - r, 1.0 - 2 * r, 1.0 - 3 * r,
                          0.5},
                         1e-10);
}

MomentReport moments(Metric metric, std::int64_t n, const ModelParams& params,
                     bool interval_quadrature) {
  require_n(n);
  const double nn = static_cast<double>(n);
  const double first = first_moment(metric, n, params);
  MomentReport rep{metric,         n,
                   params,         first,
                   nn * first,     std::nullopt,
                   PairMomentKind::None, std::nullopt,
                   std::nullopt,   1.0 - nn * first,
                   std::nullopt};
  if (metric == Metric::Circle) {
    rep.pair_moment = pair_moment_circle_exact(n, params);
    rep.pair_kind = PairMomentKind::Exact;
    rep.ratio_upper = ratio_upper(n, params);
  } else if (interval_quadrature) {
    rep.pair_moment = pair_moment_interval_quadrature(n, params);
    rep.pair_kind = PairMomentKind::Quadrature;
  }
  if (rep.pair_moment) {
    const double second = rep.expected_isolated + nn * (nn - 1.0) * *rep.pair_moment;
    rep.second_moment_In = second;
    rep.prob_upper =
        second > 0.0
            ? 1.0 - rep.expected_isolated * (rep.expected_isolated / second)
            : 1.0;
  }
  return rep;
}

}  // namespace rig::analytic
