#include "rig/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rig/analytic.hpp"
#include "rig/montecarlo.hpp"
#include "rig/quadrature.hpp"
#include "rig/rng.hpp"

namespace rig::oracle {

namespace {

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

std::string label(std::string_view what, Metric metric, std::int64_t n,
                  const ModelParams& params) {
  std::ostringstream os;
  os << what << '[' << to_string(metric) << " n=" << n << " r=" << params.r()
     << " p=" << params.p() << ']';
  return os.str();
}

}  // namespace

OracleReport make_report(std::string name, double closed_form,
                         double oracle_value, double tolerance) {
  OracleReport rep;
  rep.name = std::move(name);
  rep.closed_form = closed_form;
  rep.oracle_value = oracle_value;
  rep.abs_err = std::abs(closed_form - oracle_value);
  const double scale = std::max(std::abs(closed_form), std::abs(oracle_value));
  rep.rel_err = scale > 0.0 ? rep.abs_err / scale : 0.0;
  rep.tolerance = tolerance;
  rep.pass = rep.abs_err <= tolerance || rep.rel_err <= tolerance;
  return rep;
}

ClosedForms ClosedForms::library() {
  return {
      [](Metric m, std::int64_t n, const ModelParams& prm) {
        return analytic::first_moment(m, n, prm);
      },
      [](std::int64_t n, const ModelParams& prm) {
        return analytic::pair_moment_circle_exact(n, prm);
      },
      [](std::int64_t n, const ModelParams& prm) {
        return analytic::pair_moment_interval_quadrature(n, prm);
      },
      [](double z, double r) { return analytic::u_tilde_circle(z, r); },
  };
}

double coverage(Metric metric, double x, double r) {
  if (metric == Metric::Circle) return std::min(1.0, 2.0 * r);
  return overlap(x - r, x + r, 0.0, 1.0);
}

double joint_coverage(Metric metric, double x, double y, double r) {
  if (metric == Metric::Interval) {
    return overlap(std::max(x, y) - r, std::min(x, y) + r, 0.0, 1.0);
  }
  if (2.0 * r >= 1.0) return 1.0;
  double total = 0.0;
  for (double shift : {-1.0, 0.0, 1.0}) {
    total += overlap(x - r, x + r, y + shift - r, y + shift + r);
  }
  return total;
}

double first_moment_by_quadrature(Metric metric, std::int64_t n,
                                  const ModelParams& params) {
  const double p = params.p();
  const double r = params.r();
  const double k = static_cast<double>(n - 1);
  const auto f = [&](double x) {
    return std::pow(std::max(0.0, 1.0 - p * coverage(metric, x, r)), k);
  };
  return quad::integrate<31>(f, 0.0, 1.0, {r, 1.0 - r}, 1e-11);
}

namespace {
// Points of pts inside [0, 1], sorted, near-duplicates merged, framed by 0 and 1.
std::vector<double> clip_sorted(std::vector<double> pts) {
  std::vector<double> out{0.0, 1.0};
  for (double h : pts) {
    if (h > 0.0 && h < 1.0) out.push_back(h);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return b - a < 1e-15; }),
            out.end());
  out.back() = 1.0;
  return out;
}
}  // namespace

double pair_moment_by_quadrature(Metric metric, std::int64_t n,
                                 const ModelParams& params, double rel_tol) {
  const double p = params.p();
  const double r = params.r();
  const double m = static_cast<double>(n - 2);
  const auto integrand = [&](double x, double y) {
    const double b = 1.0 - p * coverage(metric, x, r) -
                     p * coverage(metric, y, r) +
                     p * p * joint_coverage(metric, x, y, r);
    const double w = distance(metric, x, y) <= r ? 1.0 - p : 1.0;
    return w * std::pow(std::clamp(b, 0.0, 1.0), m);
  };
  // Kinks in y sit at x + c (mod 1) for these offsets, plus the coverage kinks
  // at r and 1 - r. The outer integrand can kink wherever one of the former
  // meets one of the latter or an endpoint.
  const std::array<double, 5> offsets{0.0, r, 2.0 * r, 1.0 - 2.0 * r, 0.5};
  const std::array<double, 4> anchors{0.0, 1.0, r, 1.0 - r};
  const double inner_tol = std::max(rel_tol * 1e-2, 1e-14);
  const auto inner = [&](double x) {
    const auto f = [&](double y) { return integrand(x, y); };
    std::vector<double> pts{0.0, 1.0, r, 1.0 - r};
    for (double c : offsets) {
      for (double shift : {-1.0, 0.0, 1.0}) {
        pts.push_back(x + c + shift);
        pts.push_back(x - c + shift);
      }
    }
    return quad::integrate_pieces<31>(f, clip_sorted(std::move(pts)),
                                      inner_tol);
  };
  std::vector<double> outer{0.0, 1.0};
  for (double a : anchors) {
    for (double c : offsets) {
      for (double shift : {-1.0, 0.0, 1.0}) {
        outer.push_back(a + c + shift);
        outer.push_back(a - c + shift);
      }
    }
  }
  return quad::integrate_pieces<31>(inner, clip_sorted(std::move(outer)),
                                    rel_tol);
}

OracleReport quad_first_moment(Metric metric, std::int64_t n,
                               const ModelParams& params,
                               const ClosedForms& forms) {
  return make_report(label("first_moment", metric, n, params),
                     forms.first_moment(metric, n, params),
                     first_moment_by_quadrature(metric, n, params), 1e-10);
}

OracleReport quad_pair_moment(Metric metric, std::int64_t n,
                              const ModelParams& params,
                              const ClosedForms& forms) {
  const double closed = metric == Metric::Circle
                            ? forms.pair_moment_circle(n, params)
                            : forms.pair_moment_interval(n, params);
  // The interval closed form is itself a quadrature at 1e-9.
  const double tol = metric == Metric::Circle ? 1e-9 : 5e-9;
  return make_report(label("pair_moment", metric, n, params), closed,
                     pair_moment_by_quadrature(metric, n, params), tol);
}

OracleReport mc_utilde(double z, double r, std::int64_t samples,
                       std::uint64_t seed, const ClosedForms& forms) {
  if (!(z >= 0.0 && z <= 0.5) || !(r > 0.0)) {
    throw std::invalid_argument("mc_utilde needs z in [0,0.5] and r > 0");
  }
  if (samples < 1) throw std::invalid_argument("mc_utilde needs samples >= 1");
  Engine64 eng(derive_seed(seed, 11, 0));
  std::int64_t hits = 0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const double u = uniform01(eng);
    hits += distance(Metric::Circle, u, 0.0) <= r &&
            distance(Metric::Circle, u, z) <= r;
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(samples);
  const double closed = forms.u_tilde_circle(z, r);
  const double se =
      std::sqrt(closed * (1.0 - closed) / static_cast<double>(samples));
  std::ostringstream os;
  os << "u_tilde_mc[z=" << z << " r=" << r << " samples=" << samples << ']';
  auto rep = make_report(os.str(), closed, freq, 5.0 * se);
  rep.pass = rep.abs_err <= rep.tolerance;
  return rep;
}

ErEnumeration enumerate_small_er(std::int64_t n, double p) {
  if (n < 2 || n > 4) throw std::invalid_argument("enumeration supports n in {2,3,4}");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const auto m = static_cast<int>(pairs.size());
  ErEnumeration out{0.0, 0.0};
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    double weight = 1.0;
    unsigned linked = 0;
    for (int e = 0; e < m; ++e) {
      if (mask & (1u << e)) {
        weight *= p;
        linked |= (1u << pairs[e].first) | (1u << pairs[e].second);
      } else {
        weight *= 1.0 - p;
      }
    }
    const int isolated = static_cast<int>(n) - std::popcount(linked);
    out.expected_isolated += weight * isolated;
    if (isolated == 0) out.prob_no_isolated += weight;
  }
  return out;
}

std::vector<OracleReport> exhaustive_small_er(std::int64_t n, double p,
                                              std::int64_t trials,
                                              std::uint64_t seed) {
  const auto exact = enumerate_small_er(n, p);
  const double nn = static_cast<double>(n);
  std::vector<OracleReport> out;
  std::ostringstream tag;
  tag << "[n=" << n << " p=" << p << ']';
  out.push_back(make_report("er_expected_isolated" + tag.str(),
                            nn * std::pow(1.0 - p, nn - 1.0),
                            exact.expected_isolated, 1e-12));

  // An interval graph with r >= 1 is complete, so the intersection is ER(p).
  mc::TrialConfig cfg{Metric::Interval, n, ModelParams(1.0, p), trials, seed,
                      mc::Engine::Dense};
  const auto row = mc::estimate(cfg);
  const double q = exact.prob_no_isolated;
  const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
  auto mc_rep = make_report("er_prob_no_isolated_mc" + tag.str(), q,
                            row.p_hat, 5.0 * se);
  mc_rep.pass = mc_rep.abs_err <= mc_rep.tolerance;
  out.push_back(mc_rep);
  return out;
}

std::vector<OracleReport> run_suite(const SuiteOptions& options,
                                    const ClosedForms& forms) {
  std::vector<OracleReport> out;
  const std::vector<double> rs =
      options.full ? std::vector<double>{0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5,
                                         0.7, 1.0, 1.5}
                   : std::vector<double>{0.05, 0.2, 0.4, 0.7, 1.5};
  const std::vector<double> ps =
      options.full ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9, 1.0}
                   : std::vector<double>{0.1, 0.5, 1.0};
  const std::vector<std::int64_t> ns =
      options.full ? std::vector<std::int64_t>{2, 3, 10, 100, 1000}
                   : std::vector<std::int64_t>{2, 10, 100};

  for (Metric metric : {Metric::Circle, Metric::Interval}) {
    for (std::int64_t n : ns) {
      for (double r : rs) {
        for (double p : ps) {
          out.push_back(quad_first_moment(metric, n, ModelParams(r, p), forms));
        }
      }
    }
  }

  const std::vector<double> pair_rs =
      options.full ? rs : std::vector<double>{0.1, 0.3, 0.6};
  const std::vector<std::int64_t> pair_ns =
      options.full ? ns : std::vector<std::int64_t>{2, 10, 100};
  for (std::int64_t n : pair_ns) {
    for (double r : pair_rs) {
      for (double p : {0.3, 0.9}) {
        out.push_back(quad_pair_moment(Metric::Circle, n, ModelParams(r, p), forms));
      }
    }
  }
  if (options.full) {
    for (std::int64_t n : {2, 10, 100}) {
      for (double r : {0.1, 0.3, 0.6, 1.2}) {
        for (double p : {0.3, 0.9}) {
          out.push_back(
              quad_pair_moment(Metric::Interval, n, ModelParams(r, p), forms));
        }
      }
    }
  } else {
    out.push_back(make_report("pair_moment_interval_hand[n=2 r=0.25 p=1]",
                              forms.pair_moment_interval(2, ModelParams(0.25, 1.0)),
                              1.0 - (2.0 * 0.25 - 0.25 * 0.25), 1e-9));
  }

  const std::int64_t samples = options.full ? 1000000 : 200000;
  std::uint64_t stream = 0;
  for (auto [z, r] : {std::pair{0.05, 0.1}, {0.3, 0.1}, {0.5, 0.3},
                      {0.1, 0.3}, {0.25, 0.6}}) {
    out.push_back(mc_utilde(z, r, samples, derive_seed(options.seed, 21, stream++),
                            forms));
  }

  const std::int64_t er_trials = options.full ? 100000 : 20000;
  for (std::int64_t n : {2, 3, 4}) {
    for (double p : {0.2, 0.5}) {
      for (auto& rep : exhaustive_small_er(n, p, er_trials,
                                           derive_seed(options.seed, 22, stream++))) {
        out.push_back(std::move(rep));
      }
    }
  }
  return out;
}

}  // namespace rig::oracle
