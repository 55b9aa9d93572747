#include "rig/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "rig/analytic.hpp"
#include "rig/rng.hpp"

namespace rig::mc {

namespace {

// Stream families for derive_seed.
constexpr std::uint64_t kDenseStream = 1;
constexpr std::uint64_t kLazyStream = 2;
constexpr std::uint64_t kErArmA = 3;
constexpr std::uint64_t kErArmB = 4;
constexpr std::uint64_t kErDirect = 5;

struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t no_isolated = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;

  void add(std::size_t count) {
    ++trials;
    no_isolated += count == 0;
    sum += count;
    sum_sq += static_cast<std::uint64_t>(count) * count;
  }
  Tally& operator+=(const Tally& o) {
    trials += o.trials;
    no_isolated += o.no_isolated;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
};

// Runs body(t, acc) for t in [0, trials) over contiguous blocks, one block
// per worker, and sums the per-worker accumulators.
template <class Acc, class Body>
Acc parallel_trials(std::int64_t trials, Body body) {
  const auto workers = static_cast<std::int64_t>(
      std::min<std::int64_t>(worker_count(), std::max<std::int64_t>(trials, 1)));
  std::vector<Acc> partial(static_cast<std::size_t>(workers));
  const auto run_block = [&](std::int64_t w) {
    const std::int64_t lo = trials * w / workers;
    const std::int64_t hi = trials * (w + 1) / workers;
    Acc& acc = partial[static_cast<std::size_t>(w)];
    for (std::int64_t t = lo; t < hi; ++t) body(t, acc);
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }
  Acc total{};
  for (const Acc& a : partial) total += a;
  return total;
}

SweepRow make_row(const TrialConfig& config, const Tally& tally) {
  SweepRow row;
  row.config = config;
  const double t = static_cast<double>(tally.trials);
  row.no_isolated_trials = tally.no_isolated;
  row.p_hat = static_cast<double>(tally.no_isolated) / t;
  row.std_error = std::sqrt(row.p_hat * (1.0 - row.p_hat) / t);
  row.mean_isolated = static_cast<double>(tally.sum) / t;
  row.mean_isolated_sq = static_cast<double>(tally.sum_sq) / t;

  const auto bounds =
      analytic::probability_bounds(config.n, config.params, config.metric);
  row.analytic_expected_isolated = 1.0 - bounds.lower_raw;
  row.prob_lower = bounds.lower();
  row.prob_upper = bounds.upper;
  return row;
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {
    for (std::size_t i = 1; i <= n; ++i) tree_[i] = i & (~i + 1);
  }

  // Sum over [0, i).
  std::size_t prefix(std::size_t i) const {
    std::size_t s = 0;
    for (; i > 0; i &= i - 1) s += tree_[i];
    return s;
  }
  std::size_t range(std::size_t lo, std::size_t hi) const {
    return lo >= hi ? 0 : prefix(hi) - prefix(lo);
  }
  void remove(std::size_t idx) {
    for (std::size_t i = idx + 1; i < tree_.size(); i += i & (~i + 1)) --tree_[i];
  }
  // Smallest index whose prefix sum (inclusive) reaches k >= 1.
  std::size_t find_kth(std::size_t k) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] < k) {
        pos += step;
        k -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::size_t> tree_;
};

}  // namespace

Engine auto_engine(std::int64_t n) {
  return n <= 500 ? Engine::Dense : Engine::Lazy;
}

void validate(const TrialConfig& config) {
  if (config.n < 2) throw std::invalid_argument("trial config needs n >= 2");
  if (config.trials < 1) throw std::invalid_argument("trial config needs trials >= 1");
}

double SweepRow::isolated_std_error() const {
  const double t = static_cast<double>(config.trials);
  if (config.trials < 2) return 0.0;
  const double var =
      std::max(0.0, (mean_isolated_sq - mean_isolated * mean_isolated) * t /
                        (t - 1.0));
  return std::sqrt(var / t);
}

IsolationCount lazy_count_isolated(Metric metric, std::int64_t n_signed,
                                   const ModelParams& params,
                                   std::uint64_t seed) {
  if (n_signed < 2) throw std::invalid_argument("isolation queries need n >= 2");
  const auto n = static_cast<std::size_t>(n_signed);
  const double p = params.p();
  const double r = params.r();
  if (p == 0.0) return {n};

  Engine64 eng(seed);
  std::vector<double> pos(n);
  for (double& x : pos) x = uniform01(eng);
  std::sort(pos.begin(), pos.end());

  const bool certain = p >= 1.0;
  const double log1m_p = certain ? 0.0 : std::log1p(-p);
  const auto skip = [&]() -> std::uint64_t {
    return certain ? 0 : geometric_skip(eng, log1m_p);
  };

  // A node is "uncovered" while no active edge to it has been revealed. When
  // node i is processed, every bit between i and an earlier node has been
  // settled, so only pairs (i, j > i) remain. Bits towards covered j matter
  // only for i's own status and are drawn as a single "any active" event.
  Fenwick uncovered(n);
  std::vector<std::uint8_t> covered(n, 0);
  std::vector<std::size_t> picked;
  std::size_t fwd_end = 0;
  std::size_t wrap_begin = 0;
  std::size_t isolated = 0;

  for (std::size_t i = 0; i < n; ++i) {
    // Candidates of i among j > i: [i+1, fwd_end) within d <= r, and on the
    // circle [wrap_begin, n) where the arc through 0 is short enough.
    fwd_end = std::max(fwd_end, i + 1);
    while (fwd_end < n && pos[fwd_end] - pos[i] <= r) ++fwd_end;
    if (metric == Metric::Circle) {
      wrap_begin = std::max(wrap_begin, fwd_end);
      while (wrap_begin < n && !(1.0 - (pos[wrap_begin] - pos[i]) <= r)) {
        ++wrap_begin;
      }
    } else {
      wrap_begin = n;
    }

    const std::size_t before_fwd = uncovered.prefix(i + 1);
    const std::size_t before_wrap = uncovered.prefix(wrap_begin);
    const std::size_t open_fwd = uncovered.prefix(fwd_end) - before_fwd;
    const std::size_t open = open_fwd + (uncovered.prefix(n) - before_wrap);
    const std::size_t total = (fwd_end - i - 1) + (n - wrap_begin);

    picked.clear();
    if (open > 0) {
      std::uint64_t k = skip();
      while (k < open) {
        picked.push_back(k < open_fwd
                             ? uncovered.find_kth(before_fwd + k + 1)
                             : uncovered.find_kth(before_wrap + (k - open_fwd) + 1));
        const std::uint64_t s = skip();
        if (s >= open) break;
        k += s + 1;
      }
    }
    for (std::size_t j : picked) {
      covered[j] = 1;
      uncovered.remove(j);
    }
    if (!picked.empty()) covered[i] = 1;

    const std::size_t settled = total - open;
    if (!covered[i] && settled > 0) {
      const double any_active =
          certain ? 1.0 : -std::expm1(static_cast<double>(settled) * log1m_p);
      if (uniform01(eng) < any_active) covered[i] = 1;
    }
    if (!covered[i]) ++isolated;
  }
  return {isolated};
}

SweepRow estimate(const TrialConfig& config) {
  validate(config);
  const auto n = static_cast<std::size_t>(config.n);
  Tally tally;
  if (config.engine == Engine::Dense) {
    tally = parallel_trials<Tally>(config.trials, [&](std::int64_t t, Tally& acc) {
      const auto s = sample(n, config.params.p(),
                            derive_seed(config.seed, kDenseStream,
                                        static_cast<std::uint64_t>(t)));
      acc.add(count_isolated(config.metric, s, config.params).count);
    });
  } else {
    tally = parallel_trials<Tally>(config.trials, [&](std::int64_t t, Tally& acc) {
      acc.add(lazy_count_isolated(
                  config.metric, config.n, config.params,
                  derive_seed(config.seed, kLazyStream,
                              static_cast<std::uint64_t>(t)))
                  .count);
    });
  }
  return make_row(config, tally);
}

namespace {

ModelParams vary_params(const ModelParams& base, Vary vary, double v) {
  return vary == Vary::R ? base.with_r(v) : base.with_p(v);
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
}

struct PairTally {
  Tally circle;
  Tally interval;
  PairTally& operator+=(const PairTally& o) {
    circle += o.circle;
    interval += o.interval;
    return *this;
  }
};

}  // namespace

std::vector<SweepRow> sweep(const TrialConfig& base, Vary vary,
                            std::span<const double> grid) {
  require_grid(grid);
  std::vector<ModelParams> points;
  for (double v : grid) points.push_back(vary_params(base.params, vary, v));
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& params : points) {
    TrialConfig cfg = base;
    cfg.params = params;
    rows.push_back(estimate(cfg));
  }
  return rows;
}

SharedEstimate estimate_shared(std::int64_t n, const ModelParams& params,
                               std::int64_t trials, std::uint64_t seed) {
  TrialConfig circle{Metric::Circle, n, params, trials, seed, Engine::Dense};
  TrialConfig interval = circle;
  interval.metric = Metric::Interval;
  validate(circle);
  const auto nn = static_cast<std::size_t>(n);
  const auto tally =
      parallel_trials<PairTally>(trials, [&](std::int64_t t, PairTally& acc) {
        const auto s = sample(nn, params.p(),
                              derive_seed(seed, kDenseStream,
                                          static_cast<std::uint64_t>(t)));
        acc.circle.add(count_isolated(Metric::Circle, s, params).count);
        acc.interval.add(count_isolated(Metric::Interval, s, params).count);
      });
  return {make_row(circle, tally.circle), make_row(interval, tally.interval)};
}

std::vector<SharedEstimate> sweep_shared(std::int64_t n,
                                         const ModelParams& base, Vary vary,
                                         std::span<const double> grid,
                                         std::int64_t trials,
                                         std::uint64_t seed) {
  require_grid(grid);
  std::vector<ModelParams> points;
  for (double v : grid) points.push_back(vary_params(base, vary, v));
  std::vector<SharedEstimate> out;
  out.reserve(points.size());
  for (const auto& params : points) {
    out.push_back(estimate_shared(n, params, trials, seed));
  }
  return out;
}

SharedCounts shared_trial(std::int64_t n, const ModelParams& params,
                          std::uint64_t seed, std::uint64_t trial) {
  const auto s = sample(static_cast<std::size_t>(n), params.p(),
                        derive_seed(seed, kDenseStream, trial));
  return {count_isolated(Metric::Circle, s, params).count,
          count_isolated(Metric::Interval, s, params).count,
          count_isolated_er(s).count,
          count_isolated_geo(Metric::Circle, s, params.r()).count,
          count_isolated_geo(Metric::Interval, s, params.r()).count};
}

CouplingAudit coupling_audit(std::int64_t n, const ModelParams& params,
                             std::int64_t trials, std::uint64_t seed) {
  if (n < 2 || trials < 1) throw std::invalid_argument("coupling audit needs n >= 2 and trials >= 1");
  struct Acc {
    std::int64_t metric = 0;
    std::int64_t component = 0;
    Acc& operator+=(const Acc& o) {
      metric += o.metric;
      component += o.component;
      return *this;
    }
  };
  const auto acc = parallel_trials<Acc>(trials, [&](std::int64_t t, Acc& a) {
    const auto c = shared_trial(n, params, seed, static_cast<std::uint64_t>(t));
    a.metric += c.interval < c.circle;
    a.component += (c.circle < c.er) + (c.circle < c.geo_circle) +
                   (c.interval < c.er) + (c.interval < c.geo_interval);
  });
  return {trials, acc.metric, acc.component};
}

ErEquivalenceReport er_equivalence_test(std::int64_t n, double p,
                                        double p_prime, std::int64_t trials,
                                        std::uint64_t seed) {
  if (n < 2 || trials < 1) throw std::invalid_argument("ER test needs n >= 2 and trials >= 1");
  // ModelParams validates both probabilities.
  const ModelParams check_a(0.0, p);
  const ModelParams check_b(0.0, p_prime);
  const auto nn = static_cast<std::size_t>(n);
  struct Acc {
    std::uint64_t inter = 0, direct = 0, comp_a = 0, comp_b = 0;
    Acc& operator+=(const Acc& o) {
      inter += o.inter;
      direct += o.direct;
      comp_a += o.comp_a;
      comp_b += o.comp_b;
      return *this;
    }
  };
  const auto acc = parallel_trials<Acc>(trials, [&](std::int64_t t, Acc& a) {
    const auto ti = static_cast<std::uint64_t>(t);
    const auto ga = sample(nn, p, derive_seed(seed, kErArmA, ti));
    const auto gb = sample(nn, p_prime, derive_seed(seed, kErArmB, ti));
    const auto gd = sample(nn, p * p_prime, derive_seed(seed, kErDirect, ti));
    a.inter += count_isolated_er(intersect_two_er(ga, gb)).has_no_isolated();
    a.direct += count_isolated_er(gd).has_no_isolated();
    a.comp_a += count_isolated_er(ga).has_no_isolated();
    a.comp_b += count_isolated_er(gb).has_no_isolated();
  });
  const double t = static_cast<double>(trials);
  ErEquivalenceReport rep{};
  rep.n = n;
  rep.p = p;
  rep.p_prime = p_prime;
  rep.trials = trials;
  rep.p_hat_intersection = static_cast<double>(acc.inter) / t;
  rep.p_hat_direct = static_cast<double>(acc.direct) / t;
  rep.p_hat_component_a = static_cast<double>(acc.comp_a) / t;
  rep.p_hat_component_b = static_cast<double>(acc.comp_b) / t;
  const double pooled = 0.5 * (rep.p_hat_intersection + rep.p_hat_direct);
  const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / t);
  const double diff = rep.p_hat_intersection - rep.p_hat_direct;
  rep.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
  rep.pass = std::abs(rep.z) < 4.0;
  rep.underpowered = trials < 30;
  return rep;
}

double crossing_point(std::span<const SweepRow> rows, Vary vary, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("crossing level must lie in (0,1)");
  const auto x_of = [vary](const SweepRow& row) {
    return vary == Vary::R ? row.config.params.r() : row.config.params.p();
  };
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double y0 = rows[k - 1].p_hat;
    const double y1 = rows[k].p_hat;
    if (y0 < level && y1 >= level) {
      const double x0 = x_of(rows[k - 1]);
      const double x1 = x_of(rows[k]);
      return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
    }
  }
  throw NoCrossing("p_hat never crosses " + std::to_string(level) + " upwards");
}

unsigned worker_count() {
  if (const char* env = std::getenv("RIG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rig::mc
