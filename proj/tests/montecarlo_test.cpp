#include "rig/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "rig/analytic.hpp"

namespace rig::mc {
namespace {

TrialConfig config(Metric m, std::int64_t n, double r, double p,
                   std::int64_t trials, std::uint64_t seed,
                   Engine engine = Engine::Dense) {
  return TrialConfig{m, n, ModelParams(r, p), trials, seed, engine};
}

TEST(Validate, RejectsBadConfigs) {
  EXPECT_THROW(estimate(config(Metric::Circle, 1, 0.1, 0.5, 10, 1)),
               std::invalid_argument);
  EXPECT_THROW(estimate(config(Metric::Circle, 10, 0.1, 0.5, 0, 1)),
               std::invalid_argument);
}

TEST(Estimate, EmptyGraph) {
  for (Engine e : {Engine::Dense, Engine::Lazy}) {
    const auto row = estimate(config(Metric::Interval, 25, 0.3, 0.0, 50, 4, e));
    EXPECT_EQ(row.p_hat, 0.0);
    EXPECT_EQ(row.mean_isolated, 25.0);
    EXPECT_EQ(row.mean_isolated_sq, 625.0);
    EXPECT_EQ(row.std_error, 0.0);
  }
}

TEST(Estimate, CompleteGraph) {
  for (Engine e : {Engine::Dense, Engine::Lazy}) {
    const auto row = estimate(config(Metric::Circle, 30, 0.5, 1.0, 50, 4, e));
    EXPECT_EQ(row.p_hat, 1.0);
    EXPECT_EQ(row.mean_isolated, 0.0);
  }
}

TEST(Estimate, AnalyticColumns) {
  const auto circle = estimate(config(Metric::Circle, 40, 0.1, 0.5, 5, 1));
  ASSERT_TRUE(circle.analytic_expected_isolated && circle.prob_lower && circle.prob_upper);
  EXPECT_DOUBLE_EQ(*circle.analytic_expected_isolated,
                   40.0 * analytic::first_moment_circle(40, ModelParams(0.1, 0.5)));
  EXPECT_GE(*circle.prob_lower, 0.0);
  const auto interval = estimate(config(Metric::Interval, 40, 0.1, 0.5, 5, 1));
  EXPECT_TRUE(interval.analytic_expected_isolated.has_value());
  EXPECT_FALSE(interval.prob_upper.has_value());
}

TEST(Estimate, CircleMeanMatchesFirstMoment) {
  const auto row = estimate(config(Metric::Circle, 100, 0.1, 0.230259, 10000, 2024));
  const double se = row.isolated_std_error();
  ASSERT_GT(se, 0.0);
  EXPECT_NEAR(row.mean_isolated, 0.9396248515205997, 4.0 * se);
  EXPECT_NEAR(row.std_error, std::sqrt(row.p_hat * (1 - row.p_hat) / 10000.0), 1e-15);
}

TEST(Estimate, ReproducibleAcrossThreadCounts) {
  const auto cfg = config(Metric::Interval, 60, 0.08, 0.4, 300, 77);
  const auto a = estimate(cfg);
  const char* old = std::getenv("RIG_THREADS");
  const std::string saved = old ? old : "";
  ::setenv("RIG_THREADS", "3", 1);
  const auto b = estimate(cfg);
  if (old) {
    ::setenv("RIG_THREADS", saved.c_str(), 1);
  } else {
    ::unsetenv("RIG_THREADS");
  }
  EXPECT_EQ(a.no_isolated_trials, b.no_isolated_trials);
  EXPECT_EQ(a.mean_isolated, b.mean_isolated);
  EXPECT_EQ(a.mean_isolated_sq, b.mean_isolated_sq);
  EXPECT_NE(estimate(config(Metric::Interval, 60, 0.08, 0.4, 300, 78)).mean_isolated,
            a.mean_isolated);
}

TEST(Lazy, SmallCasesExact) {
  // n = 2: isolated pair iff not both close and active.
  const auto both = estimate(config(Metric::Circle, 2, 0.5, 0.3, 20000, 5, Engine::Lazy));
  const double se = std::sqrt(0.3 * 0.7 / 20000.0);
  EXPECT_NEAR(both.p_hat, 0.3, 4.0 * se);
  EXPECT_EQ(lazy_count_isolated(Metric::Interval, 5, ModelParams(0.0, 1.0), 1).count, 5u);
  EXPECT_THROW(lazy_count_isolated(Metric::Interval, 1, ModelParams(0.1, 1.0), 1),
               std::invalid_argument);
}

TEST(Lazy, AgreesWithAnalyticAndDense) {
  struct Case { Metric m; std::int64_t n; double r, p; };
  for (const auto& c : {Case{Metric::Circle, 50, 0.1, 0.4},
                        Case{Metric::Interval, 50, 0.1, 0.4},
                        Case{Metric::Circle, 300, 0.3, 0.03},
                        Case{Metric::Interval, 300, 0.6, 0.02},
                        Case{Metric::Circle, 5000, 0.01, 0.15},
                        Case{Metric::Interval, 5000, 0.01, 0.15}}) {
    const auto lazy = estimate(config(c.m, c.n, c.r, c.p, 4000, 99, Engine::Lazy));
    const double expected = static_cast<double>(c.n) *
                            analytic::first_moment(c.m, c.n, ModelParams(c.r, c.p));
    EXPECT_NEAR(lazy.mean_isolated, expected, 4.0 * lazy.isolated_std_error() + 1e-12)
        << to_string(c.m) << " n=" << c.n;
    if (c.n <= 300) {
      const auto dense = estimate(config(c.m, c.n, c.r, c.p, 4000, 99, Engine::Dense));
      const double se = std::hypot(lazy.std_error, dense.std_error);
      EXPECT_NEAR(lazy.p_hat, dense.p_hat, 4.0 * se + 1e-12);
    }
  }
}

TEST(Sweep, SinglePointEqualsEstimate) {
  const auto base = config(Metric::Circle, 40, 0.1, 0.3, 200, 8);
  const std::vector<double> grid{0.12};
  const auto rows = sweep(base, Vary::R, grid);
  ASSERT_EQ(rows.size(), 1u);
  auto cfg = base;
  cfg.params = ModelParams(0.12, 0.3);
  const auto single = estimate(cfg);
  EXPECT_EQ(rows[0].no_isolated_trials, single.no_isolated_trials);
  EXPECT_EQ(rows[0].mean_isolated_sq, single.mean_isolated_sq);
  EXPECT_THROW(sweep(base, Vary::R, std::vector<double>{}), std::invalid_argument);
}

TEST(Sweep, CoupledMonotoneExactly) {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(0.02 + 0.01 * k);
  for (Metric m : {Metric::Circle, Metric::Interval}) {
    const auto rows = sweep(config(m, 80, 0.0, 0.3, 200, 13), Vary::R, grid);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      EXPECT_GE(rows[k].no_isolated_trials, rows[k - 1].no_isolated_trials);
      EXPECT_LE(rows[k].mean_isolated, rows[k - 1].mean_isolated);
    }
  }
  std::vector<double> pgrid;
  for (int k = 0; k <= 20; ++k) pgrid.push_back(0.05 * k);
  const auto rows = sweep(config(Metric::Circle, 80, 0.1, 0.0, 200, 13), Vary::P, pgrid);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_GE(rows[k].no_isolated_trials, rows[k - 1].no_isolated_trials);
  }
}

TEST(Shared, MatchesSeparateDenseRuns) {
  const auto shared = estimate_shared(50, ModelParams(0.1, 0.4), 300, 21);
  const auto circle = estimate(config(Metric::Circle, 50, 0.1, 0.4, 300, 21));
  const auto interval = estimate(config(Metric::Interval, 50, 0.1, 0.4, 300, 21));
  EXPECT_EQ(shared.circle.no_isolated_trials, circle.no_isolated_trials);
  EXPECT_EQ(shared.interval.mean_isolated, interval.mean_isolated);
  EXPECT_GE(shared.circle.no_isolated_trials, shared.interval.no_isolated_trials);
}

TEST(Coupling, NoViolations) {
  const auto audit = coupling_audit(60, ModelParams(0.08, 0.3), 200, 3);
  EXPECT_EQ(audit.trials, 200);
  EXPECT_EQ(audit.metric_violations, 0);
  EXPECT_EQ(audit.component_violations, 0);
}

TEST(ErEquivalence, AllTrueArmIsIdentical) {
  const auto rep = er_equivalence_test(50, 1.0, 0.1, 2000, 17);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(std::abs(rep.z), 4.0);
  EXPECT_EQ(rep.p_hat_component_a, 1.0);
  EXPECT_FALSE(rep.underpowered);
}

TEST(ErEquivalence, SingleTrialIsUnderpowered) {
  EXPECT_TRUE(er_equivalence_test(20, 0.5, 0.5, 1, 1).underpowered);
  EXPECT_THROW(er_equivalence_test(20, 1.5, 0.5, 10, 1), std::invalid_argument);
}

TEST(ErEquivalence, IntersectionParadox) {
  const double p = std::sqrt(std::log(100.0) / 200.0);
  const auto rep = er_equivalence_test(100, p, p, 1000, 23);
  EXPECT_LT(rep.p_hat_intersection, 0.1);
  EXPECT_LT(rep.p_hat_direct, 0.1);
  EXPECT_GT(rep.p_hat_component_a, 0.9);
  EXPECT_GT(rep.p_hat_component_b, 0.9);
}

SweepRow row_at(double r, double p_hat) {
  SweepRow row;
  row.config.params = ModelParams(r, 0.25);
  row.p_hat = p_hat;
  return row;
}

TEST(CrossingPoint, Examples) {
  const std::vector<SweepRow> rows{row_at(0.08, 0.1), row_at(0.10, 0.9)};
  EXPECT_NEAR(crossing_point(rows, Vary::R, 0.5), 0.09, 1e-15);

  const std::vector<SweepRow> flat{row_at(0.08, 0.1), row_at(0.10, 0.2)};
  EXPECT_THROW(crossing_point(flat, Vary::R, 0.5), NoCrossing);
  EXPECT_THROW(crossing_point(rows, Vary::R, 1.0), std::invalid_argument);

  // First upward crossing wins; a later dip and recross is ignored.
  const std::vector<SweepRow> wiggly{row_at(0.1, 0.0), row_at(0.2, 0.6),
                                     row_at(0.3, 0.4), row_at(0.4, 1.0)};
  EXPECT_NEAR(crossing_point(wiggly, Vary::R, 0.5), 0.1 + 0.1 * 5.0 / 6.0, 1e-15);
}

TEST(WorkerCount, HonoursEnvironment) {
  ::setenv("RIG_THREADS", "2", 1);
  EXPECT_EQ(worker_count(), 2u);
  ::unsetenv("RIG_THREADS");
  EXPECT_GE(worker_count(), 1u);
}

}  // namespace
}  // namespace rig::mc
