// Monte Carlo estimation of P{I_n = 0}, E[I_n] and E[I_n^2].
//
// Trial t of a run with seed s draws its realization from the stream
// derive_seed(s, tag, t), so results do not depend on how trials are split
// across worker threads. Aggregates are integer sums.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rig/graph.hpp"

namespace rig::mc {

/// How a trial realizes the graph.
///
/// Dense materializes every position and every activation bit (O(n^2)); the
/// same seed gives the same uniforms U_ij for any (r, p), so sweeps over r or
/// p are coupled pathwise.
///
/// Lazy sorts the positions and reveals activation bits only when they can
/// still change some node's isolation status, skipping over inactive pairs
/// with geometric jumps (O(n log n) per trial). Same distribution, different
/// random stream, no coupling across parameters.
enum class Engine { Dense, Lazy };

/// Dense up to n = 500, Lazy above.
Engine auto_engine(std::int64_t n);

struct TrialConfig {
  Metric metric = Metric::Circle;
  std::int64_t n = 2;
  ModelParams params{0.0, 0.0};
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  Engine engine = Engine::Dense;
};

/// Throws std::invalid_argument for n < 2 or trials < 1.
void validate(const TrialConfig& config);

struct SweepRow {
  TrialConfig config;
  std::uint64_t no_isolated_trials = 0;
  double p_hat = 0.0;
  double std_error = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
  double mean_isolated = 0.0;
  double mean_isolated_sq = 0.0;
  std::optional<double> analytic_expected_isolated;
  std::optional<double> prob_lower;  // clamped at 0
  std::optional<double> prob_upper;

  /// Sample standard error of mean_isolated.
  double isolated_std_error() const;
};

/// Isolated-node count of one lazily revealed realization.
IsolationCount lazy_count_isolated(Metric metric, std::int64_t n,
                                   const ModelParams& params,
                                   std::uint64_t seed);

SweepRow estimate(const TrialConfig& config);

enum class Vary { R, P };

/// One row per grid point; every point reuses base.seed.
std::vector<SweepRow> sweep(const TrialConfig& base, Vary vary,
                            std::span<const double> grid);

/// Circle and interval evaluated on the same dense realizations.
struct SharedEstimate {
  SweepRow circle;
  SweepRow interval;
};

SharedEstimate estimate_shared(std::int64_t n, const ModelParams& params,
                               std::int64_t trials, std::uint64_t seed);
std::vector<SharedEstimate> sweep_shared(std::int64_t n,
                                         const ModelParams& base, Vary vary,
                                         std::span<const double> grid,
                                         std::int64_t trials,
                                         std::uint64_t seed);

/// All five isolation counts of one shared realization.
struct SharedCounts {
  std::size_t circle;
  std::size_t interval;
  std::size_t er;
  std::size_t geo_circle;
  std::size_t geo_interval;
};

SharedCounts shared_trial(std::int64_t n, const ModelParams& params,
                          std::uint64_t seed, std::uint64_t trial);

/// Pathwise checks over shared realizations: interval isolates at least as
/// many nodes as circle, and each intersection isolates at least as many as
/// either of its components.
struct CouplingAudit {
  std::int64_t trials = 0;
  std::int64_t metric_violations = 0;
  std::int64_t component_violations = 0;
};

CouplingAudit coupling_audit(std::int64_t n, const ModelParams& params,
                             std::int64_t trials, std::uint64_t seed);

struct ErEquivalenceReport {
  std::int64_t n;
  double p;
  double p_prime;
  std::int64_t trials;
  double p_hat_intersection;  // ER(p) and ER(p') intersected
  double p_hat_direct;        // ER(p p')
  double p_hat_component_a;   // ER(p) alone
  double p_hat_component_b;   // ER(p') alone
  double z;
  bool pass;          // |z| < 4
  bool underpowered;  // fewer than 30 trials per arm
};

/// Two-sample proportion z-test of P{no isolated node} between the
/// intersection of two independent ER graphs and a single ER(p p').
ErEquivalenceReport er_equivalence_test(std::int64_t n, double p,
                                        double p_prime, std::int64_t trials,
                                        std::uint64_t seed);

struct NoCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear interpolation of the first upward crossing of `level` by p_hat,
/// with rows ordered by the varied parameter.
double crossing_point(std::span<const SweepRow> rows, Vary vary, double level);

/// Worker threads used for trials: RIG_THREADS if set, else the hardware
/// concurrency.
unsigned worker_count();

}  // namespace rig::mc
