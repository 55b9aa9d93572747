// Intersection of an Erdos-Renyi graph with a one-dimensional geometric
// random graph: model parameters, realizations and isolated-node counting.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rig {

/// Which one-dimensional domain the nodes live on.
enum class Metric { Interval, Circle };

std::string_view to_string(Metric m);
/// Parses "interval" or "circle"; throws std::invalid_argument otherwise.
Metric parse_metric(std::string_view name);

/// The pair (r, p): transmission range and link-activation probability.
class ModelParams {
 public:
  ModelParams(double r, double p);

  double r() const { return r_; }
  double p() const { return p_; }

  ModelParams with_r(double r) const { return {r, p_}; }
  ModelParams with_p(double p) const { return {r_, p}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double r_;
  double p_;
};

/// Distance between two points of [0,1]. Circle uses the shorter arc.
double distance(Metric metric, double x, double y);

/// One realization: n positions plus the n(n-1)/2 activation bits B_ij for
/// i < j. Nodes are 0-based. When sampled with retained uniforms, the bits are
/// the thresholds U_ij < p and can be re-derived for another p.
class GraphSample {
 public:
  GraphSample(std::vector<double> positions, std::vector<std::uint8_t> bits,
              std::vector<double> uniforms = {});

  std::size_t n() const { return positions_.size(); }
  std::span<const double> positions() const { return positions_; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  bool has_uniforms() const { return !uniforms_.empty(); }

  /// Activation bit of the unordered pair {i, j}; order of i and j is free.
  bool bit(std::size_t i, std::size_t j) const;

  /// Same positions and uniforms, bits re-thresholded at p. Requires
  /// has_uniforms().
  GraphSample with_activation(double p) const;

  static std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
  /// Offset of pair (i, j), i < j, in the upper-triangular bit array.
  static std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
  }

  friend bool operator==(const GraphSample&, const GraphSample&) = default;

 private:
  std::vector<double> positions_;
  std::vector<std::uint8_t> bits_;
  std::vector<double> uniforms_;
};

struct IsolationCount {
  std::size_t count = 0;
  bool has_no_isolated() const { return count == 0; }
};

/// Draws positions i.i.d. uniform on [0,1) and bits i.i.d. Bernoulli(p),
/// deterministically from seed. keep_uniforms retains the U_ij.
GraphSample sample(std::size_t n, double p, std::uint64_t seed,
                   bool keep_uniforms = false);

bool adjacent(Metric metric, const GraphSample& s, const ModelParams& params,
              std::size_t i, std::size_t j);

/// Isolated nodes of the intersection graph.
IsolationCount count_isolated(Metric metric, const GraphSample& s,
                              const ModelParams& params);
/// Isolated nodes of the ER component alone (positions ignored).
IsolationCount count_isolated_er(const GraphSample& s);
/// Isolated nodes of the geometric component alone (bits ignored).
IsolationCount count_isolated_geo(Metric metric, const GraphSample& s,
                                  double r);

/// Bitwise conjunction of two ER realizations; positions come from a.
GraphSample intersect_two_er(const GraphSample& a, const GraphSample& b);

}  // namespace rig
