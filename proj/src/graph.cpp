#include "rig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rig/rng.hpp"

namespace rig {

namespace {

inline bool within_range(Metric metric, double x, double y, double r) {
  const double d = std::abs(x - y);
  if (metric == Metric::Interval) return d <= r;
  return d <= r || 1.0 - d <= r;
}

void require_isolation_query(const GraphSample& s) {
  if (s.n() < 2) {
    throw std::invalid_argument("isolation queries need at least two nodes");
  }
}

}  // namespace

std::string_view to_string(Metric m) {
  return m == Metric::Circle ? "circle" : "interval";
}

Metric parse_metric(std::string_view name) {
  if (name == "circle") return Metric::Circle;
  if (name == "interval") return Metric::Interval;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

ModelParams::ModelParams(double r, double p) : r_(r), p_(p) {
  if (!(r >= 0.0) || std::isinf(r)) {
    throw std::invalid_argument("range r must be finite and nonnegative");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("activation probability p must lie in [0,1]");
  }
}

double distance(Metric metric, double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::invalid_argument("distance arguments must lie in [0,1]");
  }
  const double d = std::abs(x - y);
  return metric == Metric::Interval ? d : std::min(d, 1.0 - d);
}

GraphSample::GraphSample(std::vector<double> positions,
                         std::vector<std::uint8_t> bits,
                         std::vector<double> uniforms)
    : positions_(std::move(positions)),
      bits_(std::move(bits)),
      uniforms_(std::move(uniforms)) {
  if (positions_.empty()) {
    throw std::invalid_argument("a sample needs at least one node");
  }
  for (double x : positions_) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("positions must lie in [0,1]");
    }
  }
  const std::size_t m = pair_count(positions_.size());
  if (bits_.size() != m) {
    throw std::invalid_argument("bit array must hold n(n-1)/2 entries");
  }
  if (!uniforms_.empty() && uniforms_.size() != m) {
    throw std::invalid_argument("uniform array must hold n(n-1)/2 entries");
  }
}

bool GraphSample::bit(std::size_t i, std::size_t j) const {
  if (i == j || i >= n() || j >= n()) {
    throw std::out_of_range("bit index pair must be distinct nodes < n");
  }
  if (i > j) std::swap(i, j);
  return bits_[pair_index(n(), i, j)] != 0;
}

GraphSample GraphSample::with_activation(double p) const {
  if (!has_uniforms()) {
    throw std::logic_error("sample was drawn without retained uniforms");
  }
  std::vector<std::uint8_t> bits(uniforms_.size());
  std::transform(uniforms_.begin(), uniforms_.end(), bits.begin(),
                 [p](double u) { return static_cast<std::uint8_t>(u < p); });
  return GraphSample(positions_, std::move(bits), uniforms_);
}

GraphSample sample(std::size_t n, double p, std::uint64_t seed,
                   bool keep_uniforms) {
  if (n == 0) throw std::invalid_argument("sample needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("activation probability p must lie in [0,1]");
  }
  Engine64 eng(seed);
  std::vector<double> positions(n);
  for (double& x : positions) x = uniform01(eng);

  const std::size_t m = GraphSample::pair_count(n);
  std::vector<std::uint8_t> bits(m);
  std::vector<double> uniforms;
  if (keep_uniforms) uniforms.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double u = uniform01(eng);
    bits[k] = static_cast<std::uint8_t>(u < p);
    if (keep_uniforms) uniforms[k] = u;
  }
  return GraphSample(std::move(positions), std::move(bits),
                     std::move(uniforms));
}

bool adjacent(Metric metric, const GraphSample& s, const ModelParams& params,
              std::size_t i, std::size_t j) {
  if (!s.bit(i, j)) return false;
  return distance(metric, s.positions()[i], s.positions()[j]) <= params.r();
}

IsolationCount count_isolated(Metric metric, const GraphSample& s,
                              const ModelParams& params) {
  require_isolation_query(s);
  const std::size_t n = s.n();
  const auto pos = s.positions();
  const auto bits = s.bits();
  const double r = params.r();
  std::vector<std::uint8_t> linked(n, 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (bits[k] && within_range(metric, pos[i], pos[j], r)) {
        linked[i] = linked[j] = 1;
      }
    }
  }
  return {static_cast<std::size_t>(std::count(linked.begin(), linked.end(), 0))};
}

IsolationCount count_isolated_er(const GraphSample& s) {
  require_isolation_query(s);
  const std::size_t n = s.n();
  const auto bits = s.bits();
  std::vector<std::uint8_t> linked(n, 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (bits[k]) linked[i] = linked[j] = 1;
    }
  }
  return {static_cast<std::size_t>(std::count(linked.begin(), linked.end(), 0))};
}

IsolationCount count_isolated_geo(Metric metric, const GraphSample& s,
                                  double r) {
  require_isolation_query(s);
  const std::size_t n = s.n();
  const auto pos = s.positions();
  std::vector<std::uint8_t> linked(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (within_range(metric, pos[i], pos[j], r)) linked[i] = linked[j] = 1;
    }
  }
  return {static_cast<std::size_t>(std::count(linked.begin(), linked.end(), 0))};
}

GraphSample intersect_two_er(const GraphSample& a, const GraphSample& b) {
  if (a.n() != b.n()) {
    throw std::invalid_argument("ER intersection needs equal node counts");
  }
  const auto ba = a.bits();
  const auto bb = b.bits();
  std::vector<std::uint8_t> bits(ba.size());
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = ba[k] & bb[k];
  return GraphSample(std::vector<double>(a.positions().begin(),
                                         a.positions().end()),
                     std::move(bits));
}

}  // namespace rig
