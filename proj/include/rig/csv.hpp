// Sweep results as CSV.
//
// Layout: '#'-prefixed manifest lines, one header line, then one data row per
// (metric, grid point). Columns:
//
//   metric,n,r,p,trials,seed,p_hat,stderr,mean_isolated,mean_isolated_sq,
//   analytic_E_I,prob_lower,prob_upper
//
// Reals carry 17 significant digits; a missing value is an empty cell. Lines
// end in '\n'.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rig/montecarlo.hpp"

namespace rig::csv {

inline constexpr std::array<std::string_view, 13> kColumns = {
    "metric",        "n",          "r",          "p",
    "trials",        "seed",       "p_hat",      "stderr",
    "mean_isolated", "mean_isolated_sq", "analytic_E_I", "prob_lower",
    "prob_upper"};

struct RunManifest {
  std::string command_line;
  std::string version;
  std::uint64_t seed = 0;
  std::string timestamp;  // UTC, ISO 8601
  std::string output_path;
};

/// v with 17 significant digits (printf %.17g style).
std::string format_real(double v);

void write_manifest(std::ostream& os, const RunManifest& manifest);
void write_header(std::ostream& os);
void write_row(std::ostream& os, const mc::SweepRow& row);

/// One parsed data row.
struct Record {
  Metric metric;
  std::int64_t n;
  double r;
  double p;
  std::int64_t trials;
  std::uint64_t seed;
  double p_hat;
  double std_error;
  double mean_isolated;
  double mean_isolated_sq;
  std::optional<double> analytic_expected_isolated;
  std::optional<double> prob_lower;
  std::optional<double> prob_upper;
};

struct Document {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<Record> records;
};

/// Reads a sweep CSV. Throws std::runtime_error naming the offending column
/// when the header or a cell does not match the schema.
Document read(std::istream& is);

}  // namespace rig::csv
