// Command-line front end: sweep | critical | moments | verify.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rig::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Runs the tool on `args` (args[0] is the program name). Returns the process
/// exit code: 0 on success, 1 when verification fails, 2 on invalid or
/// infeasible flags.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Inclusive arithmetic grid min, min + step, ..., rounded to 12 decimals.
std::vector<double> make_grid(double min, double max, double step);

}  // namespace rig::cli
