#include "rig/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rig/csv.hpp"

namespace rig {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rig");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string data_lines(const std::string& text) {
  std::istringstream is(text);
  std::string kept;
  for (std::string line; std::getline(is, line);) {
    if (!line.empty() && line[0] != '#') kept += line + '\n';
  }
  return kept;
}

TEST(Grid, InclusiveAndRounded) {
  const auto g = cli::make_grid(0.02, 0.2, 0.005);
  ASSERT_EQ(g.size(), 37u);
  EXPECT_EQ(g.front(), 0.02);
  EXPECT_EQ(g.back(), 0.2);
  EXPECT_EQ(g[3], 0.035);
  EXPECT_EQ(cli::make_grid(0.3, 0.3, 0.1).size(), 1u);
  EXPECT_THROW(cli::make_grid(0.3, 0.2, 0.1), std::runtime_error);
  EXPECT_THROW(cli::make_grid(0.1, 0.2, 0.0), std::runtime_error);
}

TEST(Critical, Examples) {
  auto res = run({"critical", "--n", "100", "--fix", "p=0.25", "--law", "zero"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NEAR(std::stod(parse_pairs(res.out).at("solved r")), 0.0921, 5e-5);

  res = run({"critical", "--n", "100", "--fix", "r=0.1", "--law", "one-interval"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NEAR(std::stod(parse_pairs(res.out).at("solved p")), 0.3078, 5e-5);

  res = run({"critical", "--n", "100", "--fix", "r=0.6", "--law", "zero"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NEAR(std::stod(parse_pairs(res.out).at("solved p")), 0.04605, 5e-6);

  res = run({"critical", "--n", "100", "--fix", "r=0.1", "--law", "one-circle"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_NEAR(std::stod(parse_pairs(res.out).at("solved p")), 0.230259, 5e-7);
}

TEST(Critical, InfeasibleAndMalformed) {
  EXPECT_EQ(run({"critical", "--n", "100", "--fix", "r=0.001"}).code, 2);
  EXPECT_EQ(run({"critical", "--n", "100", "--fix", "q=0.1"}).code, 2);
  EXPECT_EQ(run({"critical", "--n", "100", "--fix", "p=abc"}).code, 2);
  const auto res = run({"critical", "--n", "100", "--fix", "p=0.25", "--law", "sideways"});
  EXPECT_EQ(res.code, 2);
  EXPECT_FALSE(res.err.empty());
}

TEST(Moments, Examples) {
  auto res = run({"moments", "--metric", "circle", "--n", "100", "--r", "0.1", "--p", "0.230259"});
  ASSERT_EQ(res.code, 0) << res.err;
  auto kv = parse_pairs(res.out);
  EXPECT_NEAR(std::stod(kv.at("expected_isolated")), 0.9396248515205997, 1e-14);
  EXPECT_NEAR(std::stod(kv.at("prob_lower_raw")), 0.0603751, 1e-6);
  EXPECT_NEAR(std::stod(kv.at("prob_upper")), 0.531492, 1e-6);
  EXPECT_EQ(kv.at("pair_moment_kind"), "exact");

  res = run({"moments", "--metric", "interval", "--n", "30", "--r", "0.2", "--p", "0"});
  ASSERT_EQ(res.code, 0) << res.err;
  kv = parse_pairs(res.out);
  EXPECT_EQ(std::stod(kv.at("first_moment_per_node")), 1.0);
  EXPECT_EQ(std::stod(kv.at("expected_isolated")), 30.0);
  EXPECT_EQ(kv.at("pair_moment"), "n/a");

  res = run({"moments", "--metric", "circle", "--n", "30", "--r", "0.6", "--p", "0.5"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_EQ(std::stod(parse_pairs(res.out).at("ratio_upper")), 2.0);

  res = run({"moments", "--metric", "interval", "--n", "20", "--r", "0.1", "--p", "0.5",
             "--quadrature"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_EQ(parse_pairs(res.out).at("pair_moment_kind"), "quadrature");
}

TEST(Moments, RejectsBadParams) {
  EXPECT_EQ(run({"moments", "--n", "1", "--r", "0.1", "--p", "0.5"}).code, 2);
  EXPECT_EQ(run({"moments", "--n", "10", "--r", "0.1", "--p", "1.5"}).code, 2);
  EXPECT_EQ(run({"moments", "--n", "10", "--r", "-0.1", "--p", "0.5"}).code, 2);
}

TEST(Sweep, SchemaAndRoundTrip) {
  const auto res = run({"sweep", "--metric", "both", "--n", "30", "--p", "0.4",
                        "--vary", "r", "--min", "0.05", "--max", "0.15", "--step",
                        "0.05", "--trials", "50", "--seed", "12"});
  ASSERT_EQ(res.code, 0) << res.err;
  std::istringstream is(res.out);
  const auto doc = csv::read(is);
  ASSERT_EQ(doc.records.size(), 6u);
  EXPECT_FALSE(doc.comments.empty());
  EXPECT_EQ(doc.records[0].metric, Metric::Circle);
  EXPECT_EQ(doc.records[3].metric, Metric::Interval);
  EXPECT_EQ(doc.records[1].r, 0.1);
  EXPECT_EQ(doc.records[1].seed, 12u);
  EXPECT_EQ(doc.records[1].trials, 50);
  EXPECT_TRUE(doc.records[0].prob_upper.has_value());
  EXPECT_FALSE(doc.records[3].prob_upper.has_value());
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_GE(doc.records[k].p_hat, doc.records[k + 3].p_hat);
  }

  // The header row is exactly the documented schema.
  std::istringstream lines(res.out);
  std::string line;
  while (std::getline(lines, line) && line.starts_with('#')) {
  }
  std::string expected;
  for (auto c : csv::kColumns) expected += std::string(expected.empty() ? "" : ",") + std::string(c);
  EXPECT_EQ(line, expected);
}

TEST(Sweep, ManifestLines) {
  const auto res = run({"sweep", "--n", "10", "--p", "0.5", "--vary", "r", "--min",
                        "0.1", "--max", "0.1", "--step", "0.1", "--trials", "3"});
  ASSERT_EQ(res.code, 0) << res.err;
  std::istringstream is(res.out);
  const auto doc = csv::read(is);
  std::string joined;
  for (const auto& c : doc.comments) joined += c + '\n';
  EXPECT_NE(joined.find("version"), std::string::npos);
  EXPECT_NE(joined.find(std::to_string(cli::kDefaultSeed)), std::string::npos);
  EXPECT_NE(joined.find("timestamp"), std::string::npos);
  EXPECT_NE(joined.find("sweep --n 10"), std::string::npos);
}

TEST(Sweep, SingleTrialSinglePoint) {
  const auto res = run({"sweep", "--metric", "interval", "--n", "20", "--r", "0.1",
                        "--vary", "p", "--min", "0.3", "--max", "0.3", "--step", "0.1",
                        "--trials", "1"});
  ASSERT_EQ(res.code, 0) << res.err;
  std::istringstream is(res.out);
  const auto doc = csv::read(is);
  ASSERT_EQ(doc.records.size(), 1u);
  EXPECT_EQ(doc.records[0].std_error, 0.0);
}

TEST(Sweep, SameSeedGivesIdenticalRows) {
  const std::vector<std::string> args{"sweep", "--metric", "circle", "--n", "40",
                                      "--p", "0.3", "--vary", "r", "--min", "0.05",
                                      "--max", "0.12", "--step", "0.01", "--trials",
                                      "100", "--seed", "99"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(data_lines(a.out), data_lines(b.out));
  auto other = args;
  other.back() = "100";
  EXPECT_NE(data_lines(run(other).out), data_lines(a.out));
}

TEST(Sweep, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "rig_cli_test_sweep.csv";
  const auto res = run({"sweep", "--n", "10", "--p", "0.5", "--vary", "r", "--min",
                        "0.1", "--max", "0.2", "--step", "0.1", "--trials", "5",
                        "--out", path.string()});
  ASSERT_EQ(res.code, 0) << res.err;
  std::ifstream in(path);
  const auto doc = csv::read(in);
  EXPECT_EQ(doc.records.size(), 2u);
  std::filesystem::remove(path);
}

TEST(Sweep, UsageErrors) {
  // Missing the fixed parameter.
  EXPECT_EQ(run({"sweep", "--vary", "r", "--min", "0.1", "--max", "0.2", "--step", "0.1"}).code, 2);
  // Grid point outside [0,1] for p.
  EXPECT_EQ(run({"sweep", "--r", "0.1", "--vary", "p", "--min", "0.9", "--max", "1.1",
                 "--step", "0.1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--p", "0.1", "--vary", "r", "--min", "0.1", "--max", "0.2",
                 "--step", "0.1", "--trials", "0"}).code, 2);
  EXPECT_EQ(run({"sweep", "--p", "0.1", "--vary", "r", "--min", "0.1", "--max", "0.2",
                 "--step", "0.1", "--metric", "torus"}).code, 2);
  EXPECT_EQ(run({"sweep", "--p", "0.1", "--vary", "r", "--min", "0.1", "--max", "0.2",
                 "--step", "0.1", "--bogus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Csv, SchemaViolationNamesColumn) {
  std::istringstream bad_header("metric,n,r,p,trials,seed,p_hat,stderr,mean_isolated,"
                                "mean_isolated_sq,analytic_E_I,prob_lower\n");
  try {
    csv::read(bad_header);
    FAIL() << "expected a schema error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("prob_upper"), std::string::npos) << e.what();
  }

  std::ostringstream header;
  csv::write_header(header);
  std::istringstream bad_cell(header.str() +
                              "circle,ten,0.1,0.5,10,1,0,0,1,1,,,\n");
  try {
    csv::read(bad_cell);
    FAIL() << "expected a cell error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("'n'"), std::string::npos) << e.what();
  }
}

TEST(Csv, FormatReal) {
  EXPECT_EQ(csv::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(csv::format_real(1.0), "1");
  EXPECT_EQ(std::stod(csv::format_real(0.0921034037197618)), 0.0921034037197618);
}

TEST(Verify, QuickPassesAndFaultsFail) {
  const auto ok = run({"verify", "--quick"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("checks passed"), std::string::npos);
  for (const std::string fault : {"first-moment", "pair-moment", "u-tilde"}) {
    const auto bad = run({"verify", "--quick", "--inject-fault", fault});
    EXPECT_EQ(bad.code, 1) << fault;
    EXPECT_NE(bad.out.find("FAIL "), std::string::npos) << fault;
  }
}

TEST(Top, VersionAndHelp) {
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(cli::kVersion) + "\n");
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace rig
