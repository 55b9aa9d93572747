#include "rig/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rig/analytic.hpp"
#include "rig/csv.hpp"
#include "rig/montecarlo.hpp"
#include "rig/oracle.hpp"
#include "rig/scaling.hpp"

namespace rig::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

struct SweepFlags {
  std::string metric = "circle";
  std::int64_t n = 100;
  std::optional<double> r;
  std::optional<double> p;
  std::string vary;
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
  std::int64_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string engine = "auto";
};

mc::Engine pick_engine(const std::string& name, std::int64_t n) {
  if (name == "dense") return mc::Engine::Dense;
  if (name == "lazy") return mc::Engine::Lazy;
  return mc::auto_engine(n);
}

int cmd_sweep(const SweepFlags& f, const std::vector<std::string>& args,
              std::ostream& out) {
  const auto vary = f.vary == "r" ? mc::Vary::R : mc::Vary::P;
  if (vary == mc::Vary::R && !f.p) throw UsageError("--vary r needs --p");
  if (vary == mc::Vary::P && !f.r) throw UsageError("--vary p needs --r");
  const auto grid = make_grid(f.min, f.max, f.step);
  const ModelParams base(vary == mc::Vary::R ? grid.front() : *f.r,
                         vary == mc::Vary::P ? grid.front() : *f.p);
  // Reject infeasible grid points before any simulation starts.
  for (double v : grid) {
    (void)(vary == mc::Vary::R ? base.with_r(v) : base.with_p(v));
  }
  if (f.n < 2) throw UsageError("--n must be at least 2");
  if (f.trials < 1) throw UsageError("--trials must be at least 1");

  std::vector<mc::SweepRow> rows;
  if (f.metric == "both") {
    const auto shared = mc::sweep_shared(f.n, base, vary, grid, f.trials, f.seed);
    for (const auto& s : shared) rows.push_back(s.circle);
    for (const auto& s : shared) rows.push_back(s.interval);
  } else {
    mc::TrialConfig cfg{parse_metric(f.metric), f.n, base, f.trials, f.seed,
                        pick_engine(f.engine, f.n)};
    rows = mc::sweep(cfg, vary, grid);
  }

  std::ostringstream body;
  csv::write_manifest(body, {join_args(args), kVersion, f.seed, utc_timestamp(),
                             f.out.empty() ? "-" : f.out});
  csv::write_header(body);
  for (const auto& row : rows) csv::write_row(body, row);

  if (f.out.empty()) {
    out << body.str();
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!file) throw UsageError("cannot open --out file '" + f.out + "'");
    file << body.str();
    out << "wrote " << rows.size() << " rows to " << f.out << '\n';
  }
  return 0;
}

struct CriticalFlags {
  std::int64_t n = 100;
  std::string fix;
  std::string law = "zero";
  double offset = 0.0;
};

int cmd_critical(const CriticalFlags& f, std::ostream& out) {
  const auto eq = f.fix.find('=');
  if (eq == std::string::npos) throw UsageError("--fix expects r=VALUE or p=VALUE");
  const std::string which = f.fix.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(f.fix.substr(eq + 1), &used);
    if (used != f.fix.size() - eq - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("--fix value is not a number: '" + f.fix + "'");
  }
  if (which != "r" && which != "p") throw UsageError("--fix expects r=VALUE or p=VALUE");
  const auto law = f.law == "one-interval" ? scaling::Law::OneInterval
                                           : scaling::Law::Zero;

  const auto solved = which == "r" ? scaling::solve_p(f.n, value, f.offset, law)
                                   : scaling::solve_r(f.n, value, f.offset, law);
  if (!solved) {
    throw UsageError("infeasible: no " + std::string(which == "r" ? "p" : "r") +
                     " in range reaches the critical scaling");
  }
  const ModelParams params = which == "r" ? ModelParams(value, *solved)
                                          : ModelParams(*solved, value);
  out << "n=" << f.n << '\n'
      << "law=" << f.law << '\n'
      << "offset=" << csv::format_real(f.offset) << '\n'
      << "fixed " << which << '=' << csv::format_real(value) << '\n'
      << "solved " << (which == "r" ? "p" : "r") << '='
      << csv::format_real(*solved) << '\n'
      << "p_ell=" << csv::format_real(scaling::critical_p_ell(f.n, law, f.offset))
      << '\n'
      << "alpha=" << csv::format_real(scaling::deviation_alpha(f.n, params)) << '\n';
  if (f.n >= 3) {
    out << "alpha_prime="
        << csv::format_real(scaling::deviation_alpha_prime(f.n, params)) << '\n';
  }
  return 0;
}

struct MomentFlags {
  std::string metric = "circle";
  std::int64_t n = 100;
  double r = 0.1;
  double p = 0.5;
  bool quadrature = false;
};

int cmd_moments(const MomentFlags& f, std::ostream& out) {
  if (f.n < 2) throw UsageError("--n must be at least 2");
  const ModelParams params(f.r, f.p);
  const auto rep = analytic::moments(parse_metric(f.metric), f.n, params,
                                     f.quadrature);
  const auto opt = [](const std::optional<double>& v) {
    return v ? csv::format_real(*v) : std::string("n/a");
  };
  const char* kind = rep.pair_kind == analytic::PairMomentKind::Exact ? "exact"
                     : rep.pair_kind == analytic::PairMomentKind::Quadrature
                         ? "quadrature"
                         : "n/a";
  out << "metric=" << f.metric << '\n'
      << "n=" << f.n << '\n'
      << "r=" << csv::format_real(f.r) << '\n'
      << "p=" << csv::format_real(f.p) << '\n'
      << "first_moment_per_node=" << csv::format_real(rep.first_moment_per_node) << '\n'
      << "expected_isolated=" << csv::format_real(rep.expected_isolated) << '\n'
      << "pair_moment=" << opt(rep.pair_moment) << '\n'
      << "pair_moment_kind=" << kind << '\n'
      << "second_moment_In=" << opt(rep.second_moment_In) << '\n';
  if (rep.metric == Metric::Circle) {
    out << "ratio_upper="
        << (rep.ratio_upper ? csv::format_real(*rep.ratio_upper)
                            : std::string("undefined (zero denominator)"))
        << '\n';
  }
  out << "prob_lower=" << csv::format_real(rep.prob_lower()) << '\n'
      << "prob_lower_raw=" << csv::format_real(rep.prob_lower_raw) << '\n'
      << "prob_upper=" << opt(rep.prob_upper) << '\n'
      << "alpha=" << csv::format_real(scaling::deviation_alpha(f.n, params)) << '\n';
  if (f.n >= 3) {
    out << "alpha_prime="
        << csv::format_real(scaling::deviation_alpha_prime(f.n, params)) << '\n';
  }
  return 0;
}

struct VerifyFlags {
  bool quick = false;
  bool full = false;
  std::uint64_t seed = kDefaultSeed;
  std::string fault;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  auto forms = oracle::ClosedForms::library();
  // Test hook: perturb one closed form to confirm the suite notices.
  if (f.fault == "first-moment") {
    auto orig = forms.first_moment;
    forms.first_moment = [orig](Metric m, std::int64_t n, const ModelParams& p) {
      return orig(m, n, p) * (1.0 + 1e-6);
    };
  } else if (f.fault == "pair-moment") {
    auto orig = forms.pair_moment_circle;
    forms.pair_moment_circle = [orig](std::int64_t n, const ModelParams& p) {
      return orig(n, p) * (1.0 + 1e-6);
    };
  } else if (f.fault == "u-tilde") {
    auto orig = forms.u_tilde_circle;
    forms.u_tilde_circle = [orig](double z, double r) { return orig(z, r) + 0.01; };
  } else if (!f.fault.empty()) {
    throw UsageError("unknown fault '" + f.fault + "'");
  }

  const auto reports = oracle::run_suite({f.full, f.seed}, forms);
  std::size_t passed = 0;
  for (const auto& rep : reports) {
    passed += rep.pass;
    out << (rep.pass ? "PASS " : "FAIL ") << rep.name
        << " closed=" << csv::format_real(rep.closed_form)
        << " oracle=" << csv::format_real(rep.oracle_value)
        << " abs_err=" << csv::format_real(rep.abs_err)
        << " rel_err=" << csv::format_real(rep.rel_err)
        << " tol=" << csv::format_real(rep.tolerance) << '\n';
  }
  out << passed << '/' << reports.size() << " checks passed\n";
  return passed == reports.size() ? 0 : 1;
}

}  // namespace

std::vector<double> make_grid(double min, double max, double step) {
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  if (!(max >= min)) throw UsageError("--max must not be below --min");
  const auto count = static_cast<std::int64_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    grid.push_back(std::round((min + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Isolated nodes in intersections of Erdos-Renyi and 1D geometric random graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over r or p, written as CSV");
  sweep->add_option("--metric", sf.metric)->check(CLI::IsMember({"circle", "interval", "both"}));
  sweep->add_option("--n", sf.n, "Number of nodes");
  sweep->add_option("--r", sf.r, "Fixed range (when varying p)");
  sweep->add_option("--p", sf.p, "Fixed activation probability (when varying r)");
  sweep->add_option("--vary", sf.vary)->required()->check(CLI::IsMember({"r", "p"}));
  sweep->add_option("--min", sf.min)->required();
  sweep->add_option("--max", sf.max)->required();
  sweep->add_option("--step", sf.step)->required();
  sweep->add_option("--trials", sf.trials)->capture_default_str();
  sweep->add_option("--seed", sf.seed)->capture_default_str();
  sweep->add_option("--out", sf.out, "Output file (stdout when omitted)");
  sweep->add_option("--engine", sf.engine)->check(CLI::IsMember({"auto", "dense", "lazy"}));

  CriticalFlags cf;
  auto* critical = app.add_subcommand("critical", "Solve for the critical r or p");
  critical->add_option("--n", cf.n)->required();
  critical->add_option("--fix", cf.fix, "r=VALUE or p=VALUE")->required();
  critical->add_option("--law", cf.law)->check(CLI::IsMember({"zero", "one-circle", "one-interval"}));
  critical->add_option("--alpha", cf.offset, "Deviation from the critical scaling");

  MomentFlags mf;
  auto* moments = app.add_subcommand("moments", "Closed-form moments and probability bounds");
  moments->add_option("--metric", mf.metric)->check(CLI::IsMember({"circle", "interval"}));
  moments->add_option("--n", mf.n)->required();
  moments->add_option("--r", mf.r)->required();
  moments->add_option("--p", mf.p)->required();
  moments->add_flag("--quadrature", mf.quadrature, "Interval pair moment by quadrature");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Run the oracle suite");
  auto* quick = verify->add_flag("--quick", vf.quick);
  verify->add_flag("--full", vf.full)->excludes(quick);
  verify->add_option("--seed", vf.seed)->capture_default_str();
  verify->add_option("--inject-fault", vf.fault)->group("");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(sf, args, out);
    if (critical->parsed()) return cmd_critical(cf, out);
    if (moments->parsed()) return cmd_moments(mf, out);
    return cmd_verify(vf, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace rig::cli
