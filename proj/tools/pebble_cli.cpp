// Command-line front end: fit | ci | region | simulate.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pebble/errors.hpp"
#include "pebble/io.hpp"

namespace {

using namespace pebble;

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4, kIo = 5 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidData:
    case ErrorKind::DegenerateResponse:
    case ErrorKind::ParseError:
    case ErrorKind::NonBinaryResponse:
    case ErrorKind::MissingColumn:
      return kData;
    case ErrorKind::SingularMatrix:
    case ErrorKind::NonPositiveVariance:
    case ErrorKind::Separation:
    case ErrorKind::TooManyFailures:
    case ErrorKind::EmptySample:
      return kNumeric;
    case ErrorKind::IoError:
      return kIo;
    case ErrorKind::Precondition:
      return kUsage;
  }
  return kUsage;
}

struct Options {
  std::string data;
  std::string response;
  bool intercept = false;
  double level = 0.9;
  int boot = 1000;
  std::string seed = "1";
  std::optional<double> bn;
  std::string dvar;
  std::string beta0;
  long long n = 100;
  long long p = 3;
  int reps = 1000;
  unsigned threads = 1;
  std::string out;
};

Vector parse_list(const std::string& text, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail(ErrorKind::Precondition, std::string("cannot parse ") + what + " entry '" + cell + "'");
    }
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Vector expand_dvar(const std::string& text, Eigen::Index p) {
  Vector d = parse_list(text, "--dvar");
  if (d.size() == 1) return Vector::Constant(p, d[0]);
  if (d.size() != p) fail(ErrorKind::Precondition, "--dvar needs 1 or p entries");
  return d;
}

// A malformed --seed is a usage error, not a data error.
std::uint64_t cli_seed(const std::string& text) {
  try {
    return parse_seed(text);
  } catch (const Error& e) {
    fail(ErrorKind::Precondition, e.what());
  }
}

void validate_common(const Options& o, bool needs_boot) {
  if (!(o.level >= 0.5 && o.level < 1.0)) {
    fail(ErrorKind::Precondition, "--level must lie in [0.5, 1)");
  }
  if (needs_boot && o.boot < kMinBootstrap) {
    fail(ErrorKind::Precondition, "--boot must be at least 100");
  }
  if (o.bn && !(*o.bn > 0.0)) fail(ErrorKind::Precondition, "--bn must be positive");
}

ReportConfig base_config(const std::string& command, const Options& o, std::uint64_t seed) {
  ReportConfig cfg;
  cfg.command = command;
  cfg.data = o.data;
  cfg.response = o.response;
  cfg.intercept = o.intercept;
  cfg.level = o.level;
  cfg.boot = o.boot;
  cfg.seed = seed;
  cfg.threads = o.threads;
  return cfg;
}

struct BootstrapRun {
  Dataset data;
  FittedModel fitted;
  SmoothingConfig smoothing;
  BootstrapEnsemble ensemble;
  ReportConfig config;
};

BootstrapRun bootstrap_run(const std::string& command, const Options& o) {
  validate_common(o, true);
  const std::uint64_t seed = cli_seed(o.seed);
  Dataset data = load_csv(o.data, o.response, o.intercept);
  FittedModel fitted = fit_mle(data);
  const RandomStream master(seed);
  RandomStream smooth = master.derive("smooth", 0);
  std::optional<Vector> dvar;
  if (!o.dvar.empty()) dvar = expand_dvar(o.dvar, data.p());
  SmoothingConfig cfg = make_smoothing_config(data.n(), data.p(), smooth, o.bn, dvar);
  BootstrapOptions bopts;
  bopts.threads = o.threads;
  BootstrapEnsemble ens = run_pebble(data, fitted, o.boot, cfg, master, bopts);
  ReportConfig rc = base_config(command, o, seed);
  rc.b_n = cfg.b_n;
  rc.d_var = cfg.d_var;
  return {std::move(data), std::move(fitted), std::move(cfg), std::move(ens), std::move(rc)};
}

void write(const Json& doc, const Options& o) {
  if (o.out.empty() || o.out == "-") {
    std::cout << dump_json(doc) << '\n';
  } else {
    emit_report(doc, o.out);
  }
}

void cmd_fit(const Options& o) {
  validate_common(o, false);
  const Dataset data = load_csv(o.data, o.response, o.intercept);
  const FittedModel fitted = fit_mle(data);
  Json doc = fit_json(fitted, data);
  const IntervalSet wald = normal_intervals(fitted, 1.0 - o.level, data.n());
  doc["method"] = "normal";
  doc["intervals"] = intervals_json(wald, data.names());
  doc["region_radius"] = wald.region_radius;
  doc["config"] = config_json(base_config("fit", o, 0));
  write(doc, o);
}

void cmd_ci(const Options& o) {
  const BootstrapRun run = bootstrap_run("ci", o);
  const double alpha = 1.0 - o.level;
  const IntervalSet set = make_intervals(run.fitted, run.ensemble, alpha, run.smoothing, run.data.n());
  Json doc;
  doc["beta_hat"] = Json::array();
  for (Eigen::Index j = 0; j < run.fitted.beta_hat.size(); ++j) {
    doc["beta_hat"].push_back(run.fitted.beta_hat[j]);
  }
  doc["names"] = run.data.names();
  doc["intervals"] = intervals_json(set, run.data.names());
  doc["region_radius"] = set.region_radius;
  doc["config"] = config_json(run.config);
  doc["failed_replicates"] = run.ensemble.failed_replicates;
  write(doc, o);
}

void cmd_region(const Options& o) {
  const BootstrapRun run = bootstrap_run("region", o);
  const double alpha = 1.0 - o.level;
  const auto p = run.data.p();
  Coefficients beta0 = Coefficients::Zero(p);
  if (!o.beta0.empty()) {
    beta0 = parse_list(o.beta0, "--beta0");
    if (beta0.size() != p) fail(ErrorKind::Precondition, "--beta0 needs p entries");
  }
  const double radius = quantile(run.ensemble.norm_samples(), 1.0 - alpha);
  const double norm = pivot_smoothed(run.fitted, beta0, run.data.n(), run.smoothing).h_norm;
  Json doc;
  doc["beta_hat"] = Json::array();
  for (Eigen::Index j = 0; j < p; ++j) doc["beta_hat"].push_back(run.fitted.beta_hat[j]);
  doc["names"] = run.data.names();
  doc["beta0"] = Json::array();
  for (Eigen::Index j = 0; j < p; ++j) doc["beta0"].push_back(beta0[j]);
  doc["pivot_norm"] = norm;
  doc["region_radius"] = radius;
  doc["contains"] = norm <= radius;
  doc["config"] = config_json(run.config);
  doc["failed_replicates"] = run.ensemble.failed_replicates;
  write(doc, o);
}

void cmd_simulate(const Options& o) {
  validate_common(o, true);
  Scenario scn;
  scn.n = o.n;
  scn.p = o.p;
  scn.reps = o.reps;
  scn.B = o.boot;
  scn.alpha = 1.0 - o.level;
  scn.seed = cli_seed(o.seed);
  scn.threads = o.threads;
  write(coverage_json(run_coverage_study(scn)), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbation bootstrap inference for logistic regression"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_data) {
    if (needs_data) {
      sub->add_option("--data", o.data, "CSV file with a header row")->required();
      sub->add_option("--response", o.response, "0/1 response column")->required();
      sub->add_flag("--intercept", o.intercept, "Prepend a constant column");
    }
    sub->add_option("--level", o.level, "Confidence level (1 - alpha)")->capture_default_str();
    sub->add_option("--out", o.out, "Output JSON path (stdout when omitted)");
  };
  auto add_boot = [&](CLI::App* sub) {
    sub->add_option("--boot", o.boot, "Bootstrap replicates")->capture_default_str();
    sub->add_option("--seed", o.seed, "Seed, decimal or 0x-hex")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  };

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit with Wald intervals");
  add_common(fit, true);

  auto* ci = app.add_subcommand("ci", "Smoothed perturbation-bootstrap intervals");
  add_common(ci, true);
  add_boot(ci);
  ci->add_option("--bn", o.bn, "Smoothing scale override");
  ci->add_option("--dvar", o.dvar, "Smoothing variance: one value or p comma-separated");

  auto* region = app.add_subcommand("region", "Bootstrap confidence region membership");
  add_common(region, true);
  add_boot(region);
  region->add_option("--bn", o.bn, "Smoothing scale override");
  region->add_option("--dvar", o.dvar, "Smoothing variance: one value or p comma-separated");
  region->add_option("--beta0", o.beta0, "Candidate parameter, p comma-separated values (default 0)");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage study");
  add_common(sim, false);
  add_boot(sim);
  sim->add_option("--n", o.n, "Sample size")->capture_default_str();
  sim->add_option("--p", o.p, "Dimension (<= 8)")->capture_default_str();
  sim->add_option("--reps", o.reps, "Monte Carlo experiments")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ERROR:Usage:" << e.what() << '\n';
    return kUsage;
  }

  try {
    if (fit->parsed()) cmd_fit(o);
    else if (ci->parsed()) cmd_ci(o);
    else if (region->parsed()) cmd_region(o);
    else if (sim->parsed()) cmd_simulate(o);
  } catch (const Error& e) {
    std::cerr << "ERROR:" << to_string(e.kind()) << ':' << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "ERROR:Internal:" << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
