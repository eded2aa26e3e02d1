// helixguard command-line entry point.
//
// Exit codes: 0 success, 1 safety or check failure, 2 configuration error,
// 3 numerical failure.

#include "helixguard/config.hpp"
#include "helixguard/report.hpp"
#include "helixguard/selfcheck.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

namespace hg = helixguard;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

hg::RunConfig load(const std::string& path) {
  return path.empty() ? hg::parse_config("") : hg::load_config(path);
}

int trial_threads(int n_trials) {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("HELIXGUARD_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1) {
      throw UsageError(std::string("HELIXGUARD_THREADS must be a positive integer, got '") +
                       env + "'");
    }
    threads = std::min<long>(threads, cap);
  }
  return std::min(threads, n_trials);
}

hg::UncertaintyVector parse_zeta(const std::string& text, const hg::UncertaintyBounds& bounds,
                                 std::uint64_t seed) {
  if (text == "random") {
    return hg::sample_uncertainty(bounds, seed);
  }
  if (text == "zero") {
    return hg::UncertaintyVector::nominal();
  }
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  hg::ZetaVec z;
  int count = 0;
  double v = 0.0;
  while (in >> v) {
    if (count < hg::kZetaDim) {
      z[count] = v;
    }
    ++count;
  }
  if (!in.eof() || count != hg::kZetaDim) {
    throw UsageError("--zeta expects 'random', 'zero' or 9 comma-separated numbers");
  }
  for (int j = 0; j < hg::kZetaDim; ++j) {
    if (z[j] < bounds.lower[j] || z[j] > bounds.upper[j]) {
      throw UsageError("--zeta component " + std::to_string(j) + " lies outside its bound");
    }
  }
  return hg::UncertaintyVector::unflatten(z);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& controller,
                 const std::string& zeta_arg, std::optional<std::uint64_t> seed_opt,
                 const std::string& out_path) {
  hg::RunConfig cfg = load(config_path);
  const hg::Variant variant =
      controller.empty() ? cfg.controller : hg::variant_from_string(controller);
  const std::uint64_t seed = seed_opt.value_or(cfg.base_seed);
  const hg::UncertaintyVector zeta = parse_zeta(zeta_arg, cfg.scenario.bounds, seed);

  hg::GustProcess gust;
  gust.bound = cfg.scenario.gust_bound;
  gust.correlation_time = cfg.scenario.gust_correlation_time;
  gust.rng_seed = seed;
  const hg::TrialResult trial = hg::run_closed_loop(variant, zeta, gust, cfg.scenario);

  const fs::path path = out_path.empty()
                            ? fs::path(cfg.output_dir) / ("trace_" + std::string(hg::to_string(variant)) + ".csv")
                            : fs::path(out_path);
  std::ofstream out = open_output(path);
  hg::write_trace_csv(out, trial);

  if (trial.aborted) {
    std::fprintf(stderr, "numerical failure: %s\n", trial.error.c_str());
    return kNumericalError;
  }
  const auto closest = std::min_element(
      trial.trace.begin(), trial.trace.end(),
      [](const hg::TraceSample& a, const hg::TraceSample& b) { return a.distance < b.distance; });
  const hg::Vec3 radial(closest->position.x(), closest->position.y(), 0.0);
  const double azimuth = std::atan2(radial.y(), radial.x()) * 180.0 / std::numbers::pi;
  const double inward_wind = -radial.normalized().dot(zeta.wind_bias);

  std::printf("controller       %s\n", hg::to_string(variant));
  std::printf("min clearance    %.4f m at t = %.2f s, azimuth %.1f deg\n", trial.min_clearance,
              closest->t, azimuth);
  std::printf("wind toward tower at closest approach  %.3f N\n", inward_wind);
  std::printf("tracking rmse    %.4f m\n", trial.tracking_rmse);
  std::printf("mean solve time  %.3f ms\n", 1e3 * trial.avg_solve_time);
  std::printf("violated         %s\n", trial.violated ? "yes" : "no");
  std::printf("trace            %s\n", path.string().c_str());
  return trial.violated ? kFailed : kOk;
}

int cmd_montecarlo(const std::string& config_path, std::optional<int> trials,
                   std::optional<std::uint64_t> seed, bool zero_zeta, bool traces,
                   const std::string& out_dir) {
  hg::RunConfig cfg = load(config_path);
  hg::CampaignOptions opts;
  opts.n_trials = trials.value_or(cfg.n_trials);
  if (opts.n_trials < 1) {
    throw UsageError("--trials must be at least 1");
  }
  opts.base_seed = seed.value_or(cfg.base_seed);
  opts.force_zero_zeta = zero_zeta;
  opts.keep_traces = traces;
  opts.threads = trial_threads(opts.n_trials);
  const fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);

  const hg::Campaign campaign = hg::monte_carlo(cfg.scenario, opts);

  {
    std::ofstream out = open_output(dir / "summary.json");
    out << hg::campaign_json(campaign, opts.base_seed).dump(2) << '\n';
  }
  {
    std::ofstream out = open_output(dir / "trials.csv");
    hg::write_trials_csv(out, campaign, opts.base_seed);
  }
  if (traces) {
    for (int i = 0; i < opts.n_trials; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "trace_%04d_nominal.csv", i);
      std::ofstream a = open_output(dir / "traces" / name);
      hg::write_trace_csv(a, campaign.nominal_trials[i]);
      std::snprintf(name, sizeof(name), "trace_%04d_robust.csv", i);
      std::ofstream b = open_output(dir / "traces" / name);
      hg::write_trace_csv(b, campaign.robust_trials[i]);
    }
  }

  std::printf("%s", hg::comparison_table(campaign).c_str());
  std::printf("summary          %s\n", (dir / "summary.json").string().c_str());
  if (campaign.nominal.aborted + campaign.robust.aborted > 0) {
    std::fprintf(stderr, "%d trial(s) aborted on numerical failure\n",
                 campaign.nominal.aborted + campaign.robust.aborted);
    return kNumericalError;
  }
  return kOk;
}

int cmd_check() {
  bool all = true;
  for (const hg::SuiteResult& r : hg::run_all_checks()) {
    std::printf("%-16s %s  %s (%.2f s)\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.detail.c_str(), r.seconds);
    all = all && r.passed;
  }
  return all ? kOk : kFailed;
}

int cmd_reference(const std::string& config_path, double dt, std::optional<double> duration,
                  const std::string& out_path) {
  hg::RunConfig cfg = load(config_path);
  if (!(dt > 0.0)) {
    throw UsageError("--dt must be positive");
  }
  const double span = duration.value_or(cfg.scenario.sim_time);
  if (out_path.empty()) {
    std::ostringstream buf;
    hg::write_reference_csv(buf, cfg.scenario.helix, dt, span);
    std::fwrite(buf.str().data(), 1, buf.str().size(), stdout);
  } else {
    std::ofstream out = open_output(out_path);
    hg::write_reference_csv(out, cfg.scenario.helix, dt, span);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust NMPC for helical tower inspection with a tilted hexarotor"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "INI configuration file")->check(CLI::ExistingFile);

  std::string controller;
  std::string zeta_arg = "zero";
  std::optional<std::uint64_t> seed;
  std::string out;
  auto* sim = app.add_subcommand("simulate", "Run one closed-loop trial and write its trace");
  sim->add_option("--controller", controller, "nominal or robust")
      ->check(CLI::IsMember({"nominal", "robust"}));
  sim->add_option("--zeta", zeta_arg, "'zero', 'random' or 9 comma-separated values");
  sim->add_option("--seed", seed, "Seed for a random zeta and the gust");
  sim->add_option("-o,--out", out, "Trace CSV path");

  std::optional<int> trials;
  bool zero_zeta = false;
  bool traces = false;
  auto* mc = app.add_subcommand("montecarlo", "Paired Monte-Carlo campaign of both controllers");
  mc->add_option("--trials", trials, "Number of paired trials");
  mc->add_option("--seed", seed, "Base seed; trial i uses seed + i");
  mc->add_flag("--zero-zeta", zero_zeta, "Force the nominal parameters in every trial");
  mc->add_flag("--traces", traces, "Also write one trace CSV per trial and controller");
  mc->add_option("-o,--out", out, "Output directory");

  app.add_subcommand("check", "Run the numerical oracle suites");

  double dt = 0.1;
  std::optional<double> duration;
  auto* ref = app.add_subcommand("reference", "Write the helical reference as CSV");
  ref->add_option("--dt", dt, "Sample spacing [s]");
  ref->add_option("--duration", duration, "Time span [s], defaults to the run length");
  ref->add_option("-o,--out", out, "CSV path, standard output when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(config_path, controller, zeta_arg, seed, out);
    }
    if (mc->parsed()) {
      return cmd_montecarlo(config_path, trials, seed, zero_zeta, traces, out);
    }
    if (ref->parsed()) {
      return cmd_reference(config_path, dt, duration, out);
    }
    return cmd_check();
  } catch (const hg::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const hg::SolverError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalError;
  } catch (const hg::GimbalLockError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
}
