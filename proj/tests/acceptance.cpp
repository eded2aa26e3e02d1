// Acceptance run: the paired 100-trial campaign plus the oracle suites, one
// PASS/FAIL line per criterion. Exit status 0 only when every line passes.
#include "helixguard/report.hpp"
#include "helixguard/selfcheck.hpp"
#include "helixguard/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

namespace hg = helixguard;

namespace {

int g_failed = 0;

void report(int id, bool ok, const std::string& text) {
  std::printf("criterion %2d %s  %s\n", id, ok ? "PASS" : "FAIL", text.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++g_failed;
  }
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

int threads_from_env() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("HELIXGUARD_THREADS"); env != nullptr && *env != '\0') {
    n = std::max(1, std::min(n, std::atoi(env)));
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  int trials = 100;
  if (argc > 1) {
    trials = std::max(1, std::atoi(argv[1]));
  }
  const hg::Scenario sc = hg::Scenario::defaults();
  hg::CampaignOptions opts;
  opts.n_trials = trials;
  opts.base_seed = 1;
  opts.threads = threads_from_env();

  const auto start = std::chrono::steady_clock::now();
  const hg::Campaign c = hg::monte_carlo(sc, opts);
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
  std::printf("campaign: %d paired trials on %d thread(s) in %.2f min\n", trials, opts.threads,
              minutes);
  std::fputs(hg::comparison_table(c).c_str(), stdout);

  const hg::McSummary& nom = c.nominal;
  const hg::McSummary& rob = c.robust;
  const double d_min = sc.tower.d_min;

  report(1, rob.violations == 0 && rob.aborted == 0 && minutes < 10.0,
         fmt("robust violations %.0f/%.0f, aborted %.0f, runtime %.2f min (< 10)", rob.violations,
             rob.n_trials, rob.aborted, minutes));

  const double rate = static_cast<double>(nom.violations) / nom.n_trials;
  report(2, rate >= 0.15 && rate <= 0.80,
         fmt("nominal violation rate %.3f in [0.15, 0.80]", rate));

  report(3, rob.min_clearance_overall >= d_min + 0.05 && nom.min_clearance_overall < d_min,
         fmt("robust min clearance %.4f >= %.2f, nominal min clearance %.4f < %.2f",
             rob.min_clearance_overall, d_min + 0.05, nom.min_clearance_overall, d_min));

  const double nom_med = nom.residual_quartiles.median;
  const double rob_clear = hg::median_clearance(rob, sc.tower);
  const double nom_clear = hg::median_clearance(nom, sc.tower);
  report(4, nom_med >= -0.20 && nom_med <= -0.08 && rob_clear >= 0.33 && rob_clear >= nom_clear,
         fmt("nominal median residual %.4f in [-0.20, -0.08], robust median clearance %.4f "
             ">= 0.33 and >= nominal %.4f",
             nom_med, rob_clear, nom_clear));

  const double ratio = rob.solve_time_mean / nom.solve_time_mean;
  report(5, ratio >= 1.1 && ratio <= 4.0,
         fmt("solve time ratio %.3f in [1.1, 4.0] (robust %.3f ms, nominal %.3f ms)", ratio,
             1e3 * rob.solve_time_mean, 1e3 * nom.solve_time_mean));

  const hg::SuiteResult sens = hg::check_sensitivity();
  report(6, sens.passed, "sensitivity vs finite differences: " + sens.detail);

  const hg::SuiteResult vert = hg::check_margin_vertices(1000);
  report(7, vert.passed && vert.seconds < 5.0,
         vert.detail + fmt(", %.3f s (< 5)", vert.seconds));

  const hg::SuiteResult gust = hg::check_gust_margin(100);
  report(8, gust.passed, "gust margin over 100 headings: " + gust.detail);

  const hg::SuiteResult qp = hg::check_qp_enumeration(50);
  report(9, qp.passed, "condensed QP vs enumeration: " + qp.detail);

  const hg::SuiteResult rk4 = hg::check_rk4_order();
  report(10, rk4.passed, "RK4 order: " + rk4.detail);

  int paired = 0;
  for (int i = 0; i < trials; ++i) {
    paired += c.robust_trials[i].min_clearance >= c.nominal_trials[i].min_clearance ? 1 : 0;
  }
  std::printf("paired: robust clearance >= nominal in %d/%d trials\n", paired, trials);
  std::printf("%d of 10 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
