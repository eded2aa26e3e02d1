/**
 * @file sim.hpp
 * @brief Closed-loop simulation of the perturbed plant under the nominal or
 * robust controller, gust synthesis and the paired Monte-Carlo campaign.
 */
#pragma once

#include "helixguard/ocp.hpp"
#include "helixguard/solver.hpp"
#include "helixguard/tighten.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace helixguard {

struct GustProcess {
  double correlation_time = 0.2;  // s
  double bound = 0.6;             // N
  std::uint64_t rng_seed = 0;
};

/**
 * @brief Per-axis Ornstein-Uhlenbeck force with stationary standard deviation
 * bound/3, sampled exactly on `t_grid` and clipped to the norm bound.
 */
std::vector<Vec3> synthesize_gust(const GustProcess& process, const std::vector<double>& t_grid);

/// Everything that defines an inspection run apart from the realization.
struct Scenario {
  GtmrParams params;
  TowerGeometry tower;
  HelixSpec helix;
  NmpcConfig nmpc;
  UncertaintyBounds bounds = UncertaintyBounds::table_defaults();
  TighteningConfig tightening;
  double gust_bound = 0.6;              // N
  double gust_correlation_time = 0.2;   // s
  double sim_time = 50.0;               // s
  int warmup_iterations = 10;

  /// Inspection scenario with all tables filled in and cross-field values
  /// (orbit radius, m_min, actuator boxes) derived consistently.
  static Scenario defaults();
  /// Recomputes the derived fields after editing primary ones.
  void sync_derived();
  void validate() const;
  [[nodiscard]] int num_steps() const;
};

/// On the helix at t = 0, tower-facing, at rest in the rotating sense
/// (reference velocity), zero body rates and hover rotor speeds.
StateVec initial_state(const Scenario& scenario);

struct ControllerStep {
  InputVec input = InputVec::Zero();
  double solve_time = 0.0;  // s
  double alpha_p_max = 0.0;
  double alpha_g_terminal = 0.0;
  double max_slack = 0.0;
  SolverSolution solution;
};

/// Receding-horizon controller: margins (robust only), problem assembly and
/// one RTI step per call, warm-started by shifting the previous solution.
class Controller {
 public:
  Controller(Variant variant, const Scenario& scenario);

  ControllerStep step(const StateVec& x, double t);

  [[nodiscard]] Variant variant() const { return variant_; }

 private:
  Variant variant_;
  Scenario scenario_;
  RtiSolver solver_;
  SolverSolution warm_;
  bool initialized_ = false;
};

struct TraceSample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  double distance = 0.0;  // d_T
  double residual = 0.0;  // s
  double alpha_p_max = 0.0;
  double alpha_g_terminal = 0.0;
  double solve_ms = 0.0;
  double slack_max = 0.0;
};

struct TrialResult {
  UncertaintyVector zeta;
  double min_clearance = 0.0;
  bool violated = false;
  double max_residual = 0.0;
  double tracking_rmse = 0.0;
  double avg_solve_time = 0.0;  // s
  bool aborted = false;
  std::string error;
  std::vector<TraceSample> trace;

  /// Re-derives the violation flag and extrema from the trace.
  [[nodiscard]] bool consistent(const TowerGeometry& tower) const;
};

TrialResult run_closed_loop(Variant controller, const UncertaintyVector& zeta_true,
                            const GustProcess& gust, const Scenario& scenario);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Linear-interpolation quantiles of an unsorted sample.
FiveNumber five_number_summary(std::vector<double> values);

struct McSummary {
  Variant controller = Variant::kNominal;
  int n_trials = 0;
  int violations = 0;
  int aborted = 0;
  double min_clearance_overall = 0.0;
  FiveNumber residual_quartiles;  // pooled s(t) over all trials and samples
  double solve_time_mean = 0.0;   // s
};

struct CampaignOptions {
  int n_trials = 100;
  std::uint64_t base_seed = 1;
  int threads = 1;
  bool force_zero_zeta = false;
  bool keep_traces = false;
};

struct Campaign {
  McSummary nominal;
  McSummary robust;
  std::vector<TrialResult> nominal_trials;
  std::vector<TrialResult> robust_trials;
};

/// Trial i draws zeta and the gust from seed base_seed + i and runs both
/// controllers on that same realization.
Campaign monte_carlo(const Scenario& scenario, const CampaignOptions& opts);

McSummary summarize(Variant controller, const std::vector<TrialResult>& trials,
                    const TowerGeometry& tower);

}  // namespace helixguard
