#include "helixguard/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace helixguard {

std::vector<Vec3> synthesize_gust(const GustProcess& process, const std::vector<double>& t_grid) {
  std::vector<Vec3> out(t_grid.size(), Vec3::Zero());
  if (process.bound <= 0.0 || t_grid.empty()) {
    return out;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(process.rng_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(process.rng_seed >> 32), 0x67757374u};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = process.bound / 3.0;

  Vec3 w(sigma * normal(gen), sigma * normal(gen), sigma * normal(gen));
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (k > 0) {
      const double dt = t_grid[k] - t_grid[k - 1];
      const double a = std::exp(-dt / process.correlation_time);
      const double b = sigma * std::sqrt(1.0 - a * a);
      for (int axis = 0; axis < 3; ++axis) {
        w[axis] = a * w[axis] + b * normal(gen);
      }
    }
    Vec3 clipped = w;
    const double norm = clipped.norm();
    if (norm > process.bound) {
      clipped *= process.bound / norm;
    }
    out[k] = clipped;
  }
  return out;
}

Scenario Scenario::defaults() {
  Scenario s;
  s.sync_derived();
  return s;
}

void Scenario::sync_derived() {
  helix.orbit_radius = tower.radius + tower.d_ref;
  nmpc.set_actuator_limits(params);
  tightening.mass_min = (1.0 - bounds.upper[zidx::kMass]) * params.mass;
  tightening.gust_bound = gust_bound;
  tightening.sampling_time = nmpc.sampling_time;
}

void Scenario::validate() const {
  params.validate();
  tower.validate();
  helix.validate(tower);
  nmpc.validate();
  bounds.validate();
  tightening.validate();
  if (!(sim_time > 0.0)) {
    throw std::invalid_argument("simulation time must be positive");
  }
  if (!(gust_correlation_time > 0.0)) {
    throw std::invalid_argument("gust correlation time must be positive");
  }
}

int Scenario::num_steps() const {
  return static_cast<int>(std::llround(sim_time / nmpc.sampling_time));
}

StateVec initial_state(const Scenario& scenario) {
  const ReferencePoint r = helix_reference(0.0, scenario.helix);
  State s;
  s.position = r.position;
  s.velocity = r.velocity;
  s.euler = Vec3(0.0, 0.0, reference_yaw(0.0, scenario.helix));
  s.rotor_speeds.setConstant(scenario.params.hover_rotor_speed());
  return s.flatten();
}

Controller::Controller(Variant variant, const Scenario& scenario)
    : variant_(variant), scenario_(scenario) {}

ControllerStep Controller::step(const StateVec& x, double t) {
  const Scenario& sc = scenario_;
  auto assemble = [&](const SolverSolution& guess, ControllerStep& info) {
    std::optional<std::vector<double>> margins;
    if (variant_ == Variant::kRobust) {
      HorizonMargins hm =
          horizon_margins(guess.states, guess.inputs, sc.params, sc.tower, sc.bounds,
                          sc.tightening);
      info.alpha_p_max = *std::max_element(hm.parametric.begin(), hm.parametric.end());
      info.alpha_g_terminal = hm.gust.back();
      margins = hm.total();
    }
    return build_ocp(variant_, x, t, margins, sc.nmpc, sc.tower, sc.helix, sc.params);
  };

  ControllerStep info;
  if (!initialized_) {
    // Converge the first horizon problem before closing the loop.
    OcpProblem seed = build_ocp(Variant::kNominal, x, t, std::nullopt, sc.nmpc, sc.tower,
                                sc.helix, sc.params);
    warm_ = initial_guess(seed);
    for (int k = 0; k < sc.warmup_iterations; ++k) {
      ControllerStep scratch;
      warm_ = solver_.rti_step(assemble(warm_, scratch), warm_);
    }
    initialized_ = true;
  } else {
    warm_ = shift(warm_);
  }

  const auto start = std::chrono::steady_clock::now();
  const OcpProblem problem = assemble(warm_, info);
  SolverSolution sol = solver_.rti_step(problem, warm_);
  info.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  sol.solve_time = info.solve_time;
  info.input = sol.inputs.front();
  info.max_slack = *std::max_element(sol.slacks.begin() + 1, sol.slacks.end());
  warm_ = sol;
  info.solution = std::move(sol);
  return info;
}

bool TrialResult::consistent(const TowerGeometry& tower) const {
  if (trace.empty()) {
    return true;
  }
  double max_s = -std::numeric_limits<double>::infinity();
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& smp : trace) {
    max_s = std::max(max_s, smp.residual);
    min_d = std::min(min_d, smp.distance);
  }
  const bool by_residual = max_s > 0.0;
  const bool by_distance = min_d < tower.d_min;
  return violated == by_residual && violated == by_distance && max_s == max_residual &&
         min_d == min_clearance;
}

TrialResult run_closed_loop(Variant controller, const UncertaintyVector& zeta_true,
                            const GustProcess& gust, const Scenario& scenario) {
  const int steps = scenario.num_steps();
  const double dt = scenario.nmpc.sampling_time;
  std::vector<double> grid(steps);
  for (int k = 0; k < steps; ++k) {
    grid[k] = k * dt;
  }
  const std::vector<Vec3> gusts = synthesize_gust(gust, grid);
  const ZetaVec zeta = zeta_true.flatten();

  TrialResult result;
  result.zeta = zeta_true;
  result.trace.reserve(steps + 1);
  Controller ctrl(controller, scenario);
  StateVec x = initial_state(scenario);
  double sq_err = 0.0;
  double solve_sum = 0.0;
  int solves = 0;

  auto record = [&](double t, const ControllerStep* info) {
    TraceSample smp;
    smp.t = t;
    smp.position = x.segment<3>(idx::kPos);
    smp.distance = tower_distance(smp.position, scenario.tower);
    smp.residual = scenario.tower.d_min - smp.distance;
    if (info != nullptr) {
      smp.alpha_p_max = info->alpha_p_max;
      smp.alpha_g_terminal = info->alpha_g_terminal;
      smp.solve_ms = 1e3 * info->solve_time;
      smp.slack_max = info->max_slack;
    }
    sq_err += (smp.position - helix_reference(t, scenario.helix).position).squaredNorm();
    result.trace.push_back(smp);
  };

  try {
    for (int k = 0; k < steps; ++k) {
      const double t = grid[k];
      const ControllerStep info = ctrl.step(x, t);
      record(t, &info);
      solve_sum += info.solve_time;
      ++solves;
      x = rk4_step(x, info.input, zeta, gusts[k], dt, scenario.params);
      if (!x.allFinite()) {
        throw SolverError("plant state became non-finite");
      }
    }
    record(steps * dt, nullptr);
  } catch (const std::exception& e) {
    result.aborted = true;
    result.error = e.what();
  }

  result.min_clearance = std::numeric_limits<double>::infinity();
  result.max_residual = -std::numeric_limits<double>::infinity();
  for (const auto& smp : result.trace) {
    result.min_clearance = std::min(result.min_clearance, smp.distance);
    result.max_residual = std::max(result.max_residual, smp.residual);
  }
  result.violated = result.max_residual > 0.0;
  result.tracking_rmse =
      result.trace.empty() ? 0.0 : std::sqrt(sq_err / static_cast<double>(result.trace.size()));
  result.avg_solve_time = solves > 0 ? solve_sum / solves : 0.0;
  return result;
}

FiveNumber five_number_summary(std::vector<double> values) {
  FiveNumber f;
  if (values.empty()) {
    return f;
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  f.min = values.front();
  f.q1 = quantile(0.25);
  f.median = quantile(0.5);
  f.q3 = quantile(0.75);
  f.max = values.back();
  return f;
}

McSummary summarize(Variant controller, const std::vector<TrialResult>& trials,
                    const TowerGeometry& /*tower*/) {
  McSummary s;
  s.controller = controller;
  s.n_trials = static_cast<int>(trials.size());
  s.min_clearance_overall = std::numeric_limits<double>::infinity();
  std::vector<double> residuals;
  double solve_sum = 0.0;
  std::size_t solve_count = 0;
  for (const auto& tr : trials) {
    s.violations += tr.violated ? 1 : 0;
    s.aborted += tr.aborted ? 1 : 0;
    s.min_clearance_overall = std::min(s.min_clearance_overall, tr.min_clearance);
    for (const auto& smp : tr.trace) {
      residuals.push_back(smp.residual);
    }
    const std::size_t n_solves = tr.trace.empty() ? 0 : tr.trace.size() - (tr.aborted ? 0 : 1);
    solve_sum += tr.avg_solve_time * static_cast<double>(n_solves);
    solve_count += n_solves;
  }
  s.residual_quartiles = five_number_summary(std::move(residuals));
  s.solve_time_mean = solve_count > 0 ? solve_sum / static_cast<double>(solve_count) : 0.0;
  return s;
}

Campaign monte_carlo(const Scenario& scenario, const CampaignOptions& opts) {
  if (opts.n_trials < 1) {
    throw std::invalid_argument("a campaign needs at least one trial");
  }
  Campaign c;
  c.nominal_trials.resize(opts.n_trials);
  c.robust_trials.resize(opts.n_trials);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < opts.n_trials; i = next++) {
      const std::uint64_t seed = opts.base_seed + static_cast<std::uint64_t>(i);
      const UncertaintyVector zeta = opts.force_zero_zeta
                                         ? UncertaintyVector::nominal()
                                         : sample_uncertainty(scenario.bounds, seed);
      GustProcess gust;
      gust.bound = scenario.gust_bound;
      gust.correlation_time = scenario.gust_correlation_time;
      gust.rng_seed = seed;
      c.nominal_trials[i] = run_closed_loop(Variant::kNominal, zeta, gust, scenario);
      c.robust_trials[i] = run_closed_loop(Variant::kRobust, zeta, gust, scenario);
    }
  };
  const int threads = std::clamp(opts.threads, 1, opts.n_trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  c.nominal = summarize(Variant::kNominal, c.nominal_trials, scenario.tower);
  c.robust = summarize(Variant::kRobust, c.robust_trials, scenario.tower);
  if (!opts.keep_traces) {
    for (auto* trials : {&c.nominal_trials, &c.robust_trials}) {
      for (auto& tr : *trials) {
        tr.trace.clear();
        tr.trace.shrink_to_fit();
      }
    }
  }
  return c;
}

}  // namespace helixguard
