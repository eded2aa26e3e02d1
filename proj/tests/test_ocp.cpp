#include "helixguard/ocp.hpp"
#include "helixguard/sim.hpp"

#include <doctest.h>

using namespace helixguard;

namespace {

StateVec hover_at(const Vec3& p, const GtmrParams& params) {
  State s;
  s.position = p;
  s.rotor_speeds.setConstant(params.hover_rotor_speed());
  return s.flatten();
}

}  // namespace

TEST_CASE("stage cost of a pure position error") {
  const GtmrParams params;
  const NmpcConfig cfg;
  ReferencePoint r;
  r.position = Vec3(1.35, 0, 2);
  const StateVec x = hover_at(r.position + Vec3(0.1, 0, 0), params);
  CHECK(stage_cost(x, InputVec::Zero(), r, cfg, params) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(stage_cost(hover_at(r.position, params), InputVec::Zero(), r, cfg, params) < 1e-20);
}

TEST_CASE("terminal cost examples") {
  const GtmrParams params;
  const NmpcConfig cfg;
  ReferencePoint r;
  r.position = Vec3(1.35, 0, 2);
  CHECK(terminal_cost(hover_at(r.position + Vec3(0, 0, 0.1), params), r, cfg) ==
        doctest::Approx(1.2).epsilon(1e-12));
  CHECK(terminal_cost(hover_at(r.position + Vec3(0.1, 0.1, 0), params), r, cfg) ==
        doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("regularization terms of the stage cost") {
  const GtmrParams params;
  NmpcConfig cfg;
  ReferencePoint r;
  r.position = Vec3(1.35, 0, 2);
  InputVec u = InputVec::Zero();
  u[2] = 10.0;
  CHECK(stage_cost(hover_at(r.position, params), u, r, cfg, params) ==
        doctest::Approx(cfg.Q_u[2] * 100.0).epsilon(1e-12));
  StateVec x = hover_at(r.position, params);
  x[idx::kRates + 1] = 0.2;
  const double with_rate = stage_cost(x, InputVec::Zero(), r, cfg, params);
  cfg.Q_w.setZero();
  const double without_rate = stage_cost(x, InputVec::Zero(), r, cfg, params);
  CHECK(with_rate - without_rate == doctest::Approx(0.5 * 0.04).epsilon(1e-12));
}

TEST_CASE("horizon problem dimensions") {
  const Scenario sc = Scenario::defaults();
  const OcpProblem p = build_ocp(Variant::kNominal, initial_state(sc), 0.0, std::nullopt, sc.nmpc,
                                 sc.tower, sc.helix, sc.params);
  CHECK(p.num_clearance_rows() == 21);
  CHECK(p.num_dynamics_blocks() == 20);
  CHECK(p.decision_dimension() == 21 * 18 + 20 * 6 + 21);
  CHECK(p.references.size() == 21);
  for (double b : p.stage_bounds) {
    CHECK(b == sc.tower.d_min);
  }
}

TEST_CASE("robust bounds add the margins and zero margins recover the nominal problem") {
  const Scenario sc = Scenario::defaults();
  const StateVec x0 = initial_state(sc);
  std::vector<double> margins(21);
  for (int i = 0; i <= 20; ++i) {
    margins[i] = 0.001 * i;
  }
  const OcpProblem robust =
      build_ocp(Variant::kRobust, x0, 1.0, margins, sc.nmpc, sc.tower, sc.helix, sc.params);
  for (int i = 0; i <= 20; ++i) {
    CHECK(robust.stage_bounds[i] == doctest::Approx(0.2 + 0.001 * i).epsilon(1e-15));
  }
  const OcpProblem zero = build_ocp(Variant::kRobust, x0, 1.0, std::vector<double>(21, 0.0),
                                    sc.nmpc, sc.tower, sc.helix, sc.params);
  const OcpProblem nominal =
      build_ocp(Variant::kNominal, x0, 1.0, std::nullopt, sc.nmpc, sc.tower, sc.helix, sc.params);
  CHECK(zero.stage_bounds == nominal.stage_bounds);
  RtiSolver a;
  RtiSolver b;
  const SolverSolution sa = a.rti_step(zero, initial_guess(zero));
  const SolverSolution sb = b.rti_step(nominal, initial_guess(nominal));
  for (int i = 0; i < 20; ++i) {
    CHECK((sa.inputs[i] - sb.inputs[i]).norm() == 0.0);
  }
}

TEST_CASE("margin list length is checked") {
  const Scenario sc = Scenario::defaults();
  const StateVec x0 = initial_state(sc);
  CHECK_THROWS_AS(build_ocp(Variant::kRobust, x0, 0.0, std::nullopt, sc.nmpc, sc.tower, sc.helix, sc.params),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_ocp(Variant::kRobust, x0, 0.0, std::vector<double>(5, 0.0), sc.nmpc, sc.tower,
                            sc.helix, sc.params),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_ocp(Variant::kNominal, x0, 0.0, std::vector<double>(21, 0.0), sc.nmpc, sc.tower,
                            sc.helix, sc.params),
                  std::invalid_argument);
}

TEST_CASE("variant names") {
  CHECK(variant_from_string("robust") == Variant::kRobust);
  CHECK(std::string(to_string(Variant::kNominal)) == "nominal");
  CHECK_THROWS_AS(variant_from_string("tube"), std::invalid_argument);
}

TEST_CASE("trajectory merit adds the slack penalty") {
  const Scenario sc = Scenario::defaults();
  const OcpProblem p = build_ocp(Variant::kNominal, initial_state(sc), 0.0, std::nullopt, sc.nmpc,
                                 sc.tower, sc.helix, sc.params);
  SolverSolution g = initial_guess(p);
  const double base = trajectory_merit(p, g.states, g.inputs, g.slacks);
  g.slacks[3] = 0.01;
  CHECK(trajectory_merit(p, g.states, g.inputs, g.slacks) - base ==
        doctest::Approx(1e4 * 0.01).epsilon(1e-9));
}
